import pytest

import ipsw


def test_poly_arithmetic():
    f = ipsw.Poly("(x1+1)*(x2+1)")
    assert f.sparsity == 4
    assert f.degree == 2
    assert str(ipsw.Poly("x1^2").multilinearize()) == "x1"
    assert (f - f).is_zero()
    assert f.evaluate([1, 2]) == "6"
    assert ipsw.Poly("x1 + 1", field="p=7").evaluate([6]) == "0"


def test_measures():
    f = ipsw.Poly("x1*y1+x2*y2")
    assert ipsw.coeff_dim(f, "x|y") == 2
    assert ipsw.eval_dim(f, "x|y") == 2
    assert ipsw.leading_monomial(ipsw.Poly("5")) == "1"
    assert str(ipsw.leading_diagonal(ipsw.Poly("x1+y1+3"), "x|y")) == "x1 + y1"


def test_refute_and_verify():
    cert = ipsw.refute_roabp([1] * 4, 5, field="p=10007")
    assert cert.kind == "roabp"
    assert cert.verify_exact()["valid"]
    pit = cert.verify_pit(trials=10, seed=1)
    assert pit["valid"] and pit["probabilistic"]
    again = ipsw.Certificate.parse(cert.write())
    assert again.verify_exact()["valid"]
    assert ipsw.refute_mlf([1, 1, 1], 4).verify_exact()["valid"]


def test_errors_map_to_exceptions():
    with pytest.raises(ipsw.SatisfiableError):
        ipsw.refute_roabp([1, 1], 1)
    with pytest.raises(ipsw.ParseError):
        ipsw.Poly("x1 +* 2")
    with pytest.raises(ipsw.Error):
        ipsw.Certificate.parse("FIELD rational\n")


def test_invalid_certificate_reports_witness():
    cert = ipsw.Certificate.parse("FIELD rational\nNVARS 2\nAXIOM x1*x2+1\nPROOF y1\n")
    r = cert.verify_exact()
    assert not r["valid"]
    assert r["status"] == "fails-one"
    assert len(r["witness"]) == 2


def test_experiment_and_cli():
    csv, refuted, warnings = ipsw.run_experiment("CHECK degree-bound n=3 beta=5\nCHECK nope n=1\n")
    assert csv.splitlines()[0] == "claim,params,measured,claimed,verdict,millis"
    assert "confirmed" in csv
    assert not refuted
    assert len(warnings) == 1
    code, out, _ = ipsw.cli(["measure", "--poly", "x1*y1+x2*y2", "--partition", "x|y", "coeffdim"])
    assert code == 0 and out == "coeffdim,2\n"
    assert ipsw.cli(["refute", "roabp", "--n", "2", "--beta", "1"])[0] == 2

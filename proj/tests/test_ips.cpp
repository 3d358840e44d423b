#include <doctest.h>

#include "ipsw/certificate.hpp"
#include "ipsw/ips.hpp"
#include "support.hpp"

using namespace ipsw;

namespace {
const FieldSpec Q = FieldSpec::rational();

FieldElement E(int64_t v, const FieldSpec& spec = Q) { return FieldElement::from_int(spec, v); }
std::vector<FieldElement> ones(size_t n, const FieldSpec& spec = Q) { return std::vector<FieldElement>(n, E(1, spec)); }
SparsePoly P(const char* text, size_t n, const FieldSpec& spec = Q) { return parse_poly(text, spec, VarLayout::xs(n)); }

const char* kXyCert =
    "FIELD rational\n"
    "NVARS 2\n"
    "AXIOM x1*x2+1\n"
    "PROOF (+ (* (+ 1 (scale -1/2 (* x1 x2))) y1) (scale 1/2 (* (* x2 x2) z1)) (scale 1/2 (* x1 z2)))\n";

IpsCertificate with_proof(const char* axiom_block, const char* proof) {
    return parse_certificate(std::string(axiom_block) + "PROOF " + proof + "\n");
}

// Adds one to a single roABP entry.
IpsCertificate corrupt(IpsCertificate cert) {
    const Roabp& a = std::get<Roabp>(cert.proof);
    auto layers = a.layers();
    auto& e = layers[layers.size() / 2][0][0];
    e = e + UniPoly::constant(FieldElement::one(a.spec()));
    cert.proof = Roabp(a.spec(), a.nvars(), a.order(), layers);
    return cert;
}
}  // namespace

TEST_CASE("exact verification on small systems") {
    const char* unit = "FIELD rational\nNVARS 1\nAXIOM 1\nBOOLEAN off\n";
    CHECK(verify_exact(with_proof(unit, "y1")).valid());
    CHECK(verify_exact(with_proof(unit, "(+ y1 1)")).status == VerifyStatus::FailsZero);
    const IpsCertificate xy = parse_certificate(kXyCert);
    CHECK(verify_exact(xy).valid());
    const char* xy_sys = "FIELD rational\nNVARS 2\nAXIOM x1*x2+1\n";
    const VerifyResult bad = verify_exact(with_proof(xy_sys, "y1"));
    CHECK(bad.status == VerifyStatus::FailsOne);
    REQUIRE(bad.witness.has_value());
    CHECK(bad.witness->size() == 2);
}

TEST_CASE("linearity tags are checked") {
    IpsCertificate xy = parse_certificate(kXyCert);
    xy.linearity = Linearity::LinYZ;
    CHECK(verify_exact(xy).valid());
    const char* sys = "FIELD rational\nNVARS 1\nAXIOM 1\nBOOLEAN off\nLINEARITY lin_y\n";
    CHECK(verify_exact(with_proof(sys, "(* y1 y1)")).status == VerifyStatus::FailsLinearity);
}

TEST_CASE("certificate text round trip") {
    const IpsCertificate xy = parse_certificate(kXyCert);
    const IpsCertificate again = parse_certificate(write_certificate(xy));
    CHECK(expand(again.proof) == expand(xy.proof));
    const IpsCertificate r = build_roabp_refutation(ones(3), E(7)).cert;
    CHECK(expand(parse_certificate(write_certificate(r)).proof) == expand(r.proof));
    CHECK_THROWS_AS(parse_certificate("FIELD rational\nNVARS 2\n"), ParseError);
    CHECK_THROWS_AS(parse_certificate("FIELD rational\nNVARS 1\nAXIOM x1\nPROOF (* y1\n"), ParseError);
    CHECK_THROWS_AS(parse_certificate("FIELD p=100\nNVARS 1\nAXIOM x1\nPROOF y1\n"), Error);
}

TEST_CASE("probabilistic verification") {
    const FieldSpec F = FieldSpec::prime(10007);
    const IpsCertificate cert = build_roabp_refutation(ones(6, F), E(7, F)).cert;
    const VerifyResult r = verify_pit(cert, 50, 1);
    CHECK(r.valid());
    CHECK(r.probabilistic);
    CHECK(r.bound_den == 10007);
    CHECK(r.bound_num == r.degree);
    const VerifyResult bad = verify_pit(corrupt(cert), 50, 1);
    CHECK_FALSE(bad.valid());
    CHECK(bad.witness.has_value());
    const VerifyResult vacuous = verify_pit(cert, 0, 1);
    CHECK(vacuous.valid());
    CHECK(vacuous.bound_num == 1);
    CHECK(vacuous.bound_den == 1);
}

TEST_CASE("transformation to linear form") {
    const IpsCertificate xy = parse_certificate(kXyCert);
    const LinearizeResult same = ips_to_linear(xy);
    CHECK(verify_exact(same.cert).valid());

    const IpsCertificate quad =
        with_proof("FIELD rational\nNVARS 1\nAXIOM 1\nBOOLEAN off\n", "(+ (* y1 y1) (* y1 (+ 1 (scale -1 y1))))");
    REQUIRE(verify_exact(quad).valid());
    const LinearizeResult lin = ips_to_linear(quad);
    CHECK(verify_exact(lin.cert).valid());
    CHECK(expand(lin.cert.proof) == parse_poly("y1", Q, lin.cert.system.layout()));

    for (auto route : {DivisionRoute::Formula, DivisionRoute::Circuit}) {
        const LinearizeResult r = ips_to_linear(xy, {}, route);
        CHECK(verify_exact(r.cert).valid());
        const SparsePoly c = expand(r.cert.proof);
        for (size_t v = 2; v < c.nvars(); ++v) CHECK(c.degree_in(v) <= 1);
    }
}

TEST_CASE("reachable subset sums") {
    CHECK(reachable_sums(ones(2)) == std::vector<FieldElement>{E(0), E(1), E(2)});
    CHECK(reachable_sums(ones(3)).size() == 4);
    CHECK(reachable_sums({E(1), E(2), E(4)}).size() == 8);
}

TEST_CASE("subset-sum witness") {
    CHECK_THROWS_AS(subset_sum_witness(ones(2), E(1)), SatisfiableError);
    const SubsetSumWitness w = subset_sum_witness(ones(2), E(3));
    CHECK(w.f_ml == P("-1/3 - 1/6*x1 - 1/6*x2 - 1/3*x1*x2", 2));
    // f_ml * (x1 + x2 - 3) = 1 on the cube
    const SparsePoly prod = w.f_ml * subset_sum_axiom(ones(2), E(3));
    CHECK(multilinearize(prod) == P("1", 2));
}

TEST_CASE("roABP multilinearization") {
    auto identity_holds = [](const Roabp& a, const RoabpMultilinearization& m) {
        SparsePoly rhs = expand(m.ml);
        for (size_t v = 0; v < m.h.size(); ++v) {
            if (!m.h[v]) continue;
            const SparsePoly x = SparsePoly::variable(a.spec(), a.nvars(), v);
            rhs += expand(*m.h[v]) * (x * x - x);
        }
        return rhs == expand(a) && expand(m.ml).is_multilinear();
    };
    const Roabp sq(Q, 1, {0}, {UniMatrix{{UniPoly::monomial(E(1), 2)}}});
    const auto m = multilinearize_roabp(sq);
    CHECK(expand(m.ml) == P("x1", 1));
    CHECK(expand(*m.h[0]) == P("1", 1));
    CHECK(identity_holds(sq, m));
    const Roabp x2y(Q, 2, {0, 1}, {UniMatrix{{UniPoly::monomial(E(1), 2)}}, UniMatrix{{UniPoly::monomial(E(1), 1)}}});
    CHECK(identity_holds(x2y, multilinearize_roabp(x2y)));
    testing::Rng rng(11);
    for (int i = 0; i < 10; ++i) {
        const Roabp a = testing::random_roabp(Q, 3, rng);
        CHECK(identity_holds(a, multilinearize_roabp(a)));
    }
}

TEST_CASE("roABP refutation of subset sum") {
    for (size_t n = 2; n <= 5; ++n) {
        const FieldSpec F = FieldSpec::prime(101);
        const RefutationInfo info = build_roabp_refutation(ones(n, F), E(static_cast<int64_t>(n) + 1, F));
        const VerifyResult r = verify_exact(info.cert);
        CHECK(r.valid());
        CHECK(expand(info.cert.proof).ideg() <= 2);
    }
    CHECK_THROWS_AS(build_roabp_refutation(ones(2), E(1)), SatisfiableError);
    const RefutationInfo reversed = build_roabp_refutation({E(1), E(2), E(5)}, E(4), {2, 1, 0});
    CHECK(verify_exact(reversed.cert).valid());
}

TEST_CASE("multilinear formula refutation of subset sum") {
    for (size_t n = 1; n <= 4; ++n) {
        const IpsCertificate cert = build_mlformula_refutation(ones(n), E(static_cast<int64_t>(n) + 1));
        CHECK(verify_exact(cert).valid());
        const auto& f = std::get<MultilinearFormula>(cert.proof);
        CHECK(multilinear_formula_check(f).ok);
        CHECK(f.product_depth() <= 1);
    }
    CHECK_THROWS_AS(build_mlformula_refutation(ones(3, FieldSpec::prime(5)), E(4, FieldSpec::prime(5))), DomainError);
}

TEST_CASE("monomial square witness") {
    for (size_t d = 1; d <= 4; ++d) {
        const MonomialSquareWitness w = monomial_square_witness(d, Q);
        CHECK(expand(w.product_form) == w.sum_form);
        CHECK(w.sum_form.sparsity() == (size_t{1} << d) - 1);
    }
}

TEST_CASE("sparse times formula witness") {
    auto check = [](const SparsePoly& g, const SparsePoly& f) {
        const size_t n = f.nvars();
        const SparsePoly c = sparse_times_formula_witness(g, f);
        std::vector<SparsePoly> zero_images, bool_images;
        for (size_t i = 0; i < n; ++i) {
            const SparsePoly x = SparsePoly::variable(f.spec(), n, i);
            zero_images.push_back(x);
            bool_images.push_back(x);
        }
        for (size_t i = 0; i < n; ++i) {
            const SparsePoly x = SparsePoly::variable(f.spec(), n, i);
            zero_images.push_back(SparsePoly(f.spec(), n));
            bool_images.push_back(x * x - x);
        }
        const SparsePoly gf = g * f;
        return c.substitute(zero_images).is_zero() && c.substitute(bool_images) == gf - multilinearize(gf);
    };
    CHECK(sparse_times_formula_witness(P("x1", 1), P("x1", 1)) == parse_poly("x2", Q, VarLayout::xs(2)));
    CHECK(check(P("1 - 1/2*x1*x2", 2), P("x1*x2", 2)));
    testing::Rng rng(12);
    for (int i = 0; i < 10; ++i) CHECK(check(testing::random_multilinear(Q, 3, rng), P("x1*x2", 3)));
}

TEST_CASE("sparse simulation gives IPS_LIN' refutations") {
    const AxiomSystem unit{Q, 1, {P("1", 1)}, false};
    const IpsCertificate c1 = simulate_sparse_linips(unit, {P("1", 1)});
    CHECK(verify_exact(c1).valid());
    const AxiomSystem xy{Q, 2, {P("x1*x2+1", 2)}, true};
    const IpsCertificate c2 = simulate_sparse_linips(xy, {P("1 - 1/2*x1*x2", 2)});
    CHECK(verify_exact(c2).valid());
    CHECK(c2.linearity == Linearity::LinY);
    const SubsetSumWitness w = subset_sum_witness(ones(2), E(3));
    const AxiomSystem ss{Q, 2, {subset_sum_axiom(ones(2), E(3))}, true};
    CHECK(verify_exact(simulate_sparse_linips(ss, {w.f_ml})).valid());
    CHECK_THROWS_AS(simulate_sparse_linips(xy, {P("1", 2)}), DomainError);
}

TEST_CASE("multilinear IPS_LIN search") {
    const AxiomSystem xy{Q, 2, {P("x1*x2+1", 2)}, true};
    CHECK_FALSE(find_multilinear_lin_refutation(xy).has_value());
    const AxiomSystem ss{Q, 2, {P("x1*x2", 2), P("x1+x2-2", 2)}, true};
    const auto cert = find_multilinear_lin_refutation(ss);
    REQUIRE(cert.has_value());
    CHECK(verify_exact(*cert).valid());
}

TEST_CASE("appendix inverse polynomial") {
    CHECK(appendix_inverse_poly(1, E(2)) == P("-1/2 - 1/2*x1", 1));
    CHECK(appendix_inverse_poly(2, E(3)) == subset_sum_witness(ones(2), E(3)).f_ml);
    CHECK_THROWS_AS(appendix_inverse_poly(2, E(1)), DomainError);
    CHECK_THROWS_AS(appendix_inverse_poly(5, E(7, FieldSpec::prime(5))), DomainError);
}

TEST_CASE("linear system solver") {
    std::vector<std::vector<FieldElement>> a{{E(1), E(1)}, {E(1), E(-1)}};
    auto x = solve_linear_system(a, {E(3), E(1)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == E(2));
    CHECK((*x)[1] == E(1));
    CHECK_FALSE(solve_linear_system({{E(1), E(1)}, {E(2), E(2)}}, {E(1), E(3)}).has_value());
}

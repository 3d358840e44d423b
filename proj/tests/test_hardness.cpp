#include <doctest.h>

#include "ipsw/certificate.hpp"
#include "ipsw/hardness.hpp"
#include "support.hpp"

using namespace ipsw;

namespace {
const FieldSpec Q = FieldSpec::rational();
const FieldSpec F3 = FieldSpec::prime(3);

FieldElement E(int64_t v, const FieldSpec& spec = Q) { return FieldElement::from_int(spec, v); }
SparsePoly P(const char* text, size_t n, const FieldSpec& spec = Q) { return parse_poly(text, spec, VarLayout::xs(n)); }
}  // namespace

TEST_CASE("degree and sparsity bounds") {
    const HardnessReport d3 = check_degree_bound(3, E(5));
    CHECK(d3.verdict == Verdict::Confirmed);
    CHECK(d3.measured == 3);
    const HardnessReport d6 = check_degree_bound(6, E(-1, FieldSpec::prime(101)));
    CHECK(d6.verdict == Verdict::Confirmed);
    CHECK(d6.measured == 6);
    CHECK_THROWS_AS(check_degree_bound(2, E(1)), DomainError);
    CHECK(check_sparsity_bound(4, E(6)).measured == 16);
    CHECK(check_sparsity_bound(1, E(2)).measured == 2);
    CHECK(check_sparsity_bound(8, E(10)).measured == 256);
}

TEST_CASE("evaluation dimension over the cube") {
    CHECK(check_eval_dim_xy(2, E(3)).measured == 4);
    CHECK(check_eval_dim_xy(3, E(4)).measured == 8);
    const HardnessReport r = check_eval_dim_xy(4, E(17, FieldSpec::prime(10007)));
    CHECK(r.measured == 16);
    CHECK(r.verdict == Verdict::Confirmed);
}

TEST_CASE("any partition") {
    const auto parts = balanced_partitions(4);
    CHECK(parts.size() == 3);
    for (const auto& p : parts) {
        const HardnessReport r = check_any_partition(2, E(5), p);
        CHECK(r.verdict == Verdict::Confirmed);
        CHECK(r.measured >= 4);
    }
    CHECK(balanced_partitions(5).size() == 15);
    CHECK(balanced_partitions(5)[0].w.size() == 1);
}

TEST_CASE("multiples of sparse polynomials") {
    CHECK(certify_multiple_sps(P("x1*x2*x3*(x1+1)", 3)) == 8);
    CHECK(certify_multiple_sps(P("x1*x2*x3*x4*x5", 5)) == 32);
    CHECK(certify_multiple_sps(P("7", 2)) == 1);
    CHECK(certify_multiple_sps_t(P("x1*x2*x3*x4*x5*x6", 6), 2) == 8);
    CHECK(certify_multiple_sps_t(P("x1^2*x2", 2), 1) == certify_multiple_sps(P("x1^2*x2", 2)));
    CHECK_THROWS_AS(certify_multiple_sps_t(P("x1^3", 1, FieldSpec::prime(2)), 1), DomainError);
    CHECK_THROWS_AS(certify_multiple_sps(SparsePoly(Q, 2)), DomainError);
}

TEST_CASE("multiples of sparse multilinear polynomials") {
    const std::vector<FieldElement> a{E(-1), E(-1)};
    CHECK(certify_multiple_sparse(P("(x1+1)*(x2+1)", 2), a) == 4);
    const SparsePoly h = P("(x1+1)*(x2+1)*(x1+2)", 2);
    CHECK(certify_multiple_sparse(h, a) == 4);
    CHECK(h.sparsity() >= 4);
    CHECK(certify_multiple_sparse(P("1", 2), a) == 1);
    CHECK_THROWS_AS(certify_multiple_sparse(P("x1", 2), {E(0), E(1)}), DomainError);
}

TEST_CASE("minimum sparsity of multiples by enumeration") {
    const MinMultiple m = min_multiple_sparsity_bruteforce(P("(x1+1)*(x2+1)", 2, F3));
    CHECK(m.sparsity == 4);
    CHECK(min_multiple_sparsity_bruteforce(P("(x1+1)*(x2+1)+1", 2, F3)).sparsity >= 4);
    CHECK(min_multiple_sparsity_bruteforce(P("1", 1, F3)).sparsity == 1);
    // x1 + x2 has the 2-sparse multiple x1 + x2 itself and nothing sparser
    CHECK(min_multiple_sparsity_bruteforce(P("x1+x2", 2, F3)).sparsity == 2);
}

TEST_CASE("multiples of roABPs via the leading diagonal") {
    const VarLayout l{2, 2, 0};
    const PartitionSpec xy = PartitionSpec::parse("x|y", l);
    CHECK(certify_multiple_roabp(parse_poly("(x1+y1+1)*(x2+y2+1)", Q, l), xy) == 4);
    const VarLayout l1{1, 1, 0};
    CHECK(certify_multiple_roabp(parse_poly("x1*y1", Q, l1), PartitionSpec::parse("x|y", l1)) == 1);
    testing::Rng rng(3);
    for (int i = 0; i < 10; ++i) {
        const SparsePoly g = testing::random_nonzero_poly(Q, 4, 4, 2, rng);
        const SparsePoly h = parse_poly("x1+y1", Q, l) * g;
        CHECK(certify_multiple_roabp(h, xy) == 2 * leading_diagonal(g, xy).sparsity());
    }
}

TEST_CASE("every partition of the pairwise product") {
    const HardnessReport r4 = certify_every_partition_roabp(pairwise_product(4, std::vector<FieldElement>(6, E(-1))), E(0));
    CHECK(r4.verdict == Verdict::Confirmed);
    CHECK(r4.measured >= 4);
    testing::Rng rng(8);
    std::vector<FieldElement> alpha;
    for (int i = 0; i < 6; ++i) alpha.push_back(testing::random_element(Q, rng, 1, 9));
    CHECK(certify_every_partition_roabp(pairwise_product(4, alpha), E(0)).verdict == Verdict::Confirmed);
    const HardnessReport r2 = certify_every_partition_roabp(pairwise_product(2, {E(1)}), E(0));
    CHECK(r2.measured == 2);
}

TEST_CASE("generator vanishes on the determinant") {
    const SvbGenerator g2 = svb_build(2, 1, Q);
    CHECK(svb_check(determinant_poly(2, Q), g2).vanishes);
    const FieldSpec F = FieldSpec::prime(10007);
    const SvbGenerator g3 = svb_build(3, 2, F);
    const SvbCheck mc = svb_check(determinant_poly(3, F), g3, 200, 5);
    CHECK(mc.vanishes);
    CHECK(mc.probabilistic);
    CHECK(mc.bound_den == 10007);
    // a single entry survives
    const SvbCheck entry = svb_check(SparsePoly::variable(F, 9, 4), g3, 20, 5);
    CHECK_FALSE(entry.vanishes);
    CHECK(entry.witness_seed.size() == 6);
    CHECK(determinant_poly(3, Q).sparsity() == 6);
}

TEST_CASE("extraction of a multiple from a certificate") {
    const IpsCertificate xy = parse_certificate(
        "FIELD rational\nNVARS 2\nAXIOM x1*x2+1\n"
        "PROOF (+ (* (+ 1 (scale -1/2 (* x1 x2))) y1) (scale 1/2 (* (* x2 x2) z1)) (scale 1/2 (* x1 z2)))\n");
    const ExtractedMultiple m = extract_multiple_from_ips(xy, 0, {E(1), E(1)});
    CHECK(m.divisible());
    CHECK(m.multiple == P("(1 - 1/2*x1*x2)*(x1*x2+1)", 2));

    const AxiomSystem sys{Q, 2, {P("x1*x2", 2), P("x1+x2-2", 2)}, true};
    const auto cert = find_multilinear_lin_refutation(sys);
    REQUIRE(cert.has_value());
    const ExtractedMultiple e = extract_multiple_from_ips(*cert, 0, {E(1), E(1)});
    CHECK(e.divisible());
    CHECK_FALSE(e.multiple.is_zero());
    CHECK(certify_multiple_sps(e.multiple) >= 4);
    // (0,0) does not satisfy x1 + x2 - 2
    CHECK_THROWS_AS(extract_multiple_from_ips(*cert, 0, {E(0), E(0)}), DomainError);
}

TEST_CASE("report verdicts") {
    HardnessReport r;
    r.measured = 5;
    r.claimed = 4;
    r.relation = Relation::AtLeast;
    r.decide();
    CHECK(r.verdict == Verdict::Confirmed);
    r.relation = Relation::AtMost;
    r.evidence = P("x1", 1);
    r.decide();
    CHECK(r.verdict == Verdict::Refuted);
    CHECK(r.counterexample.has_value());
    HardnessReport bare;
    bare.measured = 1;
    bare.claimed = 2;
    bare.decide();
    CHECK(bare.verdict == Verdict::Inconclusive);
    HardnessReport mc;
    mc.probabilistic = true;
    mc.error_bound = "2/10007 per trial";
    mc.decide();
    CHECK(mc.verdict_label() == "confirmed (probabilistic, p <= 2/10007 per trial)");
}

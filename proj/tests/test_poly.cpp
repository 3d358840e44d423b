#include <doctest.h>

#include "ipsw/poly.hpp"
#include "ipsw/unipoly.hpp"
#include "support.hpp"

using namespace ipsw;

namespace {
const FieldSpec Q = FieldSpec::rational();
const FieldSpec F101 = FieldSpec::prime(101);

SparsePoly P(const char* text, size_t n, const FieldSpec& spec = Q) { return parse_poly(text, spec, VarLayout::xs(n)); }
}  // namespace

TEST_CASE("arithmetic and canonical form") {
    CHECK(P("(x1+1)*(x1-1)", 1) == P("x1^2-1", 1));
    CHECK((P("x1+x2", 2) * SparsePoly(Q, 2)).is_zero());
    CHECK((P("x1+x2", 2) - P("x2+x1", 2)).is_zero());
    CHECK(P("2*x1*x2 + x1*x2", 2).sparsity() == 1);
    CHECK(P("(x1+x2)^3", 2).sparsity() == 4);
    CHECK(P("x1^2*x2 + x2^5", 2).degree() == 5);
    CHECK(P("x1^2*x2 + x2^5", 2).ideg() == 5);
}

TEST_CASE("substitution") {
    const SparsePoly f = P("x1^2", 3);
    std::map<size_t, SparsePoly> images{{0, P("x2*x3", 3)}};
    CHECK(f.substitute(images) == P("x2^2*x3^2", 3));
    CHECK(P("x1*x2+3", 2).partial_evaluate({{0, FieldElement::from_int(Q, 2)}}) == P("2*x2+3", 2));
}

TEST_CASE("multilinearization examples") {
    CHECK(multilinearize(P("x1^2", 1)) == P("x1", 1));
    CHECK(multilinearize(P("x1^3*x2^2 - x1*x2", 2)).is_zero());
    CHECK(multilinearize(P("x1^2+2*x1+1", 1)) == P("3*x1+1", 1));
}

TEST_CASE("extremal monomials and coefficients") {
    const auto lex = MonomialOrder::lex();
    CHECK(leading_monomial(P("x1*x2 + x1", 2), lex) == leading_monomial(P("x1*x2", 2), lex));
    const SparsePoly five = P("5", 1);
    CHECK(leading_monomial(five).is_one());
    CHECK(leading_coeff(five) == FieldElement::from_int(Q, 5));
    CHECK(leading_monomial(P("(x1+1)*(x2+1)", 2)) == Monomial(std::vector<Exp>{1, 1}));
    CHECK(trailing_monomial(P("(x1+1)*(x2+1)", 2)).is_one());
    CHECK_THROWS_AS(leading_monomial(SparsePoly(Q, 2)), NoExtremalMonomial);
    // lex with x2 most significant prefers x2 over x1^5
    CHECK(leading_monomial(P("x1^5 + x2", 2), MonomialOrder::lex({1, 0})) == Monomial(std::vector<Exp>{0, 1}));
    CHECK(leading_monomial(P("x1^5 + x2", 2), MonomialOrder::grlex({1, 0})) == Monomial(std::vector<Exp>{5, 0}));
}

TEST_CASE("monomial order parsing") {
    CHECK(MonomialOrder::parse("lex").kind() == MonomialOrder::Kind::Lex);
    CHECK(MonomialOrder::parse("grlex:2,1").perm() == std::vector<size_t>{1, 0});
    CHECK_THROWS(MonomialOrder::parse("lex:1,1"));
}

TEST_CASE("elementary symmetric polynomials") {
    CHECK(elementary_symmetric(2, 1, Q) == P("x1+x2", 2));
    CHECK(elementary_symmetric(3, 3, Q) == P("x1*x2*x3", 3));
    CHECK(elementary_symmetric(3, 0, Q) == P("1", 3));
    CHECK(elementary_symmetric(5, 2, Q).sparsity() == 10);
}

TEST_CASE("coefficients in a subring") {
    // variables x1 (=x), x2 (=y)
    CHECK(coeff_in_subring(P("x1^2*x2 + x2^2", 2), {1}, {1}) == P("x1^2", 2));
    CHECK(coeff_in_subring(P("x2*(x1+3)", 2), {1}, {0}).is_zero());
    CHECK(coeff_in_subring(P("x1*x3 + x2*x4", 4), {2, 3}, {1, 0}) == P("x1", 4));
}

TEST_CASE("multilinear interpolation") {
    auto v = [](std::initializer_list<int64_t> xs) {
        std::vector<FieldElement> out;
        for (auto x : xs) out.push_back(FieldElement::from_int(Q, x));
        return out;
    };
    CHECK(interpolate_multilinear(v({0, 0, 0, 1}), 2) == P("x1*x2", 2));
    CHECK(interpolate_multilinear(v({1, 1, 1, 1}), 2) == P("1", 2));
    std::vector<FieldElement> inv{FieldElement::parse(Q, "-1/2"), FieldElement::parse(Q, "-1")};
    CHECK(interpolate_multilinear(inv, 1) == P("-1/2 - 1/2*x1", 1));
}

TEST_CASE("interpolation round trip against the cube oracle") {
    testing::Rng rng(7);
    for (int i = 0; i < 30; ++i) {
        const size_t n = 1 + i % 5;
        const SparsePoly f = testing::random_poly(i % 2 ? Q : F101, n, 5, 3, rng);
        CHECK(interpolate_multilinear(cube_values(f, n), n) == testing::cube_interpolation_oracle(f, n));
    }
}

TEST_CASE("random restriction") {
    const SparsePoly f = P("x1*x2", 2);
    CHECK(random_restriction(f, 1, 1, 3).poly == f);
    CHECK(random_restriction(f, 1, 1, 3).kept.size() == 2);
    CHECK(random_restriction(f, 0, 1, 3).poly.is_zero());
    const Restriction r = random_restriction(P("x1+x2+x3+x4", 4), 1, 2, 11);
    CHECK(r.poly.sparsity() == r.kept.size());
}

TEST_CASE("division") {
    CHECK(divide_exact(P("x1^2-1", 1), P("x1+1", 1)) == P("x1-1", 1));
    CHECK_THROWS_AS(divide_exact(P("x1^2+1", 1), P("x1+1", 1)), DomainError);
    auto [qt, r] = divide_with_remainder(P("x1^2*x2 + x2 + 1", 2), P("x1*x2", 2));
    CHECK(qt == P("x1", 2));
    CHECK(r == P("x2 + 1", 2));
}

TEST_CASE("expansion budget") {
    ExpansionBudget b(100);
    CHECK_THROWS_AS(P("(x1+x2+x3+x4+1)^8", 4), ResourceError);
}

TEST_CASE("text round trip") {
    const VarLayout l{2, 1, 2};
    const SparsePoly f = parse_poly("x1*y1 - 3/2*z2^2 + x2 + 7", Q, l);
    CHECK(parse_poly(to_string(f, l), Q, l) == f);
    auto [g, inferred] = parse_poly("x1*y1+x2*y2", Q);
    CHECK(inferred.nx == 2);
    CHECK(inferred.ny == 2);
    CHECK(g.sparsity() == 2);
    CHECK_THROWS_AS(parse_poly("x1 +* 2", Q), ParseError);
    CHECK_THROWS_AS(parse_poly("x3", Q, VarLayout::xs(2)), ParseError);
}

TEST_CASE("univariate polynomials and Lagrange basis") {
    const UniPoly a(Q, {FieldElement::from_int(Q, 1), FieldElement::from_int(Q, 1)});  // 1 + t
    CHECK((a * a).coeffs().size() == 3);
    CHECK((a * a).eval(FieldElement::from_int(Q, 2)) == FieldElement::from_int(Q, 9));
    std::vector<FieldElement> nodes{FieldElement::from_int(F101, 0), FieldElement::from_int(F101, 1),
                                    FieldElement::from_int(F101, 5)};
    auto basis = lagrange_basis(nodes);
    for (size_t m = 0; m < nodes.size(); ++m)
        for (size_t j = 0; j < nodes.size(); ++j) CHECK(basis[m].eval(nodes[j]).is_one() == (m == j));
}

#include <doctest.h>

#include "ipsw/circuit.hpp"
#include "support.hpp"

using namespace ipsw;

namespace {
const FieldSpec Q = FieldSpec::rational();
const FieldSpec F7 = FieldSpec::prime(7);

SparsePoly P(const char* text, size_t n, const FieldSpec& spec = Q) { return parse_poly(text, spec, VarLayout::xs(n)); }
FieldElement E(int64_t v, const FieldSpec& spec = Q) { return FieldElement::from_int(spec, v); }
UniPoly t_pow(const FieldSpec& spec, size_t k) { return UniPoly::monomial(FieldElement::one(spec), k); }

PoweringFormula sum_squared(const FieldSpec& spec) {
    PoweringFormula p(spec, 2);
    p.add_term(FieldElement::one(spec), LinearForm{{E(1, spec), E(1, spec)}, E(0, spec)}, 2);
    return p;
}

Roabp xy_roabp(const FieldSpec& spec) {
    return Roabp(spec, 2, {0, 1}, {UniMatrix{{t_pow(spec, 1)}}, UniMatrix{{t_pow(spec, 1)}}});
}
}  // namespace

TEST_CASE("expansion of each circuit class") {
    CHECK(expand(xy_roabp(Q)) == P("x1*x2", 2));
    CHECK(expand(sum_squared(Q)) == P("x1^2+2*x1*x2+x2^2", 2));
    MultilinearFormula f(Q, 2);
    f.set_root(f.mul({f.add({f.var(0), f.constant(E(1))}), f.add({f.var(1), f.constant(E(1))})}));
    CHECK(expand(f) == P("x1*x2+x1+x2+1", 2));
    CHECK(multilinear_formula_check(f).ok);
}

TEST_CASE("evaluation") {
    CHECK(eval(sum_squared(Q), {E(1), E(2)}) == E(9));
    CHECK(eval(xy_roabp(F7), {E(3, F7), E(4, F7)}) == E(5, F7));
    CHECK(eval(PoweringFormula(Q, 3), {E(1), E(2), E(3)}).is_zero());
}

TEST_CASE("expansion budget is enforced") {
    PoweringFormula p(Q, 6);
    p.add_term(E(1), LinearForm{std::vector<FieldElement>(6, E(1)), E(1)}, 12);
    CHECK_THROWS_AS(expand(p, 1000), ResourceError);
}

TEST_CASE("duality decomposition") {
    for (size_t n = 1; n <= 4; ++n)
        for (uint32_t d = 0; d <= 4; ++d) {
            const auto tuples = duality_decompose(n, d, Q);
            SparsePoly acc(Q, n);
            for (const auto& tuple : tuples) {
                REQUIRE(tuple.size() == n);
                SparsePoly prod = SparsePoly::constant(Q, n, 1);
                for (size_t j = 0; j < n; ++j) prod *= tuple[j].to_sparse(n, j);
                acc += prod;
            }
            SparsePoly sum(Q, n);
            for (size_t j = 0; j < n; ++j) sum += SparsePoly::variable(Q, n, j);
            CHECK(acc == sum.pow(d));
            if (d == 0) CHECK(tuples.size() == 1);
        }
}

TEST_CASE("powering formula to roABP") {
    PoweringFormula cube(Q, 1);
    cube.add_term(E(1), LinearForm{{E(1)}, E(0)}, 3);
    const Roabp a = powering_to_roabp(cube, {0});
    CHECK(expand(a) == P("x1^3", 1));
    CHECK(a.width() <= 4);
    const Roabp b = powering_to_roabp(sum_squared(Q), {1, 0});
    CHECK(expand(b) == P("x1^2+2*x1*x2+x2^2", 2));
    CHECK(b.width() <= 3);
    CHECK(expand(powering_to_roabp(PoweringFormula(Q, 2), {0, 1})).is_zero());
    testing::Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        const auto p = testing::random_powering(Q, 3, rng);
        CHECK(expand(powering_to_roabp(p, {2, 0, 1})) == p.expand());
    }
}

TEST_CASE("roABP closure operations") {
    testing::Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        const FieldSpec spec = i % 2 ? Q : FieldSpec::prime(101);
        Roabp a = testing::random_roabp(spec, 3, rng);
        Roabp b = testing::random_roabp(spec, 3, rng);
        b = Roabp(spec, 3, a.order(), b.layers());
        CHECK(expand(roabp_add(a, b)) == expand(a) + expand(b));
        CHECK(expand(roabp_mul(a, b)) == expand(a) * expand(b));
        CHECK(expand(roabp_scale(a, E(3, spec))) == expand(a).scale(E(3, spec)));
        const std::map<size_t, FieldElement> asg{{a.order()[1], E(2, spec)}};
        CHECK(expand(roabp_partial_eval(a, asg)) == expand(a).partial_evaluate(asg));
    }
    const Roabp one = Roabp(Q, 2, {0, 1}, {UniMatrix{{t_pow(Q, 1)}}, UniMatrix{{t_pow(Q, 0)}}});
    const Roabp sum = roabp_add(one, one);
    CHECK(sum.width() <= 2);
    CHECK(expand(sum) == P("2*x1", 2));
    const Roabp sq = roabp_mul(xy_roabp(Q), xy_roabp(Q));
    CHECK(sq.width() == 1);
    CHECK(expand(sq) == P("x1^2*x2^2", 2));
}

TEST_CASE("hadamard substitution") {
    const Roabp z1 = Roabp(Q, 1, {0}, {UniMatrix{{t_pow(Q, 1)}}});
    const Roabp h = roabp_hadamard_substitute(z1);
    CHECK(expand(h) == P("x1*x2", 2));
    CHECK(h.width() == z1.width());
    PoweringFormula lin(Q, 2);
    lin.add_term(E(1), LinearForm{{E(1), E(1)}, E(0)}, 1);
    CHECK(expand(roabp_hadamard_substitute(powering_to_roabp(lin, {0, 1}))) == P("x1*x3+x2*x4", 4));
}

TEST_CASE("division by a variable, formula route") {
    // x1 = x, x2 = y
    CHECK(divide_by_var_formula(to_dag(P("x2*x1", 2)), 1, 1, 1).expand() == P("x1", 2));
    CHECK(divide_by_var_formula(to_dag(P("x2^2*(x1+1)", 2)), 1, 2, 2).expand() == P("x1+1", 2));
    testing::Rng rng(9);
    for (int i = 0; i < 10; ++i) {
        const SparsePoly f = testing::random_poly(Q, 3, 4, 2, rng);
        const SparsePoly c = f * P("x4^3", 4).with_nvars(4);
        CHECK(divide_by_var_formula(to_dag(c.with_nvars(4)), 3, 3, 3).expand() == f.with_nvars(4));
    }
}

TEST_CASE("division by a variable, circuit route") {
    auto outs = divide_by_var_circuit(to_dag(P("x2^2+x1*x2", 2)), 1, 1).expand_outputs();
    REQUIRE(outs.size() == 2);
    CHECK(outs[0].is_zero());
    CHECK(outs[1] == P("x2+x1", 2));
    CircuitDag c(Q, 2);
    c.set_output(c.mul(c.add(c.input(1), c.constant(1)), c.add(c.input(1), c.input(0))));
    outs = divide_by_var_circuit(c, 1, 2).expand_outputs();
    REQUIRE(outs.size() == 3);
    CHECK(outs[0] == P("x1", 2));
    CHECK(outs[1] == P("x1+1", 2));
    CHECK(outs[2] == P("1", 2));
}

TEST_CASE("multilinear formula check") {
    MultilinearFormula bad(Q, 1);
    bad.set_root(bad.mul({bad.var(0), bad.var(0)}));
    const MlfCheck r = multilinear_formula_check(bad);
    CHECK_FALSE(r.ok);
    CHECK_FALSE(r.path.empty());
    MultilinearFormula good(Q, 3);
    good.set_root(good.mul({good.add({good.var(0), good.var(1)}), good.var(2)}));
    CHECK(multilinear_formula_check(good).ok);
    testing::Rng rng(2);
    for (int i = 0; i < 30; ++i) CHECK(multilinear_formula_check(testing::random_mlf(Q, 5, rng)).ok);
}

TEST_CASE("circuit text round trip") {
    const VarLayout l{2, 1, 0};
    const CircuitDag c = parse_circuit("(+ (* (+ x1 (scale 2 y1)) (+ x2 -1)) (pow x1 2))", Q, l);
    CHECK(c.expand() == parse_poly("(x1 + 2*y1) * (x2 - 1) + x1^2", Q, l));
    CHECK(parse_circuit(circuit_to_text(c, l), Q, l).expand() == c.expand());
    testing::Rng rng(4);
    const Roabp a = testing::random_roabp(Q, 3, rng);
    CHECK(expand(parse_roabp(roabp_to_text(a, VarLayout::xs(3)), Q, VarLayout::xs(3))) == expand(a));
}

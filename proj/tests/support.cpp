#include "support.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace ipsw::testing {

namespace {

size_t uniform(Rng& rng, size_t lo, size_t hi) { return std::uniform_int_distribution<size_t>(lo, hi)(rng); }
bool coin(Rng& rng) { return uniform(rng, 0, 1) == 1; }

std::vector<size_t> random_perm(size_t n, Rng& rng) {
    std::vector<size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

FieldSpec suite_field(size_t i) { return i % 2 == 0 ? FieldSpec::prime(101) : FieldSpec::rational(); }

void record(SuiteResult& r, bool ok, const std::string& what) {
    ++r.cases;
    if (ok) return;
    if (r.failures++ == 0) r.first_failure = what;
}

std::string show(const SparsePoly& f) { return to_string(f); }

}  // namespace

FieldElement random_element(const FieldSpec& spec, Rng& rng, int64_t lo, int64_t hi) {
    const int64_t a = std::uniform_int_distribution<int64_t>(lo, hi)(rng);
    if (spec.is_rational() && uniform(rng, 0, 3) == 0) {
        const int64_t b = std::uniform_int_distribution<int64_t>(2, 5)(rng);
        return FieldElement::from_mpq(spec, mpq_class(a, b));
    }
    return FieldElement::from_int(spec, a);
}

std::vector<FieldElement> random_point(const FieldSpec& spec, size_t n, Rng& rng) {
    std::vector<FieldElement> p;
    for (size_t i = 0; i < n; ++i) p.push_back(random_element(spec, rng));
    return p;
}

SparsePoly random_poly(const FieldSpec& spec, size_t nvars, size_t terms, Exp max_exp, Rng& rng) {
    std::vector<Term> ts;
    for (size_t t = 0; t < terms; ++t) {
        Monomial m(nvars);
        for (size_t i = 0; i < nvars; ++i) m.at(i) = static_cast<Exp>(uniform(rng, 0, max_exp));
        ts.push_back(Term{m, random_element(spec, rng)});
    }
    return SparsePoly::from_terms(spec, nvars, std::move(ts));
}

SparsePoly random_nonzero_poly(const FieldSpec& spec, size_t nvars, size_t terms, Exp max_exp, Rng& rng) {
    for (;;) {
        SparsePoly f = random_poly(spec, nvars, terms, max_exp, rng);
        if (!f.is_zero()) return f;
    }
}

SparsePoly random_multilinear(const FieldSpec& spec, size_t nvars, Rng& rng) {
    std::vector<Term> ts;
    for (uint64_t mask = 0; mask < (uint64_t{1} << nvars); ++mask) {
        if (!coin(rng)) continue;
        Monomial m(nvars);
        for (size_t i = 0; i < nvars; ++i) m.at(i) = (mask >> i) & 1;
        ts.push_back(Term{m, random_element(spec, rng)});
    }
    return SparsePoly::from_terms(spec, nvars, std::move(ts));
}

MonomialOrder random_order(size_t nvars, Rng& rng) {
    auto perm = random_perm(nvars, rng);
    return coin(rng) ? MonomialOrder::lex(perm) : MonomialOrder::grlex(perm);
}

CircuitDag random_dag(const FieldSpec& spec, size_t nvars, size_t gates, Rng& rng) {
    CircuitDag c(spec, nvars);
    std::vector<size_t> nodes;
    std::vector<uint64_t> deg;
    for (size_t i = 0; i < nvars; ++i) {
        nodes.push_back(c.input(i));
        deg.push_back(1);
    }
    nodes.push_back(c.constant(random_element(spec, rng)));
    deg.push_back(0);
    for (size_t g = 0; g < gates; ++g) {
        const size_t a = uniform(rng, 0, nodes.size() - 1), b = uniform(rng, 0, nodes.size() - 1);
        if (coin(rng) && deg[a] + deg[b] <= 8) {
            nodes.push_back(c.mul(nodes[a], nodes[b]));
            deg.push_back(deg[a] + deg[b]);
        } else {
            nodes.push_back(c.add({nodes[a], nodes[b]}, {random_element(spec, rng), random_element(spec, rng)}));
            deg.push_back(std::max(deg[a], deg[b]));
        }
    }
    c.set_output(nodes.back());
    return c;
}

PoweringFormula random_powering(const FieldSpec& spec, size_t nvars, Rng& rng) {
    PoweringFormula p(spec, nvars);
    const size_t terms = uniform(rng, 1, 4);
    for (size_t t = 0; t < terms; ++t) {
        LinearForm l{random_point(spec, nvars, rng), random_element(spec, rng)};
        p.add_term(random_element(spec, rng), l, static_cast<uint32_t>(uniform(rng, 0, 4)));
    }
    return p;
}

LowDegPoweringFormula random_lowdeg_powering(const FieldSpec& spec, size_t nvars, Rng& rng) {
    const uint32_t t = static_cast<uint32_t>(uniform(rng, 1, 2));
    LowDegPoweringFormula p(spec, nvars, t);
    const size_t terms = uniform(rng, 1, 3);
    for (size_t k = 0; k < terms; ++k) {
        SparsePoly base = random_poly(spec, nvars, 3, static_cast<Exp>(t), rng);
        std::vector<Term> kept;
        for (const auto& term : base.terms())
            if (term.mono.degree() <= t) kept.push_back(term);
        p.add_term(random_element(spec, rng), SparsePoly::from_terms(spec, nvars, kept),
                   static_cast<uint32_t>(uniform(rng, 0, 3)));
    }
    return p;
}

Roabp random_roabp(const FieldSpec& spec, size_t nvars, Rng& rng) {
    const size_t w = uniform(rng, 1, 3);
    std::vector<UniMatrix> layers;
    for (size_t l = 0; l < nvars; ++l) {
        UniMatrix m(w, std::vector<UniPoly>(w, UniPoly(spec)));
        for (auto& row : m)
            for (auto& e : row)
                if (uniform(rng, 0, 3) != 0) e = UniPoly(spec, random_point(spec, uniform(rng, 1, 3), rng));
        layers.push_back(std::move(m));
    }
    return Roabp(spec, nvars, random_perm(nvars, rng), std::move(layers));
}

namespace {

size_t mlf_build(MultilinearFormula& f, std::vector<size_t> vars, size_t depth, Rng& rng) {
    const FieldSpec& spec = f.spec();
    if (vars.size() == 1 || depth == 0 || uniform(rng, 0, 4) == 0) {
        const size_t v = vars[uniform(rng, 0, vars.size() - 1)];
        return f.add({f.var(v), f.constant(random_element(spec, rng))}, {random_element(spec, rng), FieldElement::one(spec)});
    }
    std::shuffle(vars.begin(), vars.end(), rng);
    if (coin(rng)) {
        const size_t parts = std::min<size_t>(vars.size(), uniform(rng, 2, 3));
        std::vector<std::vector<size_t>> split(parts);
        for (size_t i = 0; i < vars.size(); ++i) split[i < parts ? i : uniform(rng, 0, parts - 1)].push_back(vars[i]);
        std::vector<size_t> kids;
        for (auto& s : split) kids.push_back(mlf_build(f, s, depth - 1, rng));
        return f.mul(kids);
    }
    std::vector<size_t> kids;
    std::vector<FieldElement> weights;
    for (int k = 0; k < 2; ++k) {
        std::vector<size_t> sub(vars.begin(), vars.begin() + static_cast<long>(uniform(rng, 1, vars.size())));
        kids.push_back(mlf_build(f, sub, depth - 1, rng));
        weights.push_back(random_element(spec, rng));
    }
    return f.add(kids, weights);
}

}  // namespace

MultilinearFormula random_mlf(const FieldSpec& spec, size_t nvars, Rng& rng) {
    MultilinearFormula f(spec, nvars);
    std::vector<size_t> vars(nvars);
    std::iota(vars.begin(), vars.end(), 0);
    f.set_root(mlf_build(f, vars, 4, rng));
    return f;
}

SparsePoly cube_interpolation_oracle(const SparsePoly& f, size_t n) {
    const FieldSpec& spec = f.spec();
    SparsePoly acc(spec, n);
    const SparsePoly one = SparsePoly::constant(spec, n, 1);
    for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
        std::vector<FieldElement> point(f.nvars(), FieldElement::zero(spec));
        SparsePoly basis = one;
        for (size_t i = 0; i < n; ++i) {
            const bool bit = (mask >> i) & 1;
            if (bit) point[i] = FieldElement::one(spec);
            const SparsePoly xi = SparsePoly::variable(spec, n, i);
            basis *= bit ? xi : one - xi;
        }
        acc += basis.scale(f.evaluate(point));
    }
    return acc;
}

SuiteResult suite_extremal_multiplicativity(size_t pairs, uint64_t seed) {
    SuiteResult r{"LM/TM/LC/TC multiplicativity"};
    Rng rng(seed);
    for (size_t i = 0; i < pairs; ++i) {
        const FieldSpec spec = suite_field(i);
        const size_t n = uniform(rng, 1, 4);
        const SparsePoly f = random_nonzero_poly(spec, n, uniform(rng, 1, 5), 3, rng);
        const SparsePoly g = random_nonzero_poly(spec, n, uniform(rng, 1, 5), 3, rng);
        const MonomialOrder ord = random_order(n, rng);
        const SparsePoly fg = f * g;
        const bool ok = leading_monomial(fg, ord) == leading_monomial(f, ord) * leading_monomial(g, ord) &&
                        trailing_monomial(fg, ord) == trailing_monomial(f, ord) * trailing_monomial(g, ord) &&
                        leading_coeff(fg, ord) == leading_coeff(f, ord) * leading_coeff(g, ord) &&
                        trailing_coeff(fg, ord) == trailing_coeff(f, ord) * trailing_coeff(g, ord);
        record(r, ok, "f=" + show(f) + " g=" + show(g) + " order=" + ord.to_string());
    }
    return r;
}

SuiteResult suite_diagonal_multiplicativity(size_t pairs, uint64_t seed) {
    SuiteResult r{"LD/TD multiplicativity"};
    Rng rng(seed);
    for (size_t i = 0; i < pairs; ++i) {
        const FieldSpec spec = suite_field(i);
        const size_t k = uniform(rng, 1, 2);
        const size_t n = 2 * k;
        PartitionSpec part;
        for (size_t j = 0; j < k; ++j) {
            part.u.push_back(j);
            part.v.push_back(k + j);
        }
        const SparsePoly f = random_nonzero_poly(spec, n, uniform(rng, 1, 5), 2, rng);
        const SparsePoly g = random_nonzero_poly(spec, n, uniform(rng, 1, 5), 2, rng);
        const MonomialOrder ord = random_order(k, rng);
        const SparsePoly fg = f * g;
        const bool ok = leading_diagonal(fg, part, ord) == leading_diagonal(f, part, ord) * leading_diagonal(g, part, ord) &&
                        trailing_diagonal(fg, part, ord) == trailing_diagonal(f, part, ord) * trailing_diagonal(g, part, ord);
        record(r, ok, "f=" + show(f) + " g=" + show(g) + " order=" + ord.to_string());
    }
    return r;
}

SuiteResult suite_multilinearization(size_t polys, uint64_t seed) {
    SuiteResult r{"multilinearization identities"};
    Rng rng(seed);
    for (size_t i = 0; i < polys; ++i) {
        const FieldSpec spec = suite_field(i);
        const size_t n = uniform(rng, 1, 5);
        const SparsePoly f = random_poly(spec, n, uniform(rng, 0, 6), 3, rng);
        const SparsePoly g = random_poly(spec, n, uniform(rng, 0, 4), 3, rng);
        const SparsePoly mf = multilinearize(f);
        const bool ok = mf.is_multilinear() && multilinearize(mf) == mf && mf == cube_interpolation_oracle(f, n) &&
                        multilinearize(f + g) == mf + multilinearize(g) &&
                        multilinearize(f * g) == multilinearize(mf * multilinearize(g));
        record(r, ok, "f=" + show(f) + " g=" + show(g));
    }
    return r;
}

SuiteResult suite_circuit_eval_expand(size_t per_class, uint64_t seed) {
    SuiteResult r{"circuit eval/expand agreement"};
    Rng rng(seed);
    for (int cls = 0; cls < 5; ++cls) {
        for (size_t i = 0; i < per_class; ++i) {
            const FieldSpec spec = suite_field(i);
            const size_t n = uniform(rng, 1, 4);
            Circuit c;
            switch (cls) {
                case 0: c = random_dag(spec, n, uniform(rng, 1, 12), rng); break;
                case 1: c = random_powering(spec, n, rng); break;
                case 2: c = random_lowdeg_powering(spec, n, rng); break;
                case 3: c = random_roabp(spec, n, rng); break;
                default: c = random_mlf(spec, n, rng); break;
            }
            const SparsePoly f = expand(c);
            bool ok = true;
            for (int t = 0; t < 3 && ok; ++t) {
                const auto p = random_point(spec, n, rng);
                ok = eval(c, p) == f.evaluate(p);
            }
            if (cls == 4) ok = ok && f.is_multilinear() && multilinear_formula_check(std::get<MultilinearFormula>(c)).ok;
            record(r, ok, kind_name(c) + " expansion " + show(f));
        }
    }
    return r;
}

}  // namespace ipsw::testing

#include "ipsw/ips.hpp"

namespace ipsw {

MonomialSquareWitness monomial_square_witness(size_t d, const FieldSpec& spec) {
    if (d > 22) throw ResourceError("monomial_square_witness emits 2^d - 1 terms; d <= 22");
    MonomialSquareWitness w;
    MultilinearFormula c(spec, 2 * d);
    std::vector<size_t> sums, xs;
    for (size_t i = 0; i < d; ++i) {
        sums.push_back(c.add({c.var(d + i), c.var(i)}));
        xs.push_back(c.var(i));
    }
    const FieldElement one = FieldElement::one(spec);
    c.set_root(c.add({c.mul(std::move(sums)), c.mul(std::move(xs))}, {one, -one}));
    w.product_form = std::move(c);

    std::vector<Term> terms;
    for (size_t mask = 1; mask < (size_t{1} << d); ++mask) {
        Monomial m(2 * d);
        for (size_t i = 0; i < d; ++i) m.at(mask >> i & 1 ? d + i : i) = 1;
        terms.push_back(Term{std::move(m), one});
    }
    w.sum_form = SparsePoly::from_terms(spec, 2 * d, std::move(terms));
    return w;
}

SparsePoly sparse_times_formula_witness(const SparsePoly& g, const SparsePoly& f) {
    if (!g.is_multilinear() || !f.is_multilinear()) throw DomainError("sparse_times_formula_witness needs multilinear inputs");
    if (!(g.spec() == f.spec())) throw DomainError("inputs are over different fields");
    const size_t n = std::max(g.nvars(), f.nvars());
    uint64_t count = 0;
    for (const auto& a : g.terms())
        for (const auto& b : f.terms()) {
            size_t overlap = 0;
            for (size_t i = 0; i < n; ++i) overlap += a.mono[i] && b.mono[i];
            if (overlap == 0) continue;
            if (overlap >= 63) throw ResourceError("witness term count overflows");
            count += (uint64_t{1} << overlap) - 1;
            if (count > kMaxWitnessTerms) throw ResourceError("witness would exceed " + std::to_string(kMaxWitnessTerms) + " terms");
        }

    // x^a x^b = x^{(a|b) \ S} x^{2S} and x^{2S} - x^S = prod_S (z_i + x_i) - prod_S x_i at z = x^2 - x.
    std::vector<Term> terms;
    terms.reserve(count);
    for (const auto& a : g.terms())
        for (const auto& b : f.terms()) {
            std::vector<size_t> overlap;
            Monomial base(2 * n);
            for (size_t i = 0; i < n; ++i) {
                const bool ai = a.mono[i], bi = b.mono[i];
                if (ai && bi) overlap.push_back(i);
                else if (ai || bi) base.at(i) = 1;
            }
            if (overlap.empty()) continue;
            const FieldElement coef = a.coeff * b.coeff;
            for (size_t t = 1; t < (size_t{1} << overlap.size()); ++t) {
                Monomial m = base;
                for (size_t k = 0; k < overlap.size(); ++k) m.at(t >> k & 1 ? n + overlap[k] : overlap[k]) = 1;
                terms.push_back(Term{std::move(m), coef});
            }
        }
    return SparsePoly::from_terms(g.spec(), 2 * n, std::move(terms));
}

namespace {

// Depth-2 formula: a weighted sum of products of variables, one fresh leaf per occurrence.
MultilinearFormula depth2_formula(const SparsePoly& p) {
    MultilinearFormula c(p.spec(), p.nvars());
    std::vector<size_t> top;
    std::vector<FieldElement> weights;
    for (const auto& t : p.terms()) {
        std::vector<size_t> leaves;
        for (size_t v = 0; v < p.nvars(); ++v)
            if (t.mono[v]) leaves.push_back(c.var(v));
        top.push_back(leaves.empty() ? c.constant(FieldElement::one(p.spec())) : c.mul(std::move(leaves)));
        weights.push_back(t.coeff);
    }
    c.set_root(top.empty() ? c.constant(FieldElement::zero(p.spec())) : c.add(std::move(top), std::move(weights)));
    return c;
}

}  // namespace

IpsCertificate simulate_sparse_linips(const AxiomSystem& system, const std::vector<SparsePoly>& witnesses) {
    system.validate();
    const size_t n = system.nvars, m = system.num_axioms();
    if (witnesses.size() != m) throw DomainError("need one witness per axiom");
    const FieldSpec& spec = system.spec;
    SparsePoly sum(spec, n);
    std::vector<SparsePoly> gml;
    for (size_t j = 0; j < m; ++j) {
        if (!system.axioms[j].is_multilinear()) throw DomainError("axiom " + std::to_string(j + 1) + " is not multilinear");
        gml.push_back(multilinearize(witnesses[j].with_nvars(n)));
        sum += gml[j] * system.axioms[j].with_nvars(n);
    }
    if (multilinearize(sum) != SparsePoly::constant(FieldElement::one(spec), n))
        throw DomainError("witness identity fails: ml(sum_j ml(g_j) f_j) != 1");

    const VarLayout lay = system.layout();
    const size_t total = lay.total();
    SparsePoly proof(spec, total);
    for (size_t j = 0; j < m; ++j) {
        proof += gml[j].with_nvars(total) * SparsePoly::variable(spec, total, lay.y(j + 1));
        SparsePoly cj = sparse_times_formula_witness(gml[j], system.axioms[j].with_nvars(n));
        if (cj.is_zero()) continue;
        if (!system.include_boolean) throw DomainError("the witness needs boolean placeholders but the system has none");
        std::vector<Term> moved;
        for (const auto& t : cj.terms()) {
            Monomial mono(total);
            for (size_t i = 0; i < n; ++i) {
                mono.at(i) = t.mono[i];
                mono.at(lay.z(i + 1)) = t.mono[n + i];
            }
            moved.push_back(Term{std::move(mono), -t.coeff});
        }
        proof += SparsePoly::from_terms(spec, total, std::move(moved));
    }
    return IpsCertificate{system, Circuit(depth2_formula(proof)), Linearity::LinY};
}

}  // namespace ipsw

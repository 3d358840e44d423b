#include <algorithm>
#include <limits>

#include "ipsw/circuit.hpp"

namespace ipsw {

namespace {

FieldElement binomial(const FieldSpec& spec, unsigned long n, unsigned long k) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return FieldElement::from_mpz(spec, b);
}

FieldElement factorial(const FieldSpec& spec, unsigned long n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return FieldElement::from_mpz(spec, f);
}

void check_order(const std::vector<size_t>& order, size_t nvars) {
    if (order.size() != nvars) throw DomainError("variable order must list all " + std::to_string(nvars) + " variables");
    std::vector<char> seen(nvars, 0);
    for (size_t v : order) {
        if (v >= nvars || seen[v]) throw DomainError("variable order is not a permutation");
        seen[v] = 1;
    }
}

}  // namespace

SparsePoly LinearForm::to_poly(size_t nvars) const {
    SparsePoly p = SparsePoly::constant(constant, nvars);
    for (size_t i = 0; i < coeffs.size(); ++i)
        if (!coeffs[i].is_zero()) p += SparsePoly::variable(constant.spec(), nvars, i).scale(coeffs[i]);
    return p;
}

FieldElement LinearForm::eval(const std::vector<FieldElement>& point) const {
    FieldElement acc = constant;
    for (size_t i = 0; i < coeffs.size(); ++i)
        if (!coeffs[i].is_zero()) acc += coeffs[i] * point.at(i);
    return acc;
}

void PoweringFormula::add_term(const FieldElement& weight, LinearForm form, uint32_t exponent) {
    if (form.coeffs.size() > nvars_) throw DomainError("linear form has more coefficients than variables");
    if (!(weight.spec() == spec_) || !(form.constant.spec() == spec_)) throw DomainError("field mismatch in powering formula");
    form.coeffs.resize(nvars_, FieldElement::zero(spec_));
    terms_.push_back(PowerTerm{weight, std::move(form), exponent});
}

uint64_t PoweringFormula::size() const {
    uint64_t s = 0;
    for (const auto& t : terms_) s += uint64_t{t.exponent} + 1;
    return nvars_ * s;
}

uint32_t PoweringFormula::degree() const {
    uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.exponent);
    return d;
}

FieldElement PoweringFormula::eval(const std::vector<FieldElement>& point) const {
    if (point.size() < nvars_) throw DomainError("evaluation point too short");
    FieldElement acc = FieldElement::zero(spec_);
    for (const auto& t : terms_) acc += t.weight * t.form.eval(point).pow(t.exponent);
    return acc;
}

SparsePoly PoweringFormula::expand() const {
    SparsePoly acc(spec_, nvars_);
    for (const auto& t : terms_) acc += t.form.to_poly(nvars_).pow(t.exponent).scale(t.weight);
    return acc;
}

void LowDegPoweringFormula::add_term(const FieldElement& weight, SparsePoly base, uint32_t exponent) {
    if (base.degree() > t_) throw DomainError("base polynomial exceeds the degree bound t=" + std::to_string(t_));
    if (base.nvars() > nvars_) throw DomainError("base polynomial uses too many variables");
    if (!(weight.spec() == spec_) || !(base.spec() == spec_)) throw DomainError("field mismatch in powering formula");
    terms_.push_back(LowDegTerm{weight, base.with_nvars(nvars_), exponent});
}

uint64_t LowDegPoweringFormula::size() const {
    using u128 = unsigned __int128;
    const u128 cap = std::numeric_limits<uint64_t>::max();
    u128 c = 1;
    for (uint64_t i = 1; i <= t_; ++i) {
        c = c * (nvars_ + i) / i;
        if (c > cap) return std::numeric_limits<uint64_t>::max();
    }
    u128 s = 0;
    for (const auto& t : terms_) s += uint64_t{t.exponent} + 1;
    u128 total = c * s;
    return total > cap ? std::numeric_limits<uint64_t>::max() : static_cast<uint64_t>(total);
}

FieldElement LowDegPoweringFormula::eval(const std::vector<FieldElement>& point) const {
    if (point.size() < nvars_) throw DomainError("evaluation point too short");
    FieldElement acc = FieldElement::zero(spec_);
    for (const auto& t : terms_) acc += t.weight * t.base.evaluate(point).pow(t.exponent);
    return acc;
}

SparsePoly LowDegPoweringFormula::expand() const {
    SparsePoly acc(spec_, nvars_);
    for (const auto& t : terms_) acc += t.base.pow(t.exponent).scale(t.weight);
    return acc;
}

std::vector<std::vector<UniPoly>> duality_decompose(size_t n, uint32_t d, const FieldSpec& spec) {
    if (n == 0) throw DomainError("duality needs at least one variable");
    const uint64_t npts = uint64_t{n} * d + 1;
    if (!spec.size_at_least(npts)) throw DomainError("field too small for duality: need |F| >= nd+1 = " + std::to_string(npts));
    // prod_j E_d(t x_j), with E_d(u) = sum_{k<=d} u^k/k!, has t^d-coefficient (x_1+...+x_n)^d / d!.
    // Reading off that coefficient by interpolation at t = 0..nd gives one product per node.
    std::vector<FieldElement> nodes;
    for (uint64_t i = 0; i < npts; ++i) nodes.push_back(FieldElement::from_int(spec, static_cast<int64_t>(i)));
    auto basis = lagrange_basis(nodes);
    std::vector<FieldElement> inv_fact;
    for (uint32_t k = 0; k <= d; ++k) inv_fact.push_back(factorial(spec, k).inv());
    const FieldElement dfact = factorial(spec, d);
    std::vector<std::vector<UniPoly>> out;
    out.reserve(npts);
    for (uint64_t i = 0; i < npts; ++i) {
        std::vector<FieldElement> e;
        FieldElement tp = FieldElement::one(spec);
        for (uint32_t k = 0; k <= d; ++k) {
            e.push_back(tp * inv_fact[k]);
            tp *= nodes[i];
        }
        UniPoly ed(spec, e);
        std::vector<UniPoly> tuple(n, ed);
        tuple[0] = ed.scale(dfact * basis[i].coeff(d));
        out.push_back(std::move(tuple));
    }
    return out;
}

Roabp powering_to_roabp(const PoweringFormula& p, const std::vector<size_t>& order) {
    const FieldSpec& spec = p.spec();
    const size_t n = p.nvars();
    check_order(order, n);
    const FieldElement zero = FieldElement::zero(spec);
    if (n == 0) {
        FieldElement v = zero;
        for (const auto& t : p.terms()) v += t.weight * t.form.constant.pow(t.exponent);
        return Roabp::constant(v, 0);
    }
    if (p.terms().empty()) {
        std::vector<UniMatrix> layers(n, UniMatrix{{UniPoly(spec)}});
        return Roabp(spec, n, order, std::move(layers));
    }
    size_t width = 0;
    for (const auto& t : p.terms()) width += size_t{t.exponent} + 1;
    std::vector<FieldElement> start(width, zero), end(width, zero);
    std::vector<UniMatrix> layers(n, UniMatrix(width, std::vector<UniPoly>(width, UniPoly(spec))));
    size_t off = 0;
    for (const auto& t : p.terms()) {
        const uint32_t d = t.exponent;
        // State index m carries (c + partial sum)^m; x with coefficient a maps index m to k with C(k,m)(a x)^(k-m).
        FieldElement cp = FieldElement::one(spec);
        for (uint32_t m = 0; m <= d; ++m) {
            start[off + m] = cp;
            cp *= t.form.constant;
        }
        end[off + d] = t.weight;
        for (size_t pos = 0; pos < n; ++pos) {
            const FieldElement& a = t.form.coeffs[order[pos]];
            auto& L = layers[pos];
            for (uint32_t m = 0; m <= d; ++m) {
                FieldElement ap = FieldElement::one(spec);
                for (uint32_t k = m; k <= d; ++k) {
                    if (!ap.is_zero() || k == m) L[off + m][off + k] = UniPoly::monomial(binomial(spec, k, m) * ap, k - m);
                    ap *= a;
                }
            }
        }
        off += d + 1;
    }
    return Roabp::from_abp(spec, n, order, std::move(layers), start, end);
}

}  // namespace ipsw

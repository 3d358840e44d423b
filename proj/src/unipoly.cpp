#include "ipsw/unipoly.hpp"

#include <algorithm>

namespace ipsw {

UniPoly::UniPoly(const FieldSpec& spec, std::vector<FieldElement> coeffs) : spec_(spec), c_(std::move(coeffs)) {
    for (const auto& x : c_)
        if (!(x.spec() == spec_)) throw DomainError("field mismatch in univariate coefficients");
    trim();
}

void UniPoly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

UniPoly UniPoly::constant(const FieldElement& c) { return UniPoly(c.spec(), {c}); }

UniPoly UniPoly::monomial(const FieldElement& c, size_t k) {
    std::vector<FieldElement> v(k + 1, FieldElement::zero(c.spec()));
    v[k] = c;
    return UniPoly(c.spec(), std::move(v));
}

UniPoly UniPoly::from_sparse(const SparsePoly& f, size_t var) {
    std::vector<FieldElement> v;
    for (const auto& t : f.terms()) {
        for (size_t i = 0; i < t.mono.size(); ++i)
            if (i != var && t.mono[i]) throw DomainError("polynomial is not univariate in the requested variable");
        size_t k = t.mono[var];
        if (v.size() <= k) v.resize(k + 1, FieldElement::zero(f.spec()));
        v[k] += t.coeff;
    }
    return UniPoly(f.spec(), std::move(v));
}

UniPoly UniPoly::operator-() const {
    UniPoly r(*this);
    for (auto& x : r.c_) x = -x;
    return r;
}

UniPoly& UniPoly::operator+=(const UniPoly& o) {
    if (!(spec_ == o.spec_)) throw DomainError("field mismatch: " + spec_.to_string() + " vs " + o.spec_.to_string());
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), FieldElement::zero(spec_));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
}

UniPoly& UniPoly::operator-=(const UniPoly& o) { return *this += -o; }

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (!(a.spec_ == b.spec_)) throw DomainError("field mismatch: " + a.spec_.to_string() + " vs " + b.spec_.to_string());
    if (a.is_zero() || b.is_zero()) return UniPoly(a.spec_);
    std::vector<FieldElement> v(a.c_.size() + b.c_.size() - 1, FieldElement::zero(a.spec_));
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i].is_zero()) continue;
        for (size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
    }
    return UniPoly(a.spec_, std::move(v));
}

UniPoly UniPoly::scale(const FieldElement& c) const {
    UniPoly r(*this);
    for (auto& x : r.c_) x *= c;
    r.trim();
    return r;
}

FieldElement UniPoly::eval(const FieldElement& t) const {
    FieldElement acc = FieldElement::zero(spec_);
    for (size_t i = c_.size(); i-- > 0;) acc = acc * t + c_[i];
    return acc;
}

SparsePoly UniPoly::to_sparse(size_t nvars, size_t var) const {
    std::vector<Term> terms;
    for (size_t k = 0; k < c_.size(); ++k) {
        if (c_[k].is_zero()) continue;
        if (k > 0xFFFF) throw ResourceError("exponent overflow (16-bit exponents)");
        terms.push_back(Term{Monomial::unit(nvars, var, static_cast<Exp>(k)), c_[k]});
    }
    return SparsePoly::from_terms(spec_, nvars, std::move(terms));
}

std::vector<UniPoly> lagrange_basis(const std::vector<FieldElement>& nodes) {
    if (nodes.empty()) return {};
    const FieldSpec spec = nodes[0].spec();
    const FieldElement one = FieldElement::one(spec);
    // Full product prod_j (t - t_j), then divide out one factor per basis polynomial.
    UniPoly full = UniPoly::constant(one);
    for (const auto& t : nodes) full = full * UniPoly(spec, {-t, one});
    std::vector<UniPoly> out;
    out.reserve(nodes.size());
    for (size_t m = 0; m < nodes.size(); ++m) {
        const auto& c = full.coeffs();
        size_t n = c.size() - 1;
        std::vector<FieldElement> q(n, FieldElement::zero(spec));
        FieldElement carry = FieldElement::zero(spec);
        for (size_t k = n; k-- > 0;) {
            carry = c[k + 1] + carry * nodes[m];
            q[k] = carry;
        }
        UniPoly num(spec, std::move(q));
        FieldElement denom = num.eval(nodes[m]);
        if (denom.is_zero()) throw DomainError("interpolation nodes are not distinct");
        out.push_back(num.scale(denom.inv()));
    }
    return out;
}

}  // namespace ipsw

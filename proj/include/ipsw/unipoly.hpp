#pragma once

#include <string>
#include <vector>

#include "ipsw/poly.hpp"

namespace ipsw {

// Dense univariate polynomial; c[k] is the coefficient of t^k, with no trailing zeros.
class UniPoly {
public:
    UniPoly() = default;
    explicit UniPoly(const FieldSpec& spec) : spec_(spec) {}
    UniPoly(const FieldSpec& spec, std::vector<FieldElement> coeffs);

    static UniPoly constant(const FieldElement& c);
    static UniPoly monomial(const FieldElement& c, size_t k);
    // Univariate view of f in variable `var`; throws if f uses any other variable.
    static UniPoly from_sparse(const SparsePoly& f, size_t var);

    const FieldSpec& spec() const { return spec_; }
    const std::vector<FieldElement>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    FieldElement coeff(size_t k) const { return k < c_.size() ? c_[k] : FieldElement::zero(spec_); }

    UniPoly operator-() const;
    UniPoly& operator+=(const UniPoly& o);
    UniPoly& operator-=(const UniPoly& o);
    friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
    friend UniPoly operator-(UniPoly a, const UniPoly& b) { return a -= b; }
    friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
    UniPoly scale(const FieldElement& c) const;

    FieldElement eval(const FieldElement& t) const;
    SparsePoly to_sparse(size_t nvars, size_t var) const;

    friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.spec_ == b.spec_ && a.c_ == b.c_; }
    friend bool operator!=(const UniPoly& a, const UniPoly& b) { return !(a == b); }

private:
    void trim();

    FieldSpec spec_;
    std::vector<FieldElement> c_;
};

// Coefficients of the Lagrange basis polynomials at distinct nodes: result[m] is L_m with L_m(nodes[j]) = [j==m].
std::vector<UniPoly> lagrange_basis(const std::vector<FieldElement>& nodes);

}  // namespace ipsw

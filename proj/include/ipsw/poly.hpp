#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ipsw/field.hpp"

namespace ipsw {

using Exp = uint16_t;

// Dense exponent vector x^a; its length is the ambient variable count.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(size_t nvars) : e_(nvars, 0) {}
    explicit Monomial(std::vector<Exp> e) : e_(std::move(e)) {}
    static Monomial unit(size_t nvars, size_t var, Exp power = 1);

    size_t size() const { return e_.size(); }
    Exp operator[](size_t i) const { return i < e_.size() ? e_[i] : 0; }
    Exp& at(size_t i) { return e_.at(i); }
    const std::vector<Exp>& exponents() const { return e_; }
    void resize(size_t n) { e_.resize(n, 0); }

    uint64_t degree() const;   // l1 norm
    Exp ideg() const;          // l_inf norm
    size_t support() const;    // l0 norm
    bool is_one() const { return degree() == 0; }
    bool is_multilinear() const { return ideg() <= 1; }
    bool divides(const Monomial& o) const;

    Monomial operator*(const Monomial& o) const;
    Monomial operator/(const Monomial& o) const;  // requires divides

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.e_ == b.e_; }
    friend bool operator!=(const Monomial& a, const Monomial& b) { return a.e_ != b.e_; }
    friend bool operator<(const Monomial& a, const Monomial& b) { return a.e_ < b.e_; }

    size_t hash() const;

private:
    std::vector<Exp> e_;
};

struct MonomialHash {
    size_t operator()(const Monomial& m) const { return m.hash(); }
};

// Lex or graded-lex with a variable priority list: perm[0] is the most significant variable.
// Variables not listed follow in index order.
class MonomialOrder {
public:
    enum class Kind { Lex, GradedLex };

    MonomialOrder() = default;
    static MonomialOrder lex(std::vector<size_t> perm = {}) { return MonomialOrder(Kind::Lex, std::move(perm)); }
    static MonomialOrder grlex(std::vector<size_t> perm = {}) { return MonomialOrder(Kind::GradedLex, std::move(perm)); }
    // "lex", "grlex", optionally followed by ":" and a comma-separated 1-based permutation.
    static MonomialOrder parse(std::string_view text);

    Kind kind() const { return kind_; }
    const std::vector<size_t>& perm() const { return perm_; }
    int compare(const Monomial& a, const Monomial& b) const;  // -1, 0, 1
    bool less(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }
    std::string to_string() const;

private:
    MonomialOrder(Kind k, std::vector<size_t> perm) : kind_(k), perm_(std::move(perm)) {}
    Kind kind_ = Kind::GradedLex;
    std::vector<size_t> perm_;
};

struct Term {
    Monomial mono;
    FieldElement coeff;
};

// Canonical sparse polynomial: terms sorted ascending in graded-lex order, no zero coefficients.
class SparsePoly {
public:
    SparsePoly() = default;  // zero over Q with no variables
    SparsePoly(const FieldSpec& spec, size_t nvars) : spec_(spec), nvars_(nvars) {}

    static SparsePoly constant(const FieldElement& c, size_t nvars);
    static SparsePoly constant(const FieldSpec& spec, size_t nvars, int64_t c) {
        return constant(FieldElement::from_int(spec, c), nvars);
    }
    static SparsePoly variable(const FieldSpec& spec, size_t nvars, size_t var);
    static SparsePoly monomial(const FieldElement& c, Monomial m);
    // Combines duplicate monomials and drops zeros.
    static SparsePoly from_terms(const FieldSpec& spec, size_t nvars, std::vector<Term> terms);

    const FieldSpec& spec() const { return spec_; }
    size_t nvars() const { return nvars_; }
    const std::vector<Term>& terms() const { return terms_; }
    size_t sparsity() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool is_multilinear() const;
    FieldElement constant_term() const;
    FieldElement coeff(const Monomial& m) const;

    uint64_t degree() const;  // total degree; 0 for the zero polynomial
    Exp ideg() const;
    Exp degree_in(size_t var) const;
    std::vector<size_t> support_vars() const;

    // Returns a copy viewed in a larger ambient space (or smaller, if the dropped variables are unused).
    SparsePoly with_nvars(size_t n) const;

    SparsePoly operator-() const;
    SparsePoly& operator+=(const SparsePoly& o);
    SparsePoly& operator-=(const SparsePoly& o);
    SparsePoly& operator*=(const SparsePoly& o) { return *this = *this * o; }
    friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
    friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }
    friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b);
    SparsePoly scale(const FieldElement& c) const;
    SparsePoly pow(uint64_t e) const;
    SparsePoly mul_monomial(const Monomial& m) const;

    FieldElement evaluate(const std::vector<FieldElement>& point) const;
    // images[i] replaces variable i; all images share one ambient space.
    SparsePoly substitute(const std::vector<SparsePoly>& images) const;
    // Replaces only the listed variables; keeps the ambient space.
    SparsePoly substitute(const std::map<size_t, SparsePoly>& images) const;
    SparsePoly partial_evaluate(const std::map<size_t, FieldElement>& values) const;

    friend bool operator==(const SparsePoly& a, const SparsePoly& b);
    friend bool operator!=(const SparsePoly& a, const SparsePoly& b) { return !(a == b); }

private:
    void normalize_nvars(SparsePoly& o);

    FieldSpec spec_;
    size_t nvars_ = 0;
    std::vector<Term> terms_;
};

// Graded-lex with identity permutation, the canonical storage order.
bool canonical_less(const Monomial& a, const Monomial& b);

// Upper bound on monomial operations spent inside polynomial products and substitutions.
// Scopes nest and every enclosing limit is charged. Without a scope there is no limit.
class ExpansionBudget {
public:
    explicit ExpansionBudget(uint64_t limit);
    ~ExpansionBudget();
    ExpansionBudget(const ExpansionBudget&) = delete;
    ExpansionBudget& operator=(const ExpansionBudget&) = delete;

    static void charge(uint64_t ops);
    static uint64_t used();

private:
    uint64_t limit_;
    uint64_t used_ = 0;
    ExpansionBudget* prev_;
};

constexpr uint64_t kDefaultExpandBudget = uint64_t{1} << 22;

SparsePoly multilinearize(const SparsePoly& f);

Monomial leading_monomial(const SparsePoly& f, const MonomialOrder& ord = {});
Monomial trailing_monomial(const SparsePoly& f, const MonomialOrder& ord = {});
FieldElement leading_coeff(const SparsePoly& f, const MonomialOrder& ord = {});
FieldElement trailing_coeff(const SparsePoly& f, const MonomialOrder& ord = {});

// S_{n,k} over variables 0..n-1.
SparsePoly elementary_symmetric(size_t n, size_t k, const FieldSpec& spec);

// Coefficient of y^b when f is read in F[rest][yvars]; b is indexed like yvars.
SparsePoly coeff_in_subring(const SparsePoly& f, const std::vector<size_t>& yvars, const std::vector<Exp>& b);

constexpr size_t kMaxInterpolationVars = 24;

// values[mask] is the value at the cube point whose i-th coordinate is bit i of mask.
SparsePoly interpolate_multilinear(const std::vector<FieldElement>& values, size_t n);
std::vector<FieldElement> cube_values(const SparsePoly& f, size_t n);

struct Restriction {
    SparsePoly poly;
    std::vector<size_t> kept;
};
// Each variable survives with probability num/den and is set to zero otherwise.
Restriction random_restriction(const SparsePoly& f, uint64_t keep_num, uint64_t keep_den, uint64_t seed);

// Exact division f = q*g (throws DomainError when g does not divide f).
SparsePoly divide_exact(const SparsePoly& f, const SparsePoly& g);
// Multivariate division by a single divisor under graded-lex; returns (quotient, remainder).
std::pair<SparsePoly, SparsePoly> divide_with_remainder(const SparsePoly& f, const SparsePoly& g);

// Variable naming for text I/O: ids [0,nx) are x1.., then y1.., then z1...
struct VarLayout {
    size_t nx = 0, ny = 0, nz = 0;

    size_t total() const { return nx + ny + nz; }
    size_t x(size_t i) const { return i - 1; }
    size_t y(size_t j) const { return nx + j - 1; }
    size_t z(size_t k) const { return nx + ny + k - 1; }
    std::string name(size_t id) const;
    std::optional<size_t> lookup(char kind, size_t index) const;
    static VarLayout xs(size_t n) { return VarLayout{n, 0, 0}; }
};

std::string to_string(const SparsePoly& f, const VarLayout& layout, const MonomialOrder& ord = {});
std::string to_string(const SparsePoly& f);  // x1..xn naming
std::string monomial_to_string(const Monomial& m, const VarLayout& layout);

// Parses the polynomial grammar (parentheses and powers of groups are accepted as well).
// Without a layout, one is inferred from the largest x/y/z indices that occur.
SparsePoly parse_poly(std::string_view text, const FieldSpec& spec, const VarLayout& layout);
std::pair<SparsePoly, VarLayout> parse_poly(std::string_view text, const FieldSpec& spec);

}  // namespace ipsw

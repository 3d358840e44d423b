#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

#include "ipsw/errors.hpp"

namespace ipsw {

// Coefficient domain: F_p for a word-size prime p < 2^62, or Q.
class FieldSpec {
public:
    enum class Kind { Prime, Rational };

    FieldSpec() = default;  // rationals
    static FieldSpec prime(uint64_t p);
    static FieldSpec rational() { return FieldSpec(); }
    // Accepts "p=101", "prime 101", "101", "rational", "Q".
    static FieldSpec parse(std::string_view text);

    Kind kind() const { return kind_; }
    bool is_prime() const { return kind_ == Kind::Prime; }
    bool is_rational() const { return kind_ == Kind::Rational; }
    uint64_t modulus() const { return p_; }
    uint64_t characteristic() const { return is_prime() ? p_ : 0; }
    bool size_at_least(uint64_t n) const { return is_rational() || p_ >= n; }

    std::string to_string() const;  // "p=101" or "rational"

    friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
        return a.kind_ == b.kind_ && a.p_ == b.p_;
    }

private:
    Kind kind_ = Kind::Rational;
    uint64_t p_ = 0;
};

bool is_prime_u64(uint64_t n);

// True iff char(F) is 0 or exceeds `bound`.
bool characteristic_guard(const FieldSpec& spec, uint64_t bound);

class FieldElement {
public:
    FieldElement() = default;  // rational zero
    explicit FieldElement(const FieldSpec& spec) : spec_(spec) {
        if (spec.is_prime()) v_ = uint64_t{0};
    }

    static FieldElement zero(const FieldSpec& spec) { return FieldElement(spec); }
    static FieldElement one(const FieldSpec& spec) { return from_int(spec, 1); }
    static FieldElement from_int(const FieldSpec& spec, int64_t v);
    static FieldElement from_mpz(const FieldSpec& spec, const mpz_class& v);
    static FieldElement from_mpq(const FieldSpec& spec, const mpq_class& v);
    static FieldElement from_residue(const FieldSpec& spec, uint64_t r);
    static FieldElement parse(const FieldSpec& spec, std::string_view text);

    const FieldSpec& spec() const { return spec_; }
    bool is_zero() const;
    bool is_one() const;
    uint64_t residue() const;      // prime fields only
    const mpq_class& rational() const;  // rational field only
    std::string to_string() const;  // residue, or canonical a/b

    FieldElement operator-() const;
    FieldElement inv() const;
    FieldElement pow(uint64_t e) const;

    FieldElement& operator+=(const FieldElement& o);
    FieldElement& operator-=(const FieldElement& o);
    FieldElement& operator*=(const FieldElement& o);
    FieldElement& operator/=(const FieldElement& o) { return *this *= o.inv(); }

    friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
    friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
    friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
    friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }

    friend bool operator==(const FieldElement& a, const FieldElement& b);
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }
    // Canonical total order (residues, or rational value); used for sets and sorting.
    friend bool operator<(const FieldElement& a, const FieldElement& b);

    size_t hash() const;

private:
    void check_same(const FieldElement& o) const;

    FieldSpec spec_;
    std::variant<mpq_class, uint64_t> v_;
};

}  // namespace ipsw

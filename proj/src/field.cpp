#include "ipsw/field.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace ipsw {

namespace {

using u128 = unsigned __int128;

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) { return static_cast<uint64_t>(u128(a) * b % m); }

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

}  // namespace

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // These bases are deterministic for all n < 2^64.
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

FieldSpec FieldSpec::prime(uint64_t p) {
    if (p >= (uint64_t{1} << 62)) throw DomainError("prime modulus must be below 2^62");
    if (!is_prime_u64(p)) throw DomainError("modulus " + std::to_string(p) + " is not prime");
    FieldSpec s;
    s.kind_ = Kind::Prime;
    s.p_ = p;
    return s;
}

FieldSpec FieldSpec::parse(std::string_view text) {
    std::string t = trim(text);
    std::string lower;
    for (char c : t) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == "rational" || lower == "q" || lower == "rationals") return rational();
    std::string digits;
    if (lower.rfind("p=", 0) == 0) {
        digits = trim(lower.substr(2));
    } else if (lower.rfind("prime", 0) == 0) {
        digits = trim(lower.substr(5));
    } else {
        digits = lower;
    }
    if (!all_digits(digits) || digits.size() > 19) throw ParseError("bad field spec '" + t + "'");
    return prime(std::stoull(digits));
}

std::string FieldSpec::to_string() const {
    return is_prime() ? "p=" + std::to_string(p_) : std::string("rational");
}

bool characteristic_guard(const FieldSpec& spec, uint64_t bound) {
    return spec.characteristic() == 0 || spec.characteristic() > bound;
}

FieldElement FieldElement::from_int(const FieldSpec& spec, int64_t v) {
    FieldElement e(spec);
    if (spec.is_prime()) {
        const uint64_t p = spec.modulus();
        int64_t r = v % static_cast<int64_t>(p);
        if (r < 0) r += static_cast<int64_t>(p);
        e.v_ = static_cast<uint64_t>(r);
    } else {
        e.v_ = mpq_class(static_cast<long>(v));
    }
    return e;
}

FieldElement FieldElement::from_residue(const FieldSpec& spec, uint64_t r) {
    if (!spec.is_prime()) return from_mpz(spec, mpz_class(std::to_string(r)));
    FieldElement e(spec);
    e.v_ = r % spec.modulus();
    return e;
}

FieldElement FieldElement::from_mpz(const FieldSpec& spec, const mpz_class& v) {
    FieldElement e(spec);
    if (spec.is_prime()) {
        e.v_ = static_cast<uint64_t>(mpz_fdiv_ui(v.get_mpz_t(), spec.modulus()));
    } else {
        e.v_ = mpq_class(v);
    }
    return e;
}

FieldElement FieldElement::from_mpq(const FieldSpec& spec, const mpq_class& v) {
    if (spec.is_rational()) {
        FieldElement e(spec);
        mpq_class q = v;
        q.canonicalize();
        e.v_ = q;
        return e;
    }
    return from_mpz(spec, v.get_num()) / from_mpz(spec, v.get_den());
}

FieldElement FieldElement::parse(const FieldSpec& spec, std::string_view text) {
    std::string t = trim(text);
    std::string body = t;
    bool neg = false;
    if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
        neg = body[0] == '-';
        body = trim(body.substr(1));
    }
    auto slash = body.find('/');
    std::string num = body.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw ParseError("bad field element '" + t + "'");
    mpz_class n(num), d(den);
    if (d == 0) throw ParseError("zero denominator in '" + t + "'");
    if (neg) n = -n;
    if (spec.is_rational()) {
        mpq_class q(n, d);
        q.canonicalize();
        return from_mpq(spec, q);
    }
    FieldElement de = from_mpz(spec, d);
    if (de.is_zero()) throw ParseError("denominator vanishes in " + spec.to_string());
    return from_mpz(spec, n) / de;
}

bool FieldElement::is_zero() const {
    if (auto r = std::get_if<uint64_t>(&v_)) return *r == 0;
    return std::get<mpq_class>(v_) == 0;
}

bool FieldElement::is_one() const {
    if (auto r = std::get_if<uint64_t>(&v_)) return *r == 1 % spec_.modulus();
    return std::get<mpq_class>(v_) == 1;
}

uint64_t FieldElement::residue() const {
    if (auto r = std::get_if<uint64_t>(&v_)) return *r;
    throw DomainError("residue() on a rational element");
}

const mpq_class& FieldElement::rational() const {
    if (auto q = std::get_if<mpq_class>(&v_)) return *q;
    throw DomainError("rational() on a prime-field element");
}

std::string FieldElement::to_string() const {
    if (auto r = std::get_if<uint64_t>(&v_)) return std::to_string(*r);
    return std::get<mpq_class>(v_).get_str();
}

void FieldElement::check_same(const FieldElement& o) const {
    if (!(spec_ == o.spec_)) throw DomainError("field mismatch: " + spec_.to_string() + " vs " + o.spec_.to_string());
}

FieldElement FieldElement::operator-() const {
    FieldElement e(*this);
    if (auto r = std::get_if<uint64_t>(&e.v_)) {
        if (*r) *r = spec_.modulus() - *r;
    } else {
        auto& q = std::get<mpq_class>(e.v_);
        q = -q;
    }
    return e;
}

FieldElement FieldElement::inv() const {
    if (is_zero()) throw DivisionByZero();
    FieldElement e(*this);
    if (auto r = std::get_if<uint64_t>(&e.v_)) {
        // Extended Euclid on signed 128-bit values.
        __int128 a = *r, m = spec_.modulus(), x0 = 1, x1 = 0;
        while (m) {
            __int128 q = a / m;
            __int128 t = a - q * m;
            a = m;
            m = t;
            t = x0 - q * x1;
            x0 = x1;
            x1 = t;
        }
        __int128 p = spec_.modulus();
        x0 %= p;
        if (x0 < 0) x0 += p;
        *r = static_cast<uint64_t>(x0);
    } else {
        auto& q = std::get<mpq_class>(e.v_);
        q = 1 / q;
    }
    return e;
}

FieldElement FieldElement::pow(uint64_t e) const {
    FieldElement base(*this), r = one(spec_);
    while (e) {
        if (e & 1) r *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return r;
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
    check_same(o);
    if (auto r = std::get_if<uint64_t>(&v_)) {
        uint64_t s = *r + std::get<uint64_t>(o.v_);
        if (s >= spec_.modulus()) s -= spec_.modulus();
        *r = s;
    } else {
        std::get<mpq_class>(v_) += std::get<mpq_class>(o.v_);
    }
    return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
    check_same(o);
    if (auto r = std::get_if<uint64_t>(&v_)) {
        uint64_t b = std::get<uint64_t>(o.v_);
        *r = *r >= b ? *r - b : *r + spec_.modulus() - b;
    } else {
        std::get<mpq_class>(v_) -= std::get<mpq_class>(o.v_);
    }
    return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
    check_same(o);
    if (auto r = std::get_if<uint64_t>(&v_)) {
        *r = mulmod(*r, std::get<uint64_t>(o.v_), spec_.modulus());
    } else {
        std::get<mpq_class>(v_) *= std::get<mpq_class>(o.v_);
    }
    return *this;
}

bool operator==(const FieldElement& a, const FieldElement& b) {
    a.check_same(b);
    if (auto r = std::get_if<uint64_t>(&a.v_)) return *r == std::get<uint64_t>(b.v_);
    return std::get<mpq_class>(a.v_) == std::get<mpq_class>(b.v_);
}

bool operator<(const FieldElement& a, const FieldElement& b) {
    a.check_same(b);
    if (auto r = std::get_if<uint64_t>(&a.v_)) return *r < std::get<uint64_t>(b.v_);
    return std::get<mpq_class>(a.v_) < std::get<mpq_class>(b.v_);
}

size_t FieldElement::hash() const {
    if (auto r = std::get_if<uint64_t>(&v_)) return std::hash<uint64_t>{}(*r);
    const auto& q = std::get<mpq_class>(v_);
    return std::hash<std::string>{}(q.get_str());
}

}  // namespace ipsw

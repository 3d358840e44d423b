#include "ipsw/poly.hpp"

#include <algorithm>
#include <random>
#include <unordered_map>

namespace ipsw {

// ---------------------------------------------------------------- Monomial

Monomial Monomial::unit(size_t nvars, size_t var, Exp power) {
    Monomial m(nvars);
    m.e_.at(var) = power;
    return m;
}

uint64_t Monomial::degree() const {
    uint64_t d = 0;
    for (Exp x : e_) d += x;
    return d;
}

Exp Monomial::ideg() const {
    Exp d = 0;
    for (Exp x : e_) d = std::max(d, x);
    return d;
}

size_t Monomial::support() const {
    size_t s = 0;
    for (Exp x : e_) s += x != 0;
    return s;
}

bool Monomial::divides(const Monomial& o) const {
    for (size_t i = 0; i < e_.size(); ++i)
        if (e_[i] > o[i]) return false;
    return true;
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r(std::max(size(), o.size()));
    for (size_t i = 0; i < r.e_.size(); ++i) {
        uint32_t s = uint32_t{(*this)[i]} + o[i];
        if (s > 0xFFFF) throw ResourceError("exponent overflow (16-bit exponents)");
        r.e_[i] = static_cast<Exp>(s);
    }
    return r;
}

Monomial Monomial::operator/(const Monomial& o) const {
    Monomial r(*this);
    for (size_t i = 0; i < o.size(); ++i) {
        if (o[i] > r[i]) throw DomainError("monomial does not divide");
        if (o[i]) r.e_[i] -= o[i];
    }
    return r;
}

size_t Monomial::hash() const {
    uint64_t h = 1469598103934665603ull;
    for (Exp x : e_) {
        h ^= x;
        h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
}

bool canonical_less(const Monomial& a, const Monomial& b) {
    uint64_t da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    size_t n = std::max(a.size(), b.size());
    for (size_t i = 0; i < n; ++i)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}

// ---------------------------------------------------------------- MonomialOrder

int MonomialOrder::compare(const Monomial& a, const Monomial& b) const {
    if (kind_ == Kind::GradedLex) {
        uint64_t da = a.degree(), db = b.degree();
        if (da != db) return da < db ? -1 : 1;
    }
    for (size_t v : perm_) {
        if (a[v] != b[v]) return a[v] < b[v] ? -1 : 1;
    }
    size_t n = std::max(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        if (a[i] == b[i]) continue;
        if (std::find(perm_.begin(), perm_.end(), i) != perm_.end()) continue;
        return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

MonomialOrder MonomialOrder::parse(std::string_view text) {
    std::string t(text);
    auto colon = t.find(':');
    std::string head = t.substr(0, colon);
    std::vector<size_t> perm;
    if (colon != std::string::npos) {
        std::string rest = t.substr(colon + 1);
        size_t pos = 0;
        while (pos <= rest.size()) {
            size_t comma = rest.find(',', pos);
            std::string tok = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            if (tok.empty() || !std::all_of(tok.begin(), tok.end(), ::isdigit)) throw ParseError("bad order permutation '" + rest + "'");
            size_t v = std::stoul(tok);
            if (v == 0) throw ParseError("order permutation is 1-based");
            if (std::find(perm.begin(), perm.end(), v - 1) != perm.end()) throw ParseError("order permutation repeats " + tok);
            perm.push_back(v - 1);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    if (head == "lex") return lex(perm);
    if (head == "grlex" || head == "graded-lex" || head.empty()) return grlex(perm);
    throw ParseError("unknown monomial order '" + head + "'");
}

std::string MonomialOrder::to_string() const {
    std::string s = kind_ == Kind::Lex ? "lex" : "grlex";
    if (!perm_.empty()) {
        s += ":";
        for (size_t i = 0; i < perm_.size(); ++i) s += (i ? "," : "") + std::to_string(perm_[i] + 1);
    }
    return s;
}

// ---------------------------------------------------------------- budget

namespace {
thread_local ExpansionBudget* g_budget = nullptr;
}

ExpansionBudget::ExpansionBudget(uint64_t limit) : limit_(limit), prev_(g_budget) { g_budget = this; }

ExpansionBudget::~ExpansionBudget() { g_budget = prev_; }

void ExpansionBudget::charge(uint64_t ops) {
    for (ExpansionBudget* b = g_budget; b; b = b->prev_) {
        b->used_ += ops;
        if (b->used_ > b->limit_)
            throw ResourceError("expansion budget of " + std::to_string(b->limit_) + " monomial operations exceeded");
    }
}

uint64_t ExpansionBudget::used() { return g_budget ? g_budget->used_ : 0; }

// ---------------------------------------------------------------- SparsePoly

namespace {

using Acc = std::unordered_map<Monomial, FieldElement, MonomialHash>;

void accumulate(Acc& acc, const Monomial& m, const FieldElement& c) {
    auto [it, inserted] = acc.try_emplace(m, c);
    if (!inserted) it->second += c;
}

std::vector<Term> drain(Acc& acc) {
    std::vector<Term> out;
    out.reserve(acc.size());
    for (auto& [m, c] : acc)
        if (!c.is_zero()) out.push_back(Term{m, c});
    std::sort(out.begin(), out.end(), [](const Term& a, const Term& b) { return canonical_less(a.mono, b.mono); });
    return out;
}

void check_spec(const SparsePoly& a, const SparsePoly& b) {
    if (!(a.spec() == b.spec())) throw DomainError("field mismatch: " + a.spec().to_string() + " vs " + b.spec().to_string());
}

}  // namespace

SparsePoly SparsePoly::constant(const FieldElement& c, size_t nvars) {
    SparsePoly p(c.spec(), nvars);
    if (!c.is_zero()) p.terms_.push_back(Term{Monomial(nvars), c});
    return p;
}

SparsePoly SparsePoly::variable(const FieldSpec& spec, size_t nvars, size_t var) {
    if (var >= nvars) throw DomainError("variable index out of range");
    SparsePoly p(spec, nvars);
    p.terms_.push_back(Term{Monomial::unit(nvars, var), FieldElement::one(spec)});
    return p;
}

SparsePoly SparsePoly::monomial(const FieldElement& c, Monomial m) {
    SparsePoly p(c.spec(), m.size());
    if (!c.is_zero()) p.terms_.push_back(Term{std::move(m), c});
    return p;
}

SparsePoly SparsePoly::from_terms(const FieldSpec& spec, size_t nvars, std::vector<Term> terms) {
    Acc acc;
    acc.reserve(terms.size());
    for (auto& t : terms) {
        if (!(t.coeff.spec() == spec)) throw DomainError("field mismatch in term list");
        if (t.mono.size() != nvars) t.mono.resize(nvars);
        accumulate(acc, t.mono, t.coeff);
    }
    SparsePoly p(spec, nvars);
    p.terms_ = drain(acc);
    return p;
}

bool SparsePoly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }

bool SparsePoly::is_multilinear() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.mono.is_multilinear(); });
}

FieldElement SparsePoly::constant_term() const {
    if (!terms_.empty() && terms_[0].mono.is_one()) return terms_[0].coeff;
    return FieldElement::zero(spec_);
}

FieldElement SparsePoly::coeff(const Monomial& m) const {
    Monomial key(m);
    key.resize(nvars_);
    auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                               [](const Term& t, const Monomial& k) { return canonical_less(t.mono, k); });
    if (it != terms_.end() && it->mono == key) return it->coeff;
    return FieldElement::zero(spec_);
}

uint64_t SparsePoly::degree() const { return terms_.empty() ? 0 : terms_.back().mono.degree(); }

Exp SparsePoly::ideg() const {
    Exp d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.ideg());
    return d;
}

Exp SparsePoly::degree_in(size_t var) const {
    Exp d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono[var]);
    return d;
}

std::vector<size_t> SparsePoly::support_vars() const {
    std::vector<size_t> out;
    for (size_t i = 0; i < nvars_; ++i)
        if (degree_in(i) > 0) out.push_back(i);
    return out;
}

SparsePoly SparsePoly::with_nvars(size_t n) const {
    SparsePoly p(spec_, n);
    p.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
        for (size_t i = n; i < t.mono.size(); ++i)
            if (t.mono[i]) throw DomainError("with_nvars would drop a variable in use");
        Monomial m(t.mono);
        m.resize(n);
        p.terms_.push_back(Term{std::move(m), t.coeff});
    }
    return p;
}

void SparsePoly::normalize_nvars(SparsePoly& o) {
    if (o.nvars_ > nvars_) *this = with_nvars(o.nvars_);
    if (nvars_ > o.nvars_) o = o.with_nvars(nvars_);
}

SparsePoly SparsePoly::operator-() const {
    SparsePoly p(*this);
    for (auto& t : p.terms_) t.coeff = -t.coeff;
    return p;
}

SparsePoly& SparsePoly::operator+=(const SparsePoly& o0) {
    check_spec(*this, o0);
    SparsePoly o(o0);
    normalize_nvars(o);
    std::vector<Term> out;
    out.reserve(terms_.size() + o.terms_.size());
    size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
        if (j == o.terms_.size() || (i < terms_.size() && canonical_less(terms_[i].mono, o.terms_[j].mono))) {
            out.push_back(std::move(terms_[i++]));
        } else if (i == terms_.size() || canonical_less(o.terms_[j].mono, terms_[i].mono)) {
            out.push_back(std::move(o.terms_[j++]));
        } else {
            FieldElement c = terms_[i].coeff + o.terms_[j].coeff;
            if (!c.is_zero()) out.push_back(Term{std::move(terms_[i].mono), c});
            ++i;
            ++j;
        }
    }
    terms_ = std::move(out);
    return *this;
}

SparsePoly& SparsePoly::operator-=(const SparsePoly& o) { return *this += -o; }

SparsePoly operator*(const SparsePoly& a0, const SparsePoly& b0) {
    check_spec(a0, b0);
    size_t n = std::max(a0.nvars(), b0.nvars());
    if (a0.is_zero() || b0.is_zero()) return SparsePoly(a0.spec(), n);
    const SparsePoly a = a0.nvars() == n ? a0 : a0.with_nvars(n);
    const SparsePoly b = b0.nvars() == n ? b0 : b0.with_nvars(n);
    ExpansionBudget::charge(uint64_t(a.sparsity()) * b.sparsity());
    Acc acc;
    acc.reserve(a.sparsity() * b.sparsity());
    for (const auto& ta : a.terms())
        for (const auto& tb : b.terms()) accumulate(acc, ta.mono * tb.mono, ta.coeff * tb.coeff);
    SparsePoly p(a.spec(), n);
    p.terms_ = drain(acc);
    return p;
}

SparsePoly SparsePoly::scale(const FieldElement& c) const {
    if (c.is_zero()) return SparsePoly(spec_, nvars_);
    SparsePoly p(*this);
    for (auto& t : p.terms_) t.coeff *= c;
    return p;
}

SparsePoly SparsePoly::pow(uint64_t e) const {
    SparsePoly r = constant(FieldElement::one(spec_), nvars_), base(*this);
    while (e) {
        if (e & 1) r = r * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return r;
}

SparsePoly SparsePoly::mul_monomial(const Monomial& m) const {
    SparsePoly p(spec_, std::max(nvars_, m.size()));
    p.terms_.reserve(terms_.size());
    for (const auto& t : terms_) p.terms_.push_back(Term{t.mono * m, t.coeff});
    for (auto& t : p.terms_) t.mono.resize(p.nvars_);
    // Multiplying by a monomial preserves graded-lex order.
    return p;
}

FieldElement SparsePoly::evaluate(const std::vector<FieldElement>& point) const {
    if (point.size() < nvars_) throw DomainError("evaluation point has " + std::to_string(point.size()) + " coordinates, need " + std::to_string(nvars_));
    FieldElement acc = FieldElement::zero(spec_);
    std::vector<std::vector<FieldElement>> powers(nvars_);
    for (const auto& t : terms_) {
        FieldElement c = t.coeff;
        for (size_t i = 0; i < nvars_; ++i) {
            Exp e = t.mono[i];
            if (!e) continue;
            auto& pw = powers[i];
            if (pw.empty()) pw.push_back(FieldElement::one(spec_));
            while (pw.size() <= e) pw.push_back(pw.back() * point[i]);
            c *= pw[e];
        }
        acc += c;
    }
    return acc;
}

SparsePoly SparsePoly::substitute(const std::vector<SparsePoly>& images) const {
    if (images.size() < nvars_) throw DomainError("substitution needs one image per variable");
    size_t out_n = images.empty() ? 0 : images[0].nvars();
    for (const auto& im : images) {
        check_spec(*this, im);
        out_n = std::max(out_n, im.nvars());
    }
    std::vector<std::vector<SparsePoly>> powers(nvars_);
    Acc acc;
    for (const auto& t : terms_) {
        SparsePoly prod = constant(t.coeff, out_n);
        for (size_t i = 0; i < nvars_ && !prod.is_zero(); ++i) {
            Exp e = t.mono[i];
            if (!e) continue;
            auto& pw = powers[i];
            if (pw.empty()) pw.push_back(constant(FieldElement::one(spec_), out_n));
            while (pw.size() <= e) pw.push_back(pw.back() * images[i]);
            prod = prod * pw[e];
        }
        ExpansionBudget::charge(prod.sparsity());
        for (const auto& pt : prod.terms_) accumulate(acc, pt.mono, pt.coeff);
    }
    SparsePoly p(spec_, out_n);
    p.terms_ = drain(acc);
    return p;
}

SparsePoly SparsePoly::substitute(const std::map<size_t, SparsePoly>& images) const {
    std::vector<SparsePoly> full;
    size_t n = nvars_;
    for (const auto& [v, im] : images) n = std::max(n, im.nvars());
    full.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        auto it = images.find(i);
        full.push_back(it != images.end() ? it->second.with_nvars(n) : variable(spec_, n, i));
    }
    return with_nvars(n).substitute(full);
}

SparsePoly SparsePoly::partial_evaluate(const std::map<size_t, FieldElement>& values) const {
    Acc acc;
    for (const auto& t : terms_) {
        FieldElement c = t.coeff;
        Monomial m(t.mono);
        for (const auto& [v, x] : values) {
            if (v < m.size() && m[v]) {
                c *= x.pow(m[v]);
                m.at(v) = 0;
            }
        }
        if (!c.is_zero()) accumulate(acc, m, c);
    }
    SparsePoly p(spec_, nvars_);
    p.terms_ = drain(acc);
    return p;
}

bool operator==(const SparsePoly& a, const SparsePoly& b) {
    if (!(a.spec_ == b.spec_)) return false;
    if (a.terms_.size() != b.terms_.size()) return false;
    for (size_t i = 0; i < a.terms_.size(); ++i) {
        const auto& ma = a.terms_[i].mono;
        const auto& mb = b.terms_[i].mono;
        size_t n = std::max(ma.size(), mb.size());
        for (size_t k = 0; k < n; ++k)
            if (ma[k] != mb[k]) return false;
        if (a.terms_[i].coeff != b.terms_[i].coeff) return false;
    }
    return true;
}

// ---------------------------------------------------------------- free operations

SparsePoly multilinearize(const SparsePoly& f) {
    std::vector<Term> out;
    out.reserve(f.sparsity());
    for (const auto& t : f.terms()) {
        std::vector<Exp> e = t.mono.exponents();
        for (auto& x : e) x = std::min<Exp>(x, 1);
        out.push_back(Term{Monomial(std::move(e)), t.coeff});
    }
    return SparsePoly::from_terms(f.spec(), f.nvars(), std::move(out));
}

namespace {
const Term& extremal(const SparsePoly& f, const MonomialOrder& ord, bool leading) {
    if (f.is_zero()) throw NoExtremalMonomial();
    const Term* best = &f.terms()[0];
    for (const auto& t : f.terms()) {
        int c = ord.compare(t.mono, best->mono);
        if (leading ? c > 0 : c < 0) best = &t;
    }
    return *best;
}
}  // namespace

Monomial leading_monomial(const SparsePoly& f, const MonomialOrder& ord) { return extremal(f, ord, true).mono; }
Monomial trailing_monomial(const SparsePoly& f, const MonomialOrder& ord) { return extremal(f, ord, false).mono; }
FieldElement leading_coeff(const SparsePoly& f, const MonomialOrder& ord) { return extremal(f, ord, true).coeff; }
FieldElement trailing_coeff(const SparsePoly& f, const MonomialOrder& ord) { return extremal(f, ord, false).coeff; }

SparsePoly elementary_symmetric(size_t n, size_t k, const FieldSpec& spec) {
    if (k > n) throw DomainError("elementary_symmetric: k=" + std::to_string(k) + " exceeds n=" + std::to_string(n));
    std::vector<Term> terms;
    std::vector<size_t> idx(k);
    for (size_t i = 0; i < k; ++i) idx[i] = i;
    const FieldElement one = FieldElement::one(spec);
    while (true) {
        Monomial m(n);
        for (size_t i : idx) m.at(i) = 1;
        terms.push_back(Term{std::move(m), one});
        // Next k-subset in lexicographic order.
        size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return SparsePoly::from_terms(spec, n, std::move(terms));
}

SparsePoly coeff_in_subring(const SparsePoly& f, const std::vector<size_t>& yvars, const std::vector<Exp>& b) {
    if (b.size() != yvars.size()) throw DomainError("coeff_in_subring: exponent vector does not match the y-variables");
    std::vector<Term> out;
    for (const auto& t : f.terms()) {
        bool match = true;
        for (size_t i = 0; i < yvars.size() && match; ++i) match = t.mono[yvars[i]] == b[i];
        if (!match) continue;
        Monomial m(t.mono);
        for (size_t v : yvars)
            if (v < m.size()) m.at(v) = 0;
        out.push_back(Term{std::move(m), t.coeff});
    }
    return SparsePoly::from_terms(f.spec(), f.nvars(), std::move(out));
}

SparsePoly interpolate_multilinear(const std::vector<FieldElement>& values, size_t n) {
    if (n > kMaxInterpolationVars) throw DomainError("interpolate_multilinear limited to n <= 24");
    if (values.size() != (size_t{1} << n)) throw DomainError("incomplete evaluation table: need 2^n values");
    if (values.empty()) throw DomainError("empty evaluation table");
    const FieldSpec spec = values[0].spec();
    std::vector<FieldElement> a(values);
    // Moebius transform: coefficient of x^T is the alternating sum of f(1_S) over S within T.
    for (size_t bit = 0; bit < n; ++bit) {
        const size_t b = size_t{1} << bit;
        for (size_t mask = 0; mask < a.size(); ++mask)
            if (mask & b) a[mask] -= a[mask ^ b];
    }
    std::vector<Term> terms;
    for (size_t mask = 0; mask < a.size(); ++mask) {
        if (a[mask].is_zero()) continue;
        Monomial m(n);
        for (size_t i = 0; i < n; ++i)
            if (mask >> i & 1) m.at(i) = 1;
        terms.push_back(Term{std::move(m), a[mask]});
    }
    return SparsePoly::from_terms(spec, n, std::move(terms));
}

std::vector<FieldElement> cube_values(const SparsePoly& f, size_t n) {
    if (n > kMaxInterpolationVars) throw DomainError("cube_values limited to n <= 24");
    for (size_t v = n; v < f.nvars(); ++v)
        if (f.degree_in(v)) throw DomainError("cube_values: polynomial uses variables beyond the cube");
    std::vector<FieldElement> a(size_t{1} << n, FieldElement::zero(f.spec()));
    for (const auto& t : f.terms()) {
        size_t mask = 0;
        for (size_t i = 0; i < n; ++i)
            if (t.mono[i]) mask |= size_t{1} << i;
        a[mask] += t.coeff;
    }
    for (size_t bit = 0; bit < n; ++bit) {
        const size_t b = size_t{1} << bit;
        for (size_t mask = 0; mask < a.size(); ++mask)
            if (mask & b) a[mask] += a[mask ^ b];
    }
    return a;
}

Restriction random_restriction(const SparsePoly& f, uint64_t keep_num, uint64_t keep_den, uint64_t seed) {
    if (keep_den == 0 || keep_num > keep_den) throw DomainError("keep probability must lie in [0,1]");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<uint64_t> dist(0, keep_den - 1);
    Restriction r;
    std::map<size_t, FieldElement> zeros;
    for (size_t i = 0; i < f.nvars(); ++i) {
        if (dist(rng) < keep_num) {
            r.kept.push_back(i);
        } else {
            zeros.emplace(i, FieldElement::zero(f.spec()));
        }
    }
    r.poly = f.partial_evaluate(zeros);
    return r;
}

std::pair<SparsePoly, SparsePoly> divide_with_remainder(const SparsePoly& f, const SparsePoly& g) {
    if (g.is_zero()) throw DivisionByZero();
    check_spec(f, g);
    size_t n = std::max(f.nvars(), g.nvars());
    SparsePoly p = f.with_nvars(n), q(f.spec(), n), r(f.spec(), n);
    const SparsePoly gg = g.with_nvars(n);
    const Term& lt = gg.terms().back();
    const FieldElement lc_inv = lt.coeff.inv();
    while (!p.is_zero()) {
        const Term t = p.terms().back();
        if (lt.mono.divides(t.mono)) {
            SparsePoly step = SparsePoly::monomial(t.coeff * lc_inv, t.mono / lt.mono);
            q += step;
            p -= step * gg;
        } else {
            SparsePoly lead = SparsePoly::monomial(t.coeff, t.mono);
            r += lead;
            p -= lead;
        }
    }
    return {q, r};
}

SparsePoly divide_exact(const SparsePoly& f, const SparsePoly& g) {
    auto [q, r] = divide_with_remainder(f, g);
    if (!r.is_zero()) throw DomainError("divide_exact: divisor does not divide");
    return q;
}

}  // namespace ipsw

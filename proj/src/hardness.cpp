#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "ipsw/hardness.hpp"

namespace ipsw {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Confirmed: return "confirmed";
        case Verdict::Refuted: return "refuted";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string to_string(Relation r) {
    switch (r) {
        case Relation::Equal: return "=";
        case Relation::AtLeast: return ">=";
        case Relation::AtMost: return "<=";
    }
    return "=";
}

bool HardnessReport::holds() const {
    switch (relation) {
        case Relation::Equal: return measured == claimed;
        case Relation::AtLeast: return measured >= claimed;
        case Relation::AtMost: return measured <= claimed;
    }
    return false;
}

void HardnessReport::decide() {
    if (failed_check) {
        verdict = counterexample ? Verdict::Refuted : Verdict::Inconclusive;
        return;
    }
    if (holds()) {
        verdict = Verdict::Confirmed;
        counterexample.reset();
        return;
    }
    if (!counterexample && evidence) {
        std::ostringstream d;
        d << "measured " << measured << " violates " << to_string(relation) << " " << claimed;
        counterexample = Counterexample{d.str(), evidence, {}};
    }
    verdict = counterexample ? Verdict::Refuted : Verdict::Inconclusive;
}

std::string HardnessReport::verdict_label() const {
    if (verdict == Verdict::Confirmed && probabilistic) return "confirmed (probabilistic, p <= " + error_bound + ")";
    return to_string(verdict);
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void guard_beta(size_t n, const FieldElement& beta) {
    const FieldSpec& spec = beta.spec();
    if (spec.is_prime() && spec.characteristic() <= n) throw DomainError("needs characteristic 0 or > n");
    for (size_t j = 0; j <= n; ++j)
        if (beta == FieldElement::from_int(spec, static_cast<int64_t>(j))) throw DomainError("beta must avoid 0..n");
}

std::string base_params(size_t n, const FieldElement& beta) {
    return "n=" + std::to_string(n) + " beta=" + beta.to_string() + " field=" + beta.spec().to_string();
}

uint64_t pow2(uint64_t k) {
    if (k >= 64) throw ResourceError("bound 2^" + std::to_string(k) + " overflows");
    return uint64_t{1} << k;
}

// Multilinear interpolant of 1/(s(mask) - beta) over the cube on m variables.
SparsePoly inverse_on_cube(size_t m, const FieldElement& beta, const std::function<size_t(size_t)>& s) {
    const FieldSpec& spec = beta.spec();
    std::vector<FieldElement> values(size_t{1} << m, FieldElement::zero(spec));
    std::unordered_map<size_t, FieldElement> cache;
    for (size_t mask = 0; mask < values.size(); ++mask) {
        const size_t k = s(mask);
        auto it = cache.find(k);
        if (it == cache.end()) it = cache.emplace(k, (FieldElement::from_int(spec, static_cast<int64_t>(k)) - beta).inv()).first;
        values[mask] = it->second;
    }
    return interpolate_multilinear(values, m);
}

}  // namespace

HardnessReport check_degree_bound(size_t n, const FieldElement& beta) {
    auto t0 = Clock::now();
    guard_beta(n, beta);
    HardnessReport r;
    r.claim = "degree-bound";
    r.params = base_params(n, beta);
    SparsePoly f = appendix_inverse_poly(n, beta);
    SparsePoly oracle = inverse_on_cube(n, beta, [](size_t m) { return static_cast<size_t>(std::popcount(m)); });
    r.measured = f.degree();
    r.claimed = n;
    r.relation = Relation::Equal;
    r.evidence = f;
    if (f != oracle) {
        r.failed_check = true;
        r.counterexample = Counterexample{"closed form differs from the cube interpolant", f - oracle, {}};
    }
    r.decide();
    r.millis = elapsed_ms(t0);
    return r;
}

HardnessReport check_sparsity_bound(size_t n, const FieldElement& beta) {
    auto t0 = Clock::now();
    guard_beta(n, beta);
    HardnessReport r;
    r.claim = "sparsity-bound";
    r.params = base_params(n, beta);
    SparsePoly f = appendix_inverse_poly(n, beta);
    r.measured = f.sparsity();
    r.claimed = pow2(n);
    r.relation = Relation::Equal;
    r.evidence = f;
    r.decide();
    r.millis = elapsed_ms(t0);
    return r;
}

SparsePoly eval_dim_witness(size_t n, const FieldElement& beta) {
    guard_beta(n, beta);
    if (n > 7) throw ResourceError("eval-dim witness interpolates over 2^{2n} points; n <= 7");
    const size_t low = (size_t{1} << n) - 1;
    return inverse_on_cube(2 * n, beta, [&](size_t m) { return static_cast<size_t>(std::popcount(m & low & (m >> n))); });
}

HardnessReport check_eval_dim_xy(size_t n, const FieldElement& beta) {
    auto t0 = Clock::now();
    SparsePoly g = eval_dim_witness(n, beta);
    PartitionSpec part;
    for (size_t i = 0; i < n; ++i) {
        part.u.push_back(i);
        part.v.push_back(n + i);
    }
    HardnessReport r;
    r.claim = "eval-dim-xy";
    r.params = base_params(n, beta);
    r.measured = coeff_dim(g, part);
    r.claimed = pow2(n);
    r.relation = Relation::Equal;
    r.evidence = g;
    r.decide();
    r.millis = elapsed_ms(t0);
    return r;
}

HardnessReport check_any_partition(size_t n, const FieldElement& beta, const PartitionSpec& part) {
    auto t0 = Clock::now();
    guard_beta(n, beta);
    if (n > 3) throw ResourceError("any-partition check interpolates over 2^{2n} points; n <= 3");
    if (part.u.size() != n || part.v.size() != n || !part.w.empty())
        throw DomainError("partition must split the 2n variables into two halves of size n");
    std::vector<bool> seen(2 * n, false);
    for (const auto* side : {&part.u, &part.v})
        for (size_t v : *side) {
            if (v >= 2 * n || seen[v]) throw DomainError("partition must use each of x1..x2n exactly once");
            seen[v] = true;
        }
    SparsePoly g = inverse_on_cube(2 * n, beta, [&](size_t m) {
        size_t s = 0;
        for (size_t k = 0; k < n; ++k) s += (m >> part.u[k] & 1) && (m >> part.v[k] & 1);
        return s;
    });
    HardnessReport r;
    r.claim = "any-partition";
    r.params = base_params(n, beta) + " partition=" + part.to_string(VarLayout::xs(2 * n));
    r.measured = coeff_dim(g, part);
    r.claimed = pow2(n);
    r.relation = Relation::AtLeast;
    r.evidence = g;
    r.decide();
    r.millis = elapsed_ms(t0);
    return r;
}

std::vector<PartitionSpec> balanced_partitions(size_t m) {
    if (m < 2 || m > 16) throw DomainError("balanced partitions need 2 <= m <= 16 variables");
    const size_t half = m / 2;
    std::vector<PartitionSpec> out;
    for (uint32_t um = 0; um < (1u << m); ++um) {
        if (static_cast<size_t>(std::popcount(um)) != half) continue;
        for (uint32_t vm = 0; vm < (1u << m); ++vm) {
            if ((vm & um) || static_cast<size_t>(std::popcount(vm)) != half) continue;
            if (std::countr_zero(um) > std::countr_zero(vm)) continue;
            PartitionSpec p;
            for (size_t i = 0; i < m; ++i) {
                if (um >> i & 1) p.u.push_back(i);
                else if (vm >> i & 1) p.v.push_back(i);
                else p.w.push_back(i);
            }
            out.push_back(std::move(p));
        }
    }
    return out;
}

uint64_t certify_multiple_sps(const SparsePoly& h, const MonomialOrder& ord) {
    if (h.is_zero()) throw DomainError("certify_multiple_sps needs h != 0");
    return pow2(leading_monomial(h, ord).support());
}

uint64_t certify_multiple_sps_t(const SparsePoly& h, uint32_t t, const MonomialOrder& ord, double c) {
    if (h.is_zero()) throw DomainError("certify_multiple_sps_t needs h != 0");
    if (t == 0 || !(c > 0)) throw DomainError("t must be positive and c > 0");
    const Monomial lm = leading_monomial(h, ord);
    const FieldSpec& spec = h.spec();
    if (spec.is_prime() && spec.characteristic() < lm.ideg())
        throw DomainError("characteristic " + std::to_string(spec.characteristic()) + " is below ideg(LM) = " + std::to_string(lm.ideg()));
    return pow2(static_cast<uint64_t>(std::floor(static_cast<double>(lm.support()) / (c * t))));
}

uint64_t certify_multiple_sparse(const SparsePoly& h, const std::vector<FieldElement>& alpha, const MonomialOrder& ord) {
    if (alpha.size() != h.nvars()) throw DomainError("translation needs one entry per variable");
    std::vector<SparsePoly> images;
    for (size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i].is_zero()) throw DomainError("translation must have full support");
        images.push_back(SparsePoly::variable(h.spec(), h.nvars(), i) + SparsePoly::constant(alpha[i], h.nvars()));
    }
    SparsePoly shifted = h.substitute(images);
    if (shifted.is_zero()) throw DomainError("certify_multiple_sparse needs h != 0");
    return pow2(trailing_monomial(shifted, ord).support());
}

MinMultiple min_multiple_sparsity_bruteforce(const SparsePoly& f) {
    const FieldSpec& spec = f.spec();
    if (!spec.is_prime()) throw DomainError("brute-force enumeration needs a prime field");
    if (f.is_zero()) throw DomainError("f must be nonzero");
    if (!f.is_multilinear()) throw DomainError("f must be multilinear");
    const size_t n = f.nvars();
    if (n > 5) throw ResourceError("enumeration budget exceeded");
    const size_t cube = size_t{1} << n;
    const uint64_t p = spec.modulus();
    uint64_t count = 1;
    for (size_t i = 0; i < cube; ++i) {
        if (count > kMaxMultiplierEnumeration / p) throw ResourceError("enumeration budget p^{2^n} exceeds 10^7");
        count *= p;
    }
    // Column k is x^{m_k} f over the monomials that can occur.
    std::vector<Monomial> monos;
    std::vector<std::vector<std::pair<size_t, uint64_t>>> cols(cube);
    std::unordered_map<Monomial, size_t, MonomialHash> index;
    for (size_t k = 0; k < cube; ++k) {
        Monomial m(n);
        for (size_t i = 0; i < n; ++i) m.at(i) = k >> i & 1;
        const SparsePoly shifted = f.mul_monomial(m);
        for (const auto& t : shifted.terms()) {
            auto [it, fresh] = index.emplace(t.mono, monos.size());
            if (fresh) monos.push_back(t.mono);
            cols[k].emplace_back(it->second, t.coeff.residue());
        }
    }
    std::vector<uint64_t> acc(monos.size(), 0), digit(cube, 0);
    MinMultiple best;
    best.sparsity = UINT64_MAX;
    std::vector<uint64_t> best_digits;
    for (uint64_t step = 1; step < count; ++step) {
        for (size_t k = 0; k < cube; ++k) {
            digit[k] = (digit[k] + 1) % p;
            for (const auto& [row, c] : cols[k]) acc[row] = (acc[row] + c) % p;
            if (digit[k] != 0) break;
        }
        uint64_t nz = 0;
        for (uint64_t v : acc) nz += v != 0;
        if (nz < best.sparsity) {
            best.sparsity = nz;
            best_digits = digit;
        }
    }
    std::vector<Term> terms;
    for (size_t k = 0; k < cube; ++k) {
        if (best_digits[k] == 0) continue;
        Monomial m(n);
        for (size_t i = 0; i < n; ++i) m.at(i) = k >> i & 1;
        terms.push_back(Term{std::move(m), FieldElement::from_residue(spec, best_digits[k])});
    }
    best.multiplier = SparsePoly::from_terms(spec, n, std::move(terms));
    return best;
}

uint64_t certify_multiple_roabp(const SparsePoly& h, const PartitionSpec& paired, const MonomialOrder& ord) {
    return leading_diagonal(h, paired, ord).sparsity();
}

SparsePoly pairwise_product(size_t m, const std::vector<FieldElement>& alpha) {
    if (alpha.size() != m * (m - 1) / 2) throw DomainError("need one shift per pair i < j");
    const FieldSpec& spec = alpha.empty() ? FieldSpec::rational() : alpha[0].spec();
    SparsePoly h = SparsePoly::constant(FieldElement::one(spec), m);
    size_t k = 0;
    for (size_t i = 0; i < m; ++i)
        for (size_t j = i + 1; j < m; ++j, ++k)
            h = h * (SparsePoly::variable(spec, m, i) + SparsePoly::variable(spec, m, j) + SparsePoly::constant(alpha[k], m));
    return h;
}

HardnessReport certify_every_partition_roabp(const SparsePoly& h, const FieldElement& w_value) {
    auto t0 = Clock::now();
    const size_t m = h.nvars();
    if (m < 2 || m > 6) throw DomainError("every-partition certification supports 2..6 variables");
    HardnessReport r;
    r.claim = "every-partition-roabp";
    r.params = "n=" + std::to_string(m) + " field=" + h.spec().to_string();
    r.claimed = pow2(m / 2);
    r.relation = Relation::AtLeast;
    r.measured = UINT64_MAX;
    const auto parts = balanced_partitions(m);
    for (const auto& p : parts) {
        SparsePoly g = h;
        if (!p.w.empty()) {
            std::map<size_t, FieldElement> fix;
            for (size_t v : p.w) fix.emplace(v, w_value);
            g = g.partial_evaluate(fix);
        }
        SparsePoly ld = leading_diagonal(g, PartitionSpec{p.u, p.v, {}});
        if (ld.sparsity() < r.measured) {
            r.measured = ld.sparsity();
            r.evidence = ld;
            r.note = "weakest partition " + p.to_string(VarLayout::xs(m));
        }
    }
    r.note += "; " + std::to_string(parts.size()) + " partitions";
    r.decide();
    r.millis = elapsed_ms(t0);
    return r;
}

// ---------------------------------------------------------------- generator

SvbGenerator svb_build(size_t n, size_t ell, const FieldSpec& spec) {
    if (n == 0 || ell == 0) throw DomainError("svb needs n, ell >= 1");
    if (!spec.size_at_least(n)) throw DomainError("field too small: need |F| >= n");
    SvbGenerator g;
    g.n = n;
    g.ell = ell;
    g.spec = spec;
    for (size_t i = 0; i < n; ++i) g.omega.push_back(FieldElement::from_int(spec, static_cast<int64_t>(i)));
    g.ind = lagrange_basis(g.omega);
    const size_t nv = 3 * ell;
    std::vector<std::vector<SparsePoly>> ix(ell), iy(ell);
    for (size_t k = 0; k < ell; ++k)
        for (size_t i = 0; i < n; ++i) {
            ix[k].push_back(g.ind[i].to_sparse(nv, 3 * k));
            iy[k].push_back(g.ind[i].to_sparse(nv, 3 * k + 1));
        }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            SparsePoly e(spec, nv);
            for (size_t k = 0; k < ell; ++k) e += SparsePoly::variable(spec, nv, 3 * k + 2) * ix[k][i] * iy[k][j];
            g.matrix.push_back(std::move(e));
        }
    return g;
}

SvbCheck svb_check(const SparsePoly& f, const SvbGenerator& gen, uint64_t trials, uint64_t seed) {
    const size_t nn = gen.n * gen.n;
    if (f.nvars() > nn) throw DomainError("f has more variables than the n x n matrix");
    if (!(f.spec() == gen.spec)) throw DomainError("f and the generator are over different fields");
    const SparsePoly ff = f.with_nvars(nn);
    SvbCheck out;
    if (trials == 0) {
        out.vanishes = ff.substitute(gen.matrix).is_zero();
        return out;
    }
    out.probabilistic = true;
    out.trials = trials;
    const uint64_t deg = ff.degree() * (2 * (gen.n - 1) + 1);
    const FieldSpec& spec = gen.spec;
    const uint64_t set_size = spec.is_prime() ? spec.modulus() : 2 * deg + 1;
    out.bound_num = deg;
    out.bound_den = set_size;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<uint64_t> dist(0, set_size - 1);
    out.vanishes = true;
    for (uint64_t t = 0; t < trials; ++t) {
        std::vector<FieldElement> pt;
        for (size_t k = 0; k < 3 * gen.ell; ++k) {
            uint64_t v = dist(rng);
            pt.push_back(spec.is_prime() ? FieldElement::from_residue(spec, v) : FieldElement::from_int(spec, static_cast<int64_t>(v)));
        }
        std::vector<FieldElement> mat;
        for (const auto& e : gen.matrix) mat.push_back(e.evaluate(pt));
        if (!ff.evaluate(mat).is_zero()) {
            out.vanishes = false;
            out.witness_seed = pt;
            break;
        }
    }
    return out;
}

SparsePoly determinant_poly(size_t n, const FieldSpec& spec) {
    if (n > 8) throw ResourceError("determinant expansion limited to n <= 8");
    std::vector<size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Term> terms;
    do {
        size_t inversions = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
        Monomial m(n * n);
        for (size_t i = 0; i < n; ++i) m.at(i * n + perm[i]) = 1;
        terms.push_back(Term{std::move(m), FieldElement::from_int(spec, inversions % 2 ? -1 : 1)});
    } while (std::next_permutation(perm.begin(), perm.end()));
    return SparsePoly::from_terms(spec, n * n, std::move(terms));
}

// ---------------------------------------------------------------- extraction

ExtractedMultiple extract_multiple_from_ips(const IpsCertificate& cert, size_t f_index, const std::vector<FieldElement>& point) {
    const AxiomSystem& sys = cert.system;
    if (f_index >= sys.num_axioms()) throw DomainError("f_index is out of range");
    if (point.size() != sys.nvars) throw DomainError("point needs one coordinate per variable");
    if (!verify_exact(cert).valid()) throw DomainError("certificate is not valid");
    const FieldSpec& spec = sys.spec;
    const FieldElement zero = FieldElement::zero(spec), one = FieldElement::one(spec);
    if (sys.include_boolean)
        for (const auto& v : point)
            if (v != zero && v != one) throw DomainError("point must be boolean");
    for (size_t j = 0; j < sys.num_axioms(); ++j)
        if (j != f_index && !sys.axioms[j].evaluate(point).is_zero())
            throw DomainError("point does not satisfy axiom " + std::to_string(j + 1));

    const size_t n = sys.nvars;
    std::vector<SparsePoly> images;
    for (size_t i = 0; i < n; ++i) images.push_back(SparsePoly::variable(spec, n, i));
    auto ph = sys.placeholder_images();
    ph[f_index] = SparsePoly(spec, n);
    for (auto& im : ph) images.push_back(std::move(im));
    ExtractedMultiple out;
    out.multiple = SparsePoly::constant(one, n) - expand(cert.proof).substitute(images);
    if (out.multiple.evaluate(point) != one) throw Error("extracted polynomial does not evaluate to 1 at the point");
    std::tie(out.quotient, out.remainder) = divide_with_remainder(out.multiple, sys.axioms[f_index].with_nvars(n));
    return out;
}

}  // namespace ipsw

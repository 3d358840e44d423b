#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ipsw/ips.hpp"
#include "ipsw/measure.hpp"
#include "ipsw/poly.hpp"

namespace ipsw {

enum class Verdict { Confirmed, Refuted, Inconclusive };
enum class Relation { Equal, AtLeast, AtMost };  // how measured must compare with claimed

std::string to_string(Verdict v);
std::string to_string(Relation r);  // "=", ">=", "<="

struct Counterexample {
    std::string description;
    std::optional<SparsePoly> poly;
    std::vector<FieldElement> point;
};

struct HardnessReport {
    std::string claim;
    std::string params;
    uint64_t measured = 0;
    uint64_t claimed = 0;
    Relation relation = Relation::Equal;
    Verdict verdict = Verdict::Inconclusive;
    bool probabilistic = false;
    std::string error_bound;  // Monte-Carlo verdicts only
    std::optional<Counterexample> counterexample;
    std::optional<SparsePoly> evidence;  // the object the measurement was taken on
    bool failed_check = false;           // a structural check failed; counterexample holds the details
    std::string note;
    double millis = 0;

    bool holds() const;
    // Sets the verdict. A failed structural check or comparison becomes `refuted` only when a
    // counterexample is stored (the evidence serves for comparisons), and `inconclusive` otherwise.
    void decide();
    // "confirmed", "confirmed (probabilistic, p <= ...)", "refuted" or "inconclusive".
    std::string verdict_label() const;
};

// ---------------------------------------------------------------- functional lower bounds

HardnessReport check_degree_bound(size_t n, const FieldElement& beta);
HardnessReport check_sparsity_bound(size_t n, const FieldElement& beta);
// Multilinear g on x_1..x_n, y_1..y_n (ids 0..n-1, n..2n-1) with g = 1/(sum x_i y_i - beta) on the cube.
SparsePoly eval_dim_witness(size_t n, const FieldElement& beta);
HardnessReport check_eval_dim_xy(size_t n, const FieldElement& beta);
// partition splits the 2n variables x_1..x_2n into halves u | v; u[k] is matched with v[k].
HardnessReport check_any_partition(size_t n, const FieldElement& beta, const PartitionSpec& partition);
// Balanced splits of m variables into u | v with |u| = |v| = m/2, one per unordered pair {u, v}; leftovers go to w.
std::vector<PartitionSpec> balanced_partitions(size_t m);

// ---------------------------------------------------------------- hardness of multiples

uint64_t certify_multiple_sps(const SparsePoly& h, const MonomialOrder& ord = {});
// 2^{floor(l0(LM h) / (c t))}.
uint64_t certify_multiple_sps_t(const SparsePoly& h, uint32_t t, const MonomialOrder& ord = {}, double c = 1.0);
uint64_t certify_multiple_sparse(const SparsePoly& h, const std::vector<FieldElement>& alpha, const MonomialOrder& ord = {});

struct MinMultiple {
    uint64_t sparsity = 0;
    SparsePoly multiplier;
};

constexpr uint64_t kMaxMultiplierEnumeration = 10'000'000;
// Minimum sparsity of g f over nonzero multilinear g in the variables of f, by exhaustive enumeration.
MinMultiple min_multiple_sparsity_bruteforce(const SparsePoly& f);

uint64_t certify_multiple_roabp(const SparsePoly& h, const PartitionSpec& paired, const MonomialOrder& ord = {});

// prod_{i<j} (x_i + x_j + alpha_{i,j}) over m variables; alpha is listed in (i,j) lexicographic order.
SparsePoly pairwise_product(size_t m, const std::vector<FieldElement>& alpha);
// Certifies every balanced partition of the m variables of h by the leading diagonal across its natural matching.
// A leftover variable (odd m) is fixed to w_value first.
HardnessReport certify_every_partition_roabp(const SparsePoly& h, const FieldElement& w_value);

// ---------------------------------------------------------------- generator

struct SvbGenerator {
    size_t n = 0, ell = 0;
    FieldSpec spec;
    std::vector<FieldElement> omega;
    std::vector<UniPoly> ind;  // ind[i](omega[j]) = [i == j]
    // Entries G_{i,j} over seed variables x_k, y_k, z_k with ids 3k, 3k+1, 3k+2; row-major.
    std::vector<SparsePoly> matrix;
};

SvbGenerator svb_build(size_t n, size_t ell, const FieldSpec& spec);

struct SvbCheck {
    bool vanishes = false;
    bool probabilistic = false;
    uint64_t trials = 0;
    uint64_t bound_num = 0, bound_den = 1;  // per-trial probability of missing a nonzero composition
    std::vector<FieldElement> witness_seed;
};

// f is over the n^2 matrix variables, id i*n + j. trials == 0 decides f o G symbolically.
SvbCheck svb_check(const SparsePoly& f, const SvbGenerator& gen, uint64_t trials = 0, uint64_t seed = 0);
SparsePoly determinant_poly(size_t n, const FieldSpec& spec);

// ---------------------------------------------------------------- extraction

struct ExtractedMultiple {
    SparsePoly multiple;   // 1 - C(x, 0, g, x^2 - x)
    SparsePoly quotient;
    SparsePoly remainder;  // zero when f divides the multiple
    bool divisible() const { return remainder.is_zero(); }
};

// axiom f_index is f; the other axioms and the booleans must vanish at `point`.
ExtractedMultiple extract_multiple_from_ips(const IpsCertificate& cert, size_t f_index,
                                            const std::vector<FieldElement>& point);

}  // namespace ipsw

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ipsw/circuit.hpp"
#include "ipsw/poly.hpp"

namespace ipsw {

enum class Linearity { General, LinYZ, LinY };

std::string to_string(Linearity l);  // general | lin_yz | lin_y
Linearity parse_linearity(std::string_view text);

// Axioms f_1..f_m over x_1..x_n, optionally with the boolean axioms x_i^2 - x_i.
struct AxiomSystem {
    FieldSpec spec;
    size_t nvars = 0;
    std::vector<SparsePoly> axioms;
    bool include_boolean = true;

    size_t num_axioms() const { return axioms.size(); }
    size_t num_boolean() const { return include_boolean ? nvars : 0; }
    // Proof variables: x_1..x_n, then y_1..y_m, then z_1..z_n when booleans are on.
    VarLayout layout() const { return VarLayout{nvars, axioms.size(), num_boolean()}; }
    void validate() const;
    // Images of the placeholders y_j -> f_j, z_i -> x_i^2 - x_i, as polynomials in x.
    std::vector<SparsePoly> placeholder_images() const;
};

struct IpsCertificate {
    AxiomSystem system;
    Circuit proof;
    Linearity linearity = Linearity::General;
};

enum class VerifyStatus { Valid, FailsZero, FailsOne, FailsLinearity };
std::string to_string(VerifyStatus s);  // valid | fails-zero | fails-one | fails-linearity

struct VerifyResult {
    VerifyStatus status = VerifyStatus::Valid;
    std::optional<std::vector<FieldElement>> witness;  // x-point where the failing identity is nonzero
    std::string detail;
    bool probabilistic = false;
    uint64_t trials = 0;
    uint64_t bound_num = 0, bound_den = 1;  // per-trial false-accept bound D/|S|
    uint64_t size = 0, width = 0, degree = 0;
    double millis = 0;

    bool valid() const { return status == VerifyStatus::Valid; }
};

VerifyResult verify_exact(const IpsCertificate& cert, uint64_t budget = kDefaultExpandBudget);
VerifyResult verify_pit(const IpsCertificate& cert, uint64_t trials, uint64_t seed);

enum class DivisionRoute { Auto, Formula, Circuit };

struct LinearizeResult {
    IpsCertificate cert;
    std::vector<std::string> routes;  // division route per placeholder
};

// Rewrites a valid certificate into sum_i C_i(x, f(x)) * p_i over all placeholders p_i.
// axiom_circuits[j], when given, computes f_j over x; otherwise the axioms are compiled as sums of monomials.
LinearizeResult ips_to_linear(const IpsCertificate& cert, const std::vector<CircuitDag>& axiom_circuits = {},
                              DivisionRoute route = DivisionRoute::Auto);

// ---------------------------------------------------------------- subset sum

// Sorted set of subset sums of alpha.
std::vector<FieldElement> reachable_sums(const std::vector<FieldElement>& alpha);

SparsePoly subset_sum_axiom(const std::vector<FieldElement>& alpha, const FieldElement& beta);

struct SubsetSumWitness {
    std::vector<FieldElement> reachable;
    UniPoly p;            // prod_{a in A} (t - a)
    PoweringFormula g;    // (p(t) - p(beta)) / (t - beta) at t = sum alpha_i x_i
    FieldElement scale;   // -p(beta)
    SparsePoly f_ml;      // ml(g / scale)
};

SubsetSumWitness subset_sum_witness(const std::vector<FieldElement>& alpha, const FieldElement& beta);

struct RoabpMultilinearization {
    Roabp ml;
    std::vector<std::optional<Roabp>> h;  // indexed by variable id; empty for variables outside the order
};

RoabpMultilinearization multilinearize_roabp(const Roabp& a);

struct RefutationInfo {
    IpsCertificate cert;
    size_t witness_width = 0;  // width of the multilinear witness roABP (roABP route)
};

// order: permutation of x-indices (0-based); empty means identity.
RefutationInfo build_roabp_refutation(const std::vector<FieldElement>& alpha, const FieldElement& beta,
                                      const std::vector<size_t>& order = {});
IpsCertificate build_mlformula_refutation(const std::vector<FieldElement>& alpha, const FieldElement& beta);

// ---------------------------------------------------------------- multilinearization witnesses

struct MonomialSquareWitness {
    MultilinearFormula product_form;  // prod (z_i + x_i) - prod x_i
    SparsePoly sum_form;              // the same polynomial, 2^d - 1 monomials
};

// Variables x_1..x_d are ids 0..d-1, z_1..z_d are ids d..2d-1.
MonomialSquareWitness monomial_square_witness(size_t d, const FieldSpec& spec);

constexpr uint64_t kMaxWitnessTerms = uint64_t{1} << 22;

// C(x, z) over x ids 0..n-1 and z ids n..2n-1 with g f - ml(g f) = C(x, x^2 - x) and C(x, 0) = 0.
SparsePoly sparse_times_formula_witness(const SparsePoly& g, const SparsePoly& f);

IpsCertificate simulate_sparse_linips(const AxiomSystem& system, const std::vector<SparsePoly>& witnesses);

SparsePoly appendix_inverse_poly(size_t n, const FieldElement& beta);

// Decides whether a multilinear IPS_LIN refutation sum g_j y_j + sum h_i z_i exists (g, h multilinear in x)
// by solving the coefficient identity as a linear system; returns one when it exists.
std::optional<IpsCertificate> find_multilinear_lin_refutation(const AxiomSystem& system);

// Solves A v = b over the field; nullopt when inconsistent.
std::optional<std::vector<FieldElement>> solve_linear_system(std::vector<std::vector<FieldElement>> a,
                                                             std::vector<FieldElement> b);

}  // namespace ipsw

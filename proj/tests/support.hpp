#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ipsw/circuit.hpp"
#include "ipsw/ips.hpp"
#include "ipsw/measure.hpp"
#include "ipsw/poly.hpp"

namespace ipsw::testing {

using Rng = std::mt19937_64;

FieldElement random_element(const FieldSpec& spec, Rng& rng, int64_t lo = -9, int64_t hi = 9);
std::vector<FieldElement> random_point(const FieldSpec& spec, size_t n, Rng& rng);
SparsePoly random_poly(const FieldSpec& spec, size_t nvars, size_t terms, Exp max_exp, Rng& rng);
SparsePoly random_nonzero_poly(const FieldSpec& spec, size_t nvars, size_t terms, Exp max_exp, Rng& rng);
SparsePoly random_multilinear(const FieldSpec& spec, size_t nvars, Rng& rng);
MonomialOrder random_order(size_t nvars, Rng& rng);

CircuitDag random_dag(const FieldSpec& spec, size_t nvars, size_t gates, Rng& rng);
PoweringFormula random_powering(const FieldSpec& spec, size_t nvars, Rng& rng);
LowDegPoweringFormula random_lowdeg_powering(const FieldSpec& spec, size_t nvars, Rng& rng);
Roabp random_roabp(const FieldSpec& spec, size_t nvars, Rng& rng);
MultilinearFormula random_mlf(const FieldSpec& spec, size_t nvars, Rng& rng);

// Brute-force value of a multilinear interpolant: sum over the cube of f(b) * prod (x_i b_i + (1-x_i)(1-b_i)).
SparsePoly cube_interpolation_oracle(const SparsePoly& f, size_t n);

struct SuiteResult {
    std::string name;
    size_t cases = 0;
    size_t failures = 0;
    std::string first_failure;
    bool ok() const { return cases > 0 && failures == 0; }
};

SuiteResult suite_extremal_multiplicativity(size_t pairs, uint64_t seed);
SuiteResult suite_diagonal_multiplicativity(size_t pairs, uint64_t seed);
SuiteResult suite_multilinearization(size_t polys, uint64_t seed);
SuiteResult suite_circuit_eval_expand(size_t per_class, uint64_t seed);

}  // namespace ipsw::testing

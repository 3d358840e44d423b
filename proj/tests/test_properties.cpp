#include <doctest.h>

#include "support.hpp"

using namespace ipsw::testing;

namespace {
void require_suite(const SuiteResult& r) {
    INFO(r.name << ": " << r.failures << "/" << r.cases << " failed; first: " << r.first_failure);
    CHECK(r.ok());
}
}  // namespace

TEST_CASE("extremal monomials are multiplicative") { require_suite(suite_extremal_multiplicativity(200, 101)); }
TEST_CASE("diagonals are multiplicative") { require_suite(suite_diagonal_multiplicativity(200, 102)); }
TEST_CASE("multilinearization identities") { require_suite(suite_multilinearization(200, 103)); }
TEST_CASE("evaluation agrees with expansion") { require_suite(suite_circuit_eval_expand(40, 104)); }

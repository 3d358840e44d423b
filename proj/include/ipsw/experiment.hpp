#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ipsw/hardness.hpp"

namespace ipsw {

// Width constant c in the recorded bound width <= c (n+2)^2 of the subset-sum roABP refutation.
constexpr double kRoabpWidthConstant = 3.5;

struct ClaimJob {
    std::string claim;
    std::map<std::string, std::string> params;  // key=value tokens after the claim id
    std::optional<uint64_t> claimed;             // `claimed=` overrides the built-in bound
    size_t line = 0;
};

// One `CHECK <claim-id> key=value ...` per line; blank lines and `#` comments are skipped.
std::vector<ClaimJob> parse_manifest(std::string_view text);

const std::vector<std::string>& known_claims();
bool is_known_claim(const std::string& claim);

// Runs one job. Guard failures become an inconclusive report carrying the message in `note`.
HardnessReport run_claim(const ClaimJob& job, uint64_t seed);

struct ExperimentResult {
    std::vector<HardnessReport> reports;  // manifest order, unknown claims skipped
    std::vector<std::string> warnings;
    bool any_refuted = false;
};

// Job i draws from splitmix64(seed ^ i) unless it sets `seed=`; results do not depend on parallelism.
ExperimentResult run_experiment(const std::vector<ClaimJob>& jobs, uint64_t seed, size_t parallelism);

uint64_t splitmix64(uint64_t x);

std::string csv_header();  // claim,params,measured,claimed,verdict,millis
// deterministic zeroes the millis column so repeated runs are byte-identical.
std::string csv_row(const HardnessReport& r, bool deterministic);

}  // namespace ipsw

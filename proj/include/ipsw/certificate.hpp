#pragma once

#include <string>
#include <string_view>

#include "ipsw/ips.hpp"

namespace ipsw {

// Line-oriented certificate file: FIELD, NVARS, AXIOM (one per axiom), BOOLEAN, LINEARITY, PROOF.
// A roABP proof starts with `PROOF roabp ...` and continues up to its `end` line.
IpsCertificate parse_certificate(std::string_view text);
std::string write_certificate(const IpsCertificate& cert);

// `VALID` or `INVALID <condition> <witness>`, followed by a stats block.
std::string format_verify_result(const VerifyResult& r);

}  // namespace ipsw

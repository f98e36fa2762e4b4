#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace seqmimo {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Fast numerical self-check suite: sequential estimator vs batch solution,
/// water-filling budget constraint, determinant identities, PCA/VC agreement.
std::vector<CheckResult> run_self_checks(std::uint64_t seed = 7);

}  // namespace seqmimo

#pragma once

#include <vector>

#include "seqmimo/common.hpp"

namespace seqmimo {

/// Running state of the sequential estimator.
struct RlsState {
    CMat gamma;     // K x K error covariance, starts at p*I
    CVec estimate;  // K soft estimates
    int ap_cursor = 0;
};

RlsState rls_init(int num_users, double p);

/// One refinement step with AP data (channel block, noise precision Z^-1,
/// observation). A zero precision block is a skip: the AP stored nothing.
void rls_step(RlsState& state, const CMat& h, const CMat& zinv, const CVec& y);

struct EstimationResult {
    CVec estimate;
    CMat error_cov;
};

/// Sequential refinement over all APs in fronthaul order.
EstimationResult rls_sequential(const std::vector<CMat>& h_blocks,
                                const std::vector<CMat>& zinv_blocks,
                                const std::vector<CVec>& observations, double p);

/// One-shot regularized least squares on the stacked system; the reference the
/// sequential estimator must reproduce.
EstimationResult batch_ls_oracle(const std::vector<CMat>& h_blocks,
                                 const std::vector<CMat>& zinv_blocks,
                                 const std::vector<CVec>& observations, double p);

/// prelog * log2 det(p H H^H Z^-1 + I), evaluated in the K x K form.
double sum_se_exact(const std::vector<CMat>& h_blocks, const std::vector<CMat>& zinv_blocks,
                    double p, double prelog);

/// Per-AP decomposition; upper-bounds sum_se_exact.
double sum_se_upper(const std::vector<CMat>& h_blocks, const std::vector<CMat>& zinv_blocks,
                    double p, double prelog);

/// Same log-det as sum_se_exact but contractually restricted to diagonal
/// per-AP noise blocks (element-wise compression discards off-diagonals).
double sum_se_ec(const std::vector<CMat>& h_blocks, const std::vector<CMat>& zinv_blocks,
                 double p, double prelog);

}  // namespace seqmimo

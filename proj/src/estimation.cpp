#include "seqmimo/estimation.hpp"

namespace seqmimo {

RlsState rls_init(int num_users, double p) {
    RlsState state;
    state.gamma = p * CMat::Identity(num_users, num_users);
    state.estimate = CVec::Zero(num_users);
    state.ap_cursor = 0;
    return state;
}

void rls_step(RlsState& state, const CMat& h, const CMat& zinv, const CVec& y) {
    ++state.ap_cursor;
    if (zinv.isZero(0.0)) {
        return;  // AP stored nothing; identity update
    }
    const Eigen::Index n = h.rows();

    // whitened channel and observation
    const CMat w = psd_sqrt(zinv);
    const CMat hw = w * h;
    const CVec yw = w * y;

    CMat m = CMat::Identity(n, n) + hw * state.gamma * hw.adjoint();
    Eigen::LLT<CMat> llt(m);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("rls_step: innovation covariance not positive definite");
    }
    CMat gamma_hw = state.gamma * hw.adjoint();          // K x n
    CMat x = llt.solve(hw * state.gamma);                // n x K
    state.gamma -= gamma_hw * x;
    state.gamma = 0.5 * (state.gamma + state.gamma.adjoint());

    state.estimate += state.gamma * hw.adjoint() * (yw - hw * state.estimate);
}

EstimationResult rls_sequential(const std::vector<CMat>& h_blocks,
                                const std::vector<CMat>& zinv_blocks,
                                const std::vector<CVec>& observations, double p) {
    if (h_blocks.size() != zinv_blocks.size() || h_blocks.size() != observations.size()) {
        throw std::invalid_argument("rls_sequential: block count mismatch");
    }
    const int k = static_cast<int>(h_blocks.front().cols());
    RlsState state = rls_init(k, p);
    for (std::size_t l = 0; l < h_blocks.size(); ++l) {
        rls_step(state, h_blocks[l], zinv_blocks[l], observations[l]);
    }
    return {state.estimate, state.gamma};
}

EstimationResult batch_ls_oracle(const std::vector<CMat>& h_blocks,
                                 const std::vector<CMat>& zinv_blocks,
                                 const std::vector<CVec>& observations, double p) {
    if (h_blocks.size() != zinv_blocks.size() || h_blocks.size() != observations.size()) {
        throw std::invalid_argument("batch_ls_oracle: block count mismatch");
    }
    const Eigen::Index k = h_blocks.front().cols();
    CMat gram = CMat::Zero(k, k);
    CVec rhs = CVec::Zero(k);
    for (std::size_t l = 0; l < h_blocks.size(); ++l) {
        const CMat ha = h_blocks[l].adjoint() * zinv_blocks[l];
        gram += ha * h_blocks[l];
        rhs += ha * observations[l];
    }
    gram.diagonal().array() += 1.0 / p;
    Eigen::LLT<CMat> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("batch_ls_oracle: normal equations not positive definite");
    }
    EstimationResult res;
    res.estimate = llt.solve(rhs);
    res.error_cov = llt.solve(CMat::Identity(k, k));
    res.error_cov = 0.5 * (res.error_cov + res.error_cov.adjoint());
    return res;
}

namespace {

CMat channel_gram(const std::vector<CMat>& h_blocks, const std::vector<CMat>& zinv_blocks) {
    if (h_blocks.size() != zinv_blocks.size()) {
        throw std::invalid_argument("sum_se: block count mismatch");
    }
    const Eigen::Index k = h_blocks.front().cols();
    CMat gram = CMat::Zero(k, k);
    for (std::size_t l = 0; l < h_blocks.size(); ++l) {
        gram += h_blocks[l].adjoint() * zinv_blocks[l] * h_blocks[l];
    }
    return 0.5 * (gram + gram.adjoint());
}

}  // namespace

double sum_se_exact(const std::vector<CMat>& h_blocks, const std::vector<CMat>& zinv_blocks,
                    double p, double prelog) {
    const CMat gram = channel_gram(h_blocks, zinv_blocks);
    CMat a = p * gram;
    a.diagonal().array() += 1.0;
    return prelog * log2_det_hpd(a);
}

double sum_se_upper(const std::vector<CMat>& h_blocks, const std::vector<CMat>& zinv_blocks,
                    double p, double prelog) {
    double total = 0.0;
    for (std::size_t l = 0; l < h_blocks.size(); ++l) {
        CMat a = p * (h_blocks[l].adjoint() * zinv_blocks[l] * h_blocks[l]);
        a = 0.5 * (a + a.adjoint());
        a.diagonal().array() += 1.0;
        total += log2_det_hpd(a);
    }
    return prelog * total;
}

double sum_se_ec(const std::vector<CMat>& h_blocks, const std::vector<CMat>& zinv_blocks,
                 double p, double prelog) {
    for (const CMat& z : zinv_blocks) {
        CMat off = z;
        off.diagonal().setZero();
        if (off.cwiseAbs().maxCoeff() > 1e-12 * (1.0 + z.cwiseAbs().maxCoeff())) {
            throw std::invalid_argument("sum_se_ec: noise blocks must be diagonal");
        }
    }
    return sum_se_exact(h_blocks, zinv_blocks, p, prelog);
}

}  // namespace seqmimo

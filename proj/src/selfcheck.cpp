#include "seqmimo/selfcheck.hpp"

#include <cmath>
#include <sstream>

#include "seqmimo/compression.hpp"
#include "seqmimo/estimation.hpp"
#include "seqmimo/rng.hpp"

namespace seqmimo {

namespace {

CMat random_cmat(Rng& rng, int rows, int cols) {
    CMat m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) m(i, j) = rng.cgaussian();
    return m;
}

CMat random_precision(Rng& rng, int n) {
    const CMat a = random_cmat(rng, n, n);
    CMat zinv = a * a.adjoint();
    zinv.diagonal().array() += 0.1;
    return zinv;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

CheckResult check_rls_matches_batch(std::uint64_t seed) {
    Rng rng(mix_seed(seed, 1));
    double worst = 0.0;
    const int instances = 200;
    for (int i = 0; i < instances; ++i) {
        const int l = 1 + static_cast<int>(rng.uniform() * 8);
        const int n = 1 + static_cast<int>(rng.uniform() * 4);
        const int k = 1 + static_cast<int>(rng.uniform() * 6);
        const double p = 0.5 + rng.uniform();
        std::vector<CMat> h(l), zinv(l);
        std::vector<CVec> y(l);
        for (int j = 0; j < l; ++j) {
            h[j] = random_cmat(rng, n, k);
            zinv[j] = random_precision(rng, n);
            y[j] = random_cmat(rng, n, 1);
        }
        const EstimationResult seq = rls_sequential(h, zinv, y, p);
        const EstimationResult batch = batch_ls_oracle(h, zinv, y, p);
        worst = std::max(worst, (seq.estimate - batch.estimate).norm() /
                                    std::max(1e-300, batch.estimate.norm()));
        worst = std::max(worst, (seq.error_cov - batch.error_cov).norm() /
                                    batch.error_cov.norm());
    }
    return {"rls_matches_batch", worst < 1e-9,
            std::to_string(instances) + " instances, max rel err " + fmt(worst)};
}

CheckResult check_waterfill_budget(std::uint64_t seed) {
    Rng rng(mix_seed(seed, 2));
    double worst = 0.0;
    const int cases = 100;
    for (int i = 0; i < cases; ++i) {
        const int x = 1 + static_cast<int>(rng.uniform() * 6);
        Vec s(x);
        for (int j = 0; j < x; ++j) s(j) = 1.0 + 100.0 * rng.uniform();
        const double budget = 0.5 + 15.0 * rng.uniform();
        const WaterfillResult wf = reverse_waterfill(s, 1.0, budget);
        worst = std::max(worst, std::abs(wf.bits - budget));
    }
    return {"waterfill_budget", worst <= 1e-6,
            std::to_string(cases) + " spectra, max budget miss " + fmt(worst) + " bits"};
}

CheckResult check_sylvester(std::uint64_t seed) {
    Rng rng(mix_seed(seed, 3));
    double worst = 0.0;
    const int cases = 200;
    for (int i = 0; i < cases; ++i) {
        const int n = 1 + static_cast<int>(rng.uniform() * 8);
        const int m = 1 + static_cast<int>(rng.uniform() * 8);
        const CMat a = random_cmat(rng, n, m);
        const CMat b = random_cmat(rng, m, n);
        const Cplx d1 = (CMat::Identity(n, n) + a * b).determinant();
        const Cplx d2 = (CMat::Identity(m, m) + b * a).determinant();
        worst = std::max(worst, std::abs(d1 - d2) / std::max(1e-300, std::abs(d1)));
    }
    return {"sylvester_identity", worst < 1e-10,
            std::to_string(cases) + " instances, max rel err " + fmt(worst)};
}

CheckResult check_hadamard(std::uint64_t seed) {
    Rng rng(mix_seed(seed, 4));
    double worst_slack = 0.0;
    const int cases = 200;
    for (int i = 0; i < cases; ++i) {
        const int l = 2 + static_cast<int>(rng.uniform() * 3);
        const int n = 1 + static_cast<int>(rng.uniform() * 3);
        const int k = 1 + static_cast<int>(rng.uniform() * 4);
        std::vector<CMat> h(l), zinv(l);
        for (int j = 0; j < l; ++j) {
            h[j] = random_cmat(rng, n, k);
            zinv[j] = random_precision(rng, n);
        }
        const double exact = sum_se_exact(h, zinv, 1.0, 1.0);
        const double upper = sum_se_upper(h, zinv, 1.0, 1.0);
        worst_slack = std::min(worst_slack, upper - exact);
    }
    return {"hadamard_bound", worst_slack >= -1e-10,
            std::to_string(cases) + " instances, min slack " + fmt(worst_slack)};
}

CheckResult check_pca_matches_vc(std::uint64_t seed) {
    Rng rng(mix_seed(seed, 5));
    double worst = 0.0;
    const int cases = 200;
    for (int i = 0; i < cases; ++i) {
        const int n = 1 + static_cast<int>(rng.uniform() * 5);
        const int k = 1 + static_cast<int>(rng.uniform() * 5);
        const double sigma2 = 0.5 + rng.uniform();
        const double p = 0.5 + rng.uniform();
        const CMat h = random_cmat(rng, n, k);
        const double budget = 1.0 + 10.0 * rng.uniform();

        const CompressionSolution vc = solve_vc(h, p, sigma2, budget);
        const PcaMap map = pca_transform(h, p, sigma2);
        const CompressionSolution pca = solve_pca_ec(map, sigma2, budget);

        const double se_vc = sum_se_exact({h}, {noise_precision(vc, sigma2)}, p, 1.0);
        const double se_pca = sum_se_exact({map.effective_channel},
                                           {noise_precision(pca, sigma2)}, p, 1.0);
        worst = std::max(worst, std::abs(se_vc - se_pca) / std::max(1e-300, se_vc));
    }
    return {"pca_matches_vc", worst < 1e-9,
            std::to_string(cases) + " realizations, max rel gap " + fmt(worst)};
}

}  // namespace

std::vector<CheckResult> run_self_checks(std::uint64_t seed) {
    return {
        check_rls_matches_batch(seed), check_waterfill_budget(seed), check_sylvester(seed),
        check_hadamard(seed),          check_pca_matches_vc(seed),
    };
}

}  // namespace seqmimo

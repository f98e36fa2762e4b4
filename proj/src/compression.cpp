#include "seqmimo/compression.hpp"

#include <cmath>
#include <limits>

namespace seqmimo {

std::string to_string(CompressionOption option) {
    switch (option) {
        case CompressionOption::VectorWise: return "vc";
        case CompressionOption::ElementWise: return "ec";
        case CompressionOption::ElementWiseEqualBits: return "ec_eq";
        case CompressionOption::PcaElementWise: return "pca_ec";
        case CompressionOption::None: return "none";
    }
    return "?";
}

CompressionOption option_from_string(const std::string& name) {
    if (name == "vc") return CompressionOption::VectorWise;
    if (name == "ec") return CompressionOption::ElementWise;
    if (name == "ec_eq") return CompressionOption::ElementWiseEqualBits;
    if (name == "pca_ec") return CompressionOption::PcaElementWise;
    if (name == "none" || name == "inf") return CompressionOption::None;
    throw std::invalid_argument("unknown compression option: " + name);
}

Vec waterfill_allocation(const Vec& signal_eigs, double noise_floor, double mu) {
    Vec lambda(signal_eigs.size());
    const double inv_floor = 1.0 / noise_floor;
    for (Eigen::Index i = 0; i < signal_eigs.size(); ++i) {
        const double gap = inv_floor - 1.0 / signal_eigs(i);
        lambda(i) = std::max(0.0, gap / mu - inv_floor);
    }
    return lambda;
}

double allocation_bits(const Vec& noise_inv_eigs, const Vec& signal_eigs) {
    double bits = 0.0;
    for (Eigen::Index i = 0; i < signal_eigs.size(); ++i) {
        bits += std::log2(noise_inv_eigs(i) * signal_eigs(i) + 1.0);
    }
    return bits;
}

WaterfillResult reverse_waterfill(const Vec& signal_eigs, double noise_floor,
                                  double budget_bits) {
    if (noise_floor <= 0) {
        throw std::invalid_argument("reverse_waterfill: noise floor must be positive");
    }
    if (!(budget_bits >= 0) || std::isinf(budget_bits)) {
        throw std::invalid_argument("reverse_waterfill: budget must be finite and nonnegative");
    }
    for (Eigen::Index i = 0; i < signal_eigs.size(); ++i) {
        if (signal_eigs(i) < noise_floor * (1.0 - 1e-12)) {
            throw std::invalid_argument("reverse_waterfill: signal power below noise floor");
        }
    }

    WaterfillResult res;
    if (budget_bits == 0) {
        res.noise_inv_eigs = Vec::Zero(signal_eigs.size());
        res.mu = 1.0;
        res.bits = 0.0;
        return res;
    }
    if ((signal_eigs.array() <= noise_floor).all()) {
        throw std::invalid_argument(
            "reverse_waterfill: positive budget on a pure-noise spectrum");
    }

    // Budgets beyond this leave per-mode compression noise below the
    // double-precision resolution of the noise floor; the allocation (and its
    // multiplier) would overflow, and the stored signal is already exact for
    // every downstream computation. Cap the budget there.
    double cap_bits = 0.0;
    for (Eigen::Index i = 0; i < signal_eigs.size(); ++i) {
        if (signal_eigs(i) > noise_floor) {
            cap_bits += std::log2(signal_eigs(i) / noise_floor) + 64.0;
        }
    }
    budget_bits = std::min(budget_bits, cap_bits);

    auto bits_at = [&](double mu) {
        return allocation_bits(waterfill_allocation(signal_eigs, noise_floor, mu), signal_eigs);
    };

    // allocation shuts off entirely at mu = 1, so bits(1) = 0 < budget;
    // expand the lower end until the budget is bracketed
    double lo = 1e-12;
    double hi = 1.0;
    int guard = 0;
    while (bits_at(lo) < budget_bits) {
        lo *= 1e-3;
        if (++guard > 90 || lo < 1e-250) {
            throw std::runtime_error("reverse_waterfill: failed to bracket the budget");
        }
    }

    constexpr double kTolBits = 1e-6;
    constexpr int kMaxIter = 200;
    double mu = hi;
    double bits = 0.0;
    for (int it = 0; it < kMaxIter; ++it) {
        mu = std::sqrt(lo * hi);  // bisection on log(mu)
        bits = bits_at(mu);
        res.iterations = it + 1;
        if (std::abs(bits - budget_bits) <= kTolBits) break;
        if (bits > budget_bits) {
            lo = mu;
        } else {
            hi = mu;
        }
    }
    if (std::abs(bits - budget_bits) > kTolBits) {
        throw std::runtime_error("reverse_waterfill: bisection did not converge");
    }
    res.noise_inv_eigs = waterfill_allocation(signal_eigs, noise_floor, mu);
    res.mu = mu;
    res.bits = bits;
    return res;
}

CompressionSolution solve_vc(const CMat& h, double p, double sigma2, double budget_bits) {
    SignalEig se = signal_eigendecomposition(h, p, sigma2);
    WaterfillResult wf = reverse_waterfill(se.spectrum, sigma2, budget_bits);

    CompressionSolution sol;
    sol.option = CompressionOption::VectorWise;
    sol.basis = std::move(se.basis);
    sol.noise_inv_eigs = std::move(wf.noise_inv_eigs);
    sol.signal_spectrum = std::move(se.spectrum);
    sol.mu = wf.mu;
    sol.target_bits = budget_bits;
    sol.achieved_bits = wf.bits;
    return sol;
}

namespace {

Vec element_power_profile(const CMat& h, double p, double sigma2) {
    Vec power(h.rows());
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        power(i) = p * h.row(i).squaredNorm() + sigma2;
    }
    return power;
}

}  // namespace

CompressionSolution solve_ec(const CMat& h, double p, double sigma2, double budget_bits) {
    Vec power = element_power_profile(h, p, sigma2);
    WaterfillResult wf = reverse_waterfill(power, sigma2, budget_bits);

    CompressionSolution sol;
    sol.option = CompressionOption::ElementWise;
    sol.basis = CMat::Identity(h.rows(), h.rows());
    sol.noise_inv_eigs = std::move(wf.noise_inv_eigs);
    sol.signal_spectrum = power;
    sol.element_power = std::move(power);
    sol.mu = wf.mu;
    sol.target_bits = budget_bits;
    sol.achieved_bits = wf.bits;
    return sol;
}

CompressionSolution solve_ec_equal_bits(const CMat& h, double p, double sigma2,
                                        double budget_bits) {
    if (budget_bits < 0 || std::isinf(budget_bits)) {
        throw std::invalid_argument("solve_ec_equal_bits: budget must be finite and nonnegative");
    }
    const Eigen::Index n = h.rows();
    Vec power = element_power_profile(h, p, sigma2);
    const double bits_per_element = budget_bits / static_cast<double>(n);

    CompressionSolution sol;
    sol.option = CompressionOption::ElementWiseEqualBits;
    sol.basis = CMat::Identity(n, n);
    sol.noise_inv_eigs = Vec::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        // same representability cap as reverse_waterfill
        const double cap = std::log2(power(i) / sigma2) + 64.0;
        const double factor = std::exp2(std::min(bits_per_element, cap)) - 1.0;
        sol.noise_inv_eigs(i) = factor / power(i);  // noise var = P_i / factor
    }
    sol.signal_spectrum = power;
    sol.element_power = std::move(power);
    sol.mu = 0;  // heuristic split, no multiplier
    sol.target_bits = budget_bits;
    sol.achieved_bits = allocation_bits(sol.noise_inv_eigs, sol.signal_spectrum);
    return sol;
}

PcaMap pca_transform(const CMat& h, double p, double sigma2) {
    SignalEig se = signal_eigendecomposition(h, p, sigma2);
    const Eigen::Index x = std::min(h.rows(), h.cols());

    PcaMap map;
    map.projector = se.basis.leftCols(x);
    map.effective_channel = map.projector.adjoint() * h;
    map.effective_spectrum = se.spectrum.head(x);
    return map;
}

CompressionSolution solve_pca_ec(const PcaMap& map, double sigma2, double budget_bits) {
    WaterfillResult wf = reverse_waterfill(map.effective_spectrum, sigma2, budget_bits);

    CompressionSolution sol;
    sol.option = CompressionOption::PcaElementWise;
    sol.basis = CMat::Identity(map.effective_spectrum.size(), map.effective_spectrum.size());
    sol.noise_inv_eigs = std::move(wf.noise_inv_eigs);
    sol.signal_spectrum = map.effective_spectrum;
    sol.mu = wf.mu;
    sol.target_bits = budget_bits;
    sol.achieved_bits = wf.bits;
    return sol;
}

double mutual_info_scalar(double q, TestChannel variant) {
    if (!(q > 0)) {
        throw std::invalid_argument("mutual_info_scalar: noise power must be positive");
    }
    if (variant == TestChannel::Additive) {
        return std::log2(1.0 / q + 1.0);
    }
    return std::max(0.0, std::log2(1.0 / q));
}

double achieved_bits(const CompressionSolution& solution, const CMat& h, double p,
                     double sigma2) {
    switch (solution.option) {
        case CompressionOption::None:
            return 0.0;
        case CompressionOption::ElementWise:
        case CompressionOption::ElementWiseEqualBits: {
            double bits = 0.0;
            for (Eigen::Index i = 0; i < h.rows(); ++i) {
                const double power = p * h.row(i).squaredNorm() + sigma2;
                bits += std::log2(1.0 + power * solution.noise_inv_eigs(i));
            }
            return bits;
        }
        case CompressionOption::VectorWise:
        case CompressionOption::PcaElementWise: {
            // log2 det(Qinv (p H H^H + sigma2 I) + I); for PCA, h is the
            // effective channel in the mapped space
            const Eigen::Index n = h.rows();
            CMat qinv = solution.basis * solution.noise_inv_eigs.asDiagonal() *
                        solution.basis.adjoint();
            CMat cov = p * (h * h.adjoint());
            cov.diagonal().array() += sigma2;
            CMat m = qinv * cov + CMat::Identity(n, n);
            Eigen::PartialPivLU<CMat> lu(m);
            double acc = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += std::log2(std::abs(lu.matrixLU()(i, i)));
            }
            return acc;
        }
    }
    return 0.0;
}

double compression_objective(const CompressionSolution& solution, double sigma2) {
    double obj = 0.0;
    for (Eigen::Index i = 0; i < solution.noise_inv_eigs.size(); ++i) {
        const double lam = solution.noise_inv_eigs(i);
        obj += std::log2(lam * solution.signal_spectrum(i) + 1.0) -
               std::log2(lam * sigma2 + 1.0);
    }
    return obj;
}

CMat noise_precision(const CompressionSolution& solution, double sigma2) {
    const Eigen::Index n = solution.basis.rows();
    if (solution.option == CompressionOption::None) {
        return CMat::Identity(n, n) / sigma2;
    }
    Vec w(solution.noise_inv_eigs.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double lam = solution.noise_inv_eigs(i);
        w(i) = lam / (1.0 + sigma2 * lam);
    }
    if (solution.option == CompressionOption::VectorWise) {
        CMat zinv = solution.basis * w.asDiagonal() * solution.basis.adjoint();
        return 0.5 * (zinv + zinv.adjoint());  // kill roundoff asymmetry
    }
    return w.asDiagonal();
}

}  // namespace seqmimo

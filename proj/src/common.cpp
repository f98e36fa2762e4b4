#include "seqmimo/common.hpp"

#include <cmath>

namespace seqmimo {

double log2_det_hpd(const CMat& a) {
    Eigen::LLT<CMat> llt(a);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("log2_det_hpd: matrix is not positive definite");
    }
    const auto& l = llt.matrixLLT();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        acc += std::log2(l(i, i).real());
    }
    return 2.0 * acc;
}

CMat psd_sqrt(const CMat& a) {
    Eigen::SelfAdjointEigenSolver<CMat> eig(a);
    if (eig.info() != Eigen::Success) {
        throw std::runtime_error("psd_sqrt: eigendecomposition failed");
    }
    Vec d = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * d.asDiagonal() * eig.eigenvectors().adjoint();
}

SignalEig signal_eigendecomposition(const CMat& h, double p, double sigma2) {
    const Eigen::Index n = h.rows();
    CMat cov = p * (h * h.adjoint());
    cov.diagonal().array() += sigma2;
    Eigen::SelfAdjointEigenSolver<CMat> eig(cov);
    if (eig.info() != Eigen::Success) {
        throw std::runtime_error("signal_eigendecomposition failed");
    }
    SignalEig out;
    out.basis.resize(n, n);
    out.spectrum.resize(n);
    // solver returns ascending order; flip to descending
    for (Eigen::Index i = 0; i < n; ++i) {
        out.basis.col(i) = eig.eigenvectors().col(n - 1 - i);
        out.spectrum(i) = std::max(eig.eigenvalues()(n - 1 - i), sigma2);
    }
    return out;
}

}  // namespace seqmimo

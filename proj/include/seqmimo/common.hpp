#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace seqmimo {

using Cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

/// log2(det(A)) for a Hermitian positive-definite matrix, via Cholesky.
double log2_det_hpd(const CMat& a);

/// Hermitian PSD square root (negative eigenvalues from roundoff clamped to zero).
CMat psd_sqrt(const CMat& a);

/// Eigendecomposition of p*H*H^H + sigma2*I with eigenvalues sorted descending.
/// The eigenvalues are the per-mode received-signal powers; the columns of
/// `basis` span the same directions as the left singular vectors of H.
struct SignalEig {
    CMat basis;    // N x N unitary
    Vec spectrum;  // N values >= sigma2, descending
};
SignalEig signal_eigendecomposition(const CMat& h, double p, double sigma2);

}  // namespace seqmimo

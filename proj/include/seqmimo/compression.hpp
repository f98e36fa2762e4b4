#pragma once

#include <string>

#include "seqmimo/common.hpp"

namespace seqmimo {

enum class CompressionOption {
    VectorWise,            // joint compression of the received vector
    ElementWise,           // per-element, optimized bit split
    ElementWiseEqualBits,  // per-element, uniform bit split
    PcaElementWise,        // per-element after PCA pre-processing
    None,                  // unlimited memory, no compression noise
};

std::string to_string(CompressionOption option);
CompressionOption option_from_string(const std::string& name);

/// Per-AP compression design. `noise_inv_eigs` holds the eigenvalues of the
/// inverse compression-noise covariance in `basis` coordinates; a zero entry
/// means that mode is not stored at all (infinite compression noise).
struct CompressionSolution {
    int ap_index = -1;
    CompressionOption option = CompressionOption::None;
    CMat basis;               // N x N unitary (identity for element-wise options)
    Vec noise_inv_eigs;       // x nonnegative entries, 1/W
    Vec signal_spectrum;      // per-mode received power p*lambda^2 + sigma2 (W)
    Vec element_power;        // diag of P_l for element-wise options, else empty
    double mu = 0;            // Lagrange multiplier of the bit constraint
    double target_bits = 0;   // budget per stored vector
    double achieved_bits = 0;
};

/// PCA pre-processing map of one AP's receive space.
struct PcaMap {
    CMat projector;          // N x x, orthonormal columns
    CMat effective_channel;  // x x K
    Vec effective_spectrum;  // x signal powers p*lambda^2 + sigma2
};

struct WaterfillResult {
    Vec noise_inv_eigs;
    double mu = 0;
    double bits = 0;
    int iterations = 0;
};

/// Inverse-noise eigenvalues for a fixed water level mu.
Vec waterfill_allocation(const Vec& signal_eigs, double noise_floor, double mu);

/// Bits consumed by an allocation: sum_i log2(lambda_i * s_i + 1).
double allocation_bits(const Vec& noise_inv_eigs, const Vec& signal_eigs);

/// Distortion-minimal bit allocation across eigenmodes: bisection on the water
/// level until the budget is met to 1e-6 bits. Throws if the budget is
/// positive but every mode is pure noise.
WaterfillResult reverse_waterfill(const Vec& signal_eigs, double noise_floor,
                                  double budget_bits);

CompressionSolution solve_vc(const CMat& h, double p, double sigma2, double budget_bits);
CompressionSolution solve_ec(const CMat& h, double p, double sigma2, double budget_bits);
CompressionSolution solve_ec_equal_bits(const CMat& h, double p, double sigma2,
                                        double budget_bits);

PcaMap pca_transform(const CMat& h, double p, double sigma2);
CompressionSolution solve_pca_ec(const PcaMap& map, double sigma2, double budget_bits);

enum class TestChannel { Additive, Optimal };

/// Bits needed to compress a unit-power complex Gaussian scalar at
/// compression-noise power q.
double mutual_info_scalar(double q, TestChannel variant);

/// Re-evaluates the bit count of a solution from the matrix expressions
/// (log-det form); independent self-check of the solver's constraint.
/// For PCA solutions pass the effective channel.
double achieved_bits(const CompressionSolution& solution, const CMat& h, double p,
                     double sigma2);

/// Objective of the per-AP design problem evaluated at this solution:
/// sum_i [log2(lambda_i s_i + 1) - log2(lambda_i sigma2 + 1)].
double compression_objective(const CompressionSolution& solution, double sigma2);

/// Inverse of Z = Q + sigma2*I in the solution's working space. Modes with
/// zero inverse-noise eigenvalue contribute nothing (the stored signal carries
/// no information about them).
CMat noise_precision(const CompressionSolution& solution, double sigma2);

}  // namespace seqmimo

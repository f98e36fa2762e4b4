#pragma once

#include <cstdint>
#include <vector>

#include "seqmimo/common.hpp"

namespace seqmimo {

/// Physical and protocol parameters of one simulated network.
struct ScenarioConfig {
    int num_aps = 0;           // L
    int antennas_per_ap = 0;   // N, total antennas M = L*N
    int num_users = 0;         // K
    double tx_power_w = 0.01;  // per-user uplink power
    double noise_power_w = dbm_to_watt(-85.0);
    double area_side_m = 180.0;
    std::int64_t num_subcarriers = 4096;
    double bandwidth_hz = 100e6;
    double prelog = 1.0;       // uplink fraction of the coherence block
    int pilot_length = 0;      // 0 = perfect CSI; otherwise in [1, K]
    double pilot_power_w = 0;  // 0 = reuse tx_power_w

    int total_antennas() const { return num_aps * antennas_per_ap; }
    double symbol_duration_s() const {
        return static_cast<double>(num_subcarriers) / bandwidth_hz;
    }
    double effective_pilot_power() const {
        return pilot_power_w > 0 ? pilot_power_w : tx_power_w;
    }
    void validate() const;
};

struct Geometry {
    Mat ap_positions;    // L x 2, meters
    Mat user_positions;  // K x 2, meters
    Mat distances;       // K x L, meters, clamped to >= 1
};

struct ChannelRealization {
    std::vector<CMat> blocks;  // L blocks, each N x K
    Mat large_scale;           // K x L linear power gains
    Vec effective_noise;       // per-AP noise power (W); sigma2 under perfect CSI
};

/// Urban-microcell path loss in dB at 2 GHz; defined for distances >= 1 m.
double path_loss_db(double distance_m);

/// APs equally spaced along the square perimeter in fronthaul order (the first
/// AP sits at the (0,0) corner); users uniform i.i.d. inside the square.
Geometry build_geometry(const ScenarioConfig& config, std::uint64_t seed);

/// Linear gains 10^(path_loss_db(d)/10) from a distance table.
Mat large_scale_gains(const Geometry& geometry);

/// Uncorrelated Rayleigh fading: entry (i,k) of block l is CN(0, beta_kl).
ChannelRealization sample_channel(const Geometry& geometry, const ScenarioConfig& config,
                                  std::uint64_t seed);
ChannelRealization sample_channel_from_gains(const Mat& beta, const ScenarioConfig& config,
                                             std::uint64_t seed);

/// Pilot-contaminated per-coefficient MMSE channel estimation. Users are
/// assigned pilots round-robin (user k -> pilot k mod tau_p). The returned
/// realization carries the estimated blocks and per-AP effective noise
/// sigma2 + p * sum_k c_kl, with c_kl the estimation-error variance.
ChannelRealization estimate_channel(const ChannelRealization& channel,
                                    const ScenarioConfig& config, double pilot_power_w,
                                    std::uint64_t seed);

/// Closed-form estimation-error variance of one coefficient under contamination.
/// `beta_shared_sum` sums beta_{k'l} over all users sharing the pilot (incl. k).
double estimation_error_variance(double beta_kl, double beta_shared_sum, double pilot_power_w,
                                 int pilot_length, double noise_power_w);

}  // namespace seqmimo

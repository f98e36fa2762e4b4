#include "seqmimo/scenario.hpp"

#include <cmath>

#include "seqmimo/rng.hpp"

namespace seqmimo {

namespace {
constexpr double kMinDistanceM = 1.0;
}

void ScenarioConfig::validate() const {
    if (num_aps < 1 || antennas_per_ap < 1) {
        throw std::invalid_argument("ScenarioConfig: need at least one AP and one antenna");
    }
    if (num_users < 1) {
        throw std::invalid_argument("ScenarioConfig: need at least one user");
    }
    if (tx_power_w <= 0 || noise_power_w <= 0) {
        throw std::invalid_argument("ScenarioConfig: powers must be positive");
    }
    if (area_side_m <= 0) {
        throw std::invalid_argument("ScenarioConfig: area side must be positive");
    }
    if (num_subcarriers < 1) {
        throw std::invalid_argument("ScenarioConfig: need at least one subcarrier");
    }
    if (prelog <= 0 || prelog > 1) {
        throw std::invalid_argument("ScenarioConfig: prelog must be in (0, 1]");
    }
    if (pilot_length < 0 || pilot_length > num_users) {
        throw std::invalid_argument("ScenarioConfig: pilot length must be in [1, K] (0 = perfect CSI)");
    }
}

double path_loss_db(double distance_m) {
    if (distance_m < kMinDistanceM * (1.0 - 1e-12)) {
        throw std::domain_error("path_loss_db: distance below 1 m clamp");
    }
    return -30.5 - 36.7 * std::log10(distance_m / 1.0);
}

namespace {

// Point at a given arc length along the square's perimeter, walking
// (0,0) -> (D,0) -> (D,D) -> (0,D) -> (0,0).
Eigen::Vector2d perimeter_point(double arc, double side) {
    const double perimeter = 4.0 * side;
    arc = std::fmod(arc, perimeter);
    if (arc < side) return {arc, 0.0};
    if (arc < 2 * side) return {side, arc - side};
    if (arc < 3 * side) return {side - (arc - 2 * side), side};
    return {0.0, side - (arc - 3 * side)};
}

}  // namespace

Geometry build_geometry(const ScenarioConfig& config, std::uint64_t seed) {
    const int num_aps = config.num_aps;
    const int num_users = config.num_users;
    const double side = config.area_side_m;

    Geometry geo;
    geo.ap_positions.resize(num_aps, 2);
    const double spacing = 4.0 * side / num_aps;
    for (int l = 0; l < num_aps; ++l) {
        geo.ap_positions.row(l) = perimeter_point(l * spacing, side).transpose();
    }

    Rng rng(seed);
    geo.user_positions.resize(num_users, 2);
    for (int k = 0; k < num_users; ++k) {
        geo.user_positions(k, 0) = rng.uniform() * side;
        geo.user_positions(k, 1) = rng.uniform() * side;
    }

    geo.distances.resize(num_users, num_aps);
    for (int k = 0; k < num_users; ++k) {
        for (int l = 0; l < num_aps; ++l) {
            const double d =
                (geo.user_positions.row(k) - geo.ap_positions.row(l)).norm();
            geo.distances(k, l) = std::max(d, kMinDistanceM);
        }
    }
    return geo;
}

Mat large_scale_gains(const Geometry& geometry) {
    Mat beta(geometry.distances.rows(), geometry.distances.cols());
    for (Eigen::Index k = 0; k < beta.rows(); ++k) {
        for (Eigen::Index l = 0; l < beta.cols(); ++l) {
            beta(k, l) = db_to_linear(path_loss_db(geometry.distances(k, l)));
        }
    }
    return beta;
}

ChannelRealization sample_channel_from_gains(const Mat& beta, const ScenarioConfig& config,
                                             std::uint64_t seed) {
    const int num_aps = static_cast<int>(beta.cols());
    const int n = config.antennas_per_ap;
    const int num_users = static_cast<int>(beta.rows());

    ChannelRealization ch;
    ch.large_scale = beta;
    ch.effective_noise = Vec::Constant(num_aps, config.noise_power_w);
    ch.blocks.reserve(num_aps);

    Rng rng(seed);
    for (int l = 0; l < num_aps; ++l) {
        CMat block(n, num_users);
        for (int k = 0; k < num_users; ++k) {
            const double scale = std::sqrt(beta(k, l));
            for (int i = 0; i < n; ++i) {
                block(i, k) = scale * rng.cgaussian();
            }
        }
        ch.blocks.push_back(std::move(block));
    }
    return ch;
}

ChannelRealization sample_channel(const Geometry& geometry, const ScenarioConfig& config,
                                  std::uint64_t seed) {
    return sample_channel_from_gains(large_scale_gains(geometry), config, seed);
}

double estimation_error_variance(double beta_kl, double beta_shared_sum, double pilot_power_w,
                                 int pilot_length, double noise_power_w) {
    const double q_tau = pilot_power_w * pilot_length;
    return beta_kl - (q_tau * beta_kl * beta_kl) / (q_tau * beta_shared_sum + noise_power_w);
}

ChannelRealization estimate_channel(const ChannelRealization& channel,
                                    const ScenarioConfig& config, double pilot_power_w,
                                    std::uint64_t seed) {
    const int tau_p = config.pilot_length;
    const int num_users = config.num_users;
    if (tau_p < 1 || tau_p > num_users) {
        throw std::invalid_argument("estimate_channel: pilot length must be in [1, K]");
    }
    const int num_aps = static_cast<int>(channel.blocks.size());
    const int n = config.antennas_per_ap;
    const double sigma2 = config.noise_power_w;
    const double q_tau = pilot_power_w * tau_p;
    const double root_q_tau = std::sqrt(q_tau);

    ChannelRealization est;
    est.large_scale = channel.large_scale;
    est.effective_noise.resize(num_aps);
    est.blocks.reserve(num_aps);

    Rng rng(seed);
    for (int l = 0; l < num_aps; ++l) {
        // one contaminated pilot observation per (pilot, antenna)
        CMat pilot_obs = CMat::Zero(n, tau_p);
        for (int t = 0; t < tau_p; ++t) {
            for (int i = 0; i < n; ++i) {
                Cplx sum = std::sqrt(sigma2) * rng.cgaussian();
                for (int k = t; k < num_users; k += tau_p) {
                    sum += root_q_tau * channel.blocks[l](i, k);
                }
                pilot_obs(i, t) = sum;
            }
        }

        CMat block(n, num_users);
        double error_power = 0.0;
        for (int k = 0; k < num_users; ++k) {
            const int t = k % tau_p;
            double beta_shared = 0.0;
            for (int k2 = t; k2 < num_users; k2 += tau_p) {
                beta_shared += channel.large_scale(k2, l);
            }
            const double beta = channel.large_scale(k, l);
            const double gain = root_q_tau * beta / (q_tau * beta_shared + sigma2);
            block.col(k) = gain * pilot_obs.col(t);
            error_power +=
                estimation_error_variance(beta, beta_shared, pilot_power_w, tau_p, sigma2);
        }
        est.blocks.push_back(std::move(block));
        est.effective_noise(l) = sigma2 + config.tx_power_w * error_power;
    }
    return est;
}

}  // namespace seqmimo

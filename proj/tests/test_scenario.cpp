#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "seqmimo/rng.hpp"
#include "seqmimo/scenario.hpp"

using namespace seqmimo;

namespace {

ScenarioConfig small_config(int l, int n, int k) {
    ScenarioConfig cfg;
    cfg.num_aps = l;
    cfg.antennas_per_ap = n;
    cfg.num_users = k;
    return cfg;
}

}  // namespace

TEST_CASE("path loss closed form") {
    CHECK(path_loss_db(1.0) == doctest::Approx(-30.5));
    CHECK(path_loss_db(10.0) == doctest::Approx(-67.2));
    CHECK(path_loss_db(100.0) == doctest::Approx(-103.9));
    CHECK_THROWS_AS(path_loss_db(0.5), std::domain_error);
}

TEST_CASE("geometry: L=4 APs land on the corners") {
    ScenarioConfig cfg = small_config(4, 1, 2);
    cfg.area_side_m = 500.0;
    const Geometry geo = build_geometry(cfg, 1);
    REQUIRE(geo.ap_positions.rows() == 4);
    CHECK(geo.ap_positions.row(0).isApprox(Eigen::RowVector2d(0, 0), 1e-12));
    CHECK(geo.ap_positions.row(1).isApprox(Eigen::RowVector2d(500, 0), 1e-12));
    CHECK(geo.ap_positions.row(2).isApprox(Eigen::RowVector2d(500, 500), 1e-12));
    CHECK(geo.ap_positions.row(3).isApprox(Eigen::RowVector2d(0, 500), 1e-12));
}

TEST_CASE("geometry: positions stay inside the square, distances clamped") {
    ScenarioConfig cfg = small_config(8, 1, 50);
    const Geometry geo = build_geometry(cfg, 42);
    for (int k = 0; k < cfg.num_users; ++k) {
        CHECK(geo.user_positions(k, 0) >= 0);
        CHECK(geo.user_positions(k, 0) <= cfg.area_side_m);
        CHECK(geo.user_positions(k, 1) >= 0);
        CHECK(geo.user_positions(k, 1) <= cfg.area_side_m);
    }
    CHECK(geo.distances.minCoeff() >= 1.0);
}

TEST_CASE("geometry: user at AP position clamps to 1 m") {
    // shrink the area so the user is always within the clamp radius of an AP
    ScenarioConfig cfg = small_config(4, 1, 1);
    cfg.area_side_m = 0.5;
    const Geometry geo = build_geometry(cfg, 3);
    CHECK(geo.distances.minCoeff() == 1.0);
}

TEST_CASE("geometry determinism") {
    ScenarioConfig cfg = small_config(4, 2, 3);
    const Geometry a = build_geometry(cfg, 99);
    const Geometry b = build_geometry(cfg, 99);
    CHECK(a.user_positions == b.user_positions);
    CHECK(a.distances == b.distances);
    const Geometry c = build_geometry(cfg, 100);
    CHECK(a.user_positions != c.user_positions);
}

TEST_CASE("channel: zero gain gives an exactly zero channel") {
    ScenarioConfig cfg = small_config(2, 2, 2);
    const Mat beta = Mat::Zero(2, 2);
    const ChannelRealization ch = sample_channel_from_gains(beta, cfg, 5);
    for (const CMat& blk : ch.blocks) {
        CHECK(blk.isZero(0.0));
    }
    CHECK(ch.effective_noise(0) == cfg.noise_power_w);
}

TEST_CASE("channel: fixed seed is bit-identical") {
    ScenarioConfig cfg = small_config(3, 2, 4);
    const Geometry geo = build_geometry(cfg, 11);
    const ChannelRealization a = sample_channel(geo, cfg, 17);
    const ChannelRealization b = sample_channel(geo, cfg, 17);
    for (std::size_t l = 0; l < a.blocks.size(); ++l) {
        CHECK(a.blocks[l] == b.blocks[l]);
    }
}

TEST_CASE("channel: empirical per-entry power matches the gain") {
    ScenarioConfig cfg = small_config(2, 1, 1);
    Mat beta(1, 2);
    beta << 2.5e-9, 7.0e-12;
    const int draws = 100000;
    Vec acc = Vec::Zero(2);
    for (int t = 0; t < draws; ++t) {
        const ChannelRealization ch = sample_channel_from_gains(beta, cfg, 1000 + t);
        acc(0) += std::norm(ch.blocks[0](0, 0));
        acc(1) += std::norm(ch.blocks[1](0, 0));
    }
    acc /= draws;
    CHECK(acc(0) == doctest::Approx(beta(0, 0)).epsilon(0.02));
    CHECK(acc(1) == doctest::Approx(beta(0, 1)).epsilon(0.02));
}

TEST_CASE("estimation error variance: closed form and bounds") {
    // two users with equal beta sharing the single pilot
    const double beta = 3e-10;
    const double q = 0.01;
    const double sigma2 = dbm_to_watt(-85.0);
    const double c = estimation_error_variance(beta, 2 * beta, q, 1, sigma2);
    // scalar MMSE from first principles: estimate gain sqrt(q)beta/(q(2beta)+sigma2)
    // applied to y = sqrt(q)(h1+h2) + n leaves error variance
    // beta - q beta^2/(2 q beta + sigma2)
    const double expected = beta - q * beta * beta / (q * 2 * beta + sigma2);
    CHECK(c == doctest::Approx(expected).epsilon(1e-12));
    CHECK(c >= 0.0);
    CHECK(c <= beta);

    CHECK(estimation_error_variance(0.0, 0.0, q, 1, sigma2) == 0.0);
}

TEST_CASE("estimate_channel: orthogonal pilots and huge power recover H") {
    ScenarioConfig cfg = small_config(2, 2, 3);
    cfg.pilot_length = 3;  // tau_p = K, no contamination
    const Geometry geo = build_geometry(cfg, 21);
    const ChannelRealization ch = sample_channel(geo, cfg, 22);
    const ChannelRealization est = estimate_channel(ch, cfg, 1e9, 23);
    for (std::size_t l = 0; l < ch.blocks.size(); ++l) {
        CHECK((est.blocks[l] - ch.blocks[l]).norm() <= 1e-4 * ch.blocks[l].norm());
    }
    CHECK(est.effective_noise(0) == doctest::Approx(cfg.noise_power_w).epsilon(1e-6));
}

TEST_CASE("estimate_channel: zero channel estimates to zero") {
    ScenarioConfig cfg = small_config(1, 2, 2);
    cfg.pilot_length = 1;
    const Mat beta = Mat::Zero(2, 1);
    const ChannelRealization ch = sample_channel_from_gains(beta, cfg, 5);
    const ChannelRealization est = estimate_channel(ch, cfg, 0.01, 6);
    CHECK(est.blocks[0].isZero(0.0));
    CHECK(est.effective_noise(0) == doctest::Approx(cfg.noise_power_w));
}

TEST_CASE("estimate_channel: rejects pilot length above K") {
    ScenarioConfig cfg = small_config(1, 1, 2);
    cfg.pilot_length = 3;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    const Mat beta = Mat::Constant(2, 1, 1e-10);
    const ChannelRealization ch = sample_channel_from_gains(beta, cfg, 5);
    CHECK_THROWS_AS(estimate_channel(ch, cfg, 0.01, 6), std::invalid_argument);
}

TEST_CASE("estimate_channel: estimate and error are empirically uncorrelated") {
    ScenarioConfig cfg = small_config(1, 1, 2);
    cfg.pilot_length = 1;  // both users share one pilot
    Mat beta(2, 1);
    beta << 4e-10, 1.5e-10;

    const int draws = 100000;
    Cplx cross0 = 0, cross1 = 0;
    double p_est0 = 0, p_err0 = 0, p_est1 = 0, p_err1 = 0;
    for (int t = 0; t < draws; ++t) {
        const ChannelRealization ch = sample_channel_from_gains(beta, cfg, 50000 + t);
        const ChannelRealization est = estimate_channel(ch, cfg, cfg.tx_power_w, 90000 + t);
        const Cplx e0 = ch.blocks[0](0, 0) - est.blocks[0](0, 0);
        const Cplx e1 = ch.blocks[0](0, 1) - est.blocks[0](0, 1);
        cross0 += est.blocks[0](0, 0) * std::conj(e0);
        cross1 += est.blocks[0](0, 1) * std::conj(e1);
        p_est0 += std::norm(est.blocks[0](0, 0));
        p_err0 += std::norm(e0);
        p_est1 += std::norm(est.blocks[0](0, 1));
        p_err1 += std::norm(e1);
    }
    const double corr0 = std::abs(cross0) / std::sqrt(p_est0 * p_err0);
    const double corr1 = std::abs(cross1) / std::sqrt(p_est1 * p_err1);
    CHECK(corr0 < 0.02);
    CHECK(corr1 < 0.02);

    // error power follows the closed form
    const double c0 = estimation_error_variance(beta(0, 0), beta(0, 0) + beta(1, 0),
                                                cfg.tx_power_w, 1, cfg.noise_power_w);
    CHECK(p_err0 / draws == doctest::Approx(c0).epsilon(0.03));
}

TEST_CASE("config validation catches bad parameters") {
    ScenarioConfig cfg = small_config(2, 2, 2);
    CHECK_NOTHROW(cfg.validate());
    cfg.tx_power_w = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_config(0, 1, 1);
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

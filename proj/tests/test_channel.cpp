#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "srsim/channel.hpp"

using namespace srsim;

TEST_CASE("path loss reference values") {
    CHECK(path_loss(80.0, 3.5) == doctest::Approx(2.1836601342771384e-10).epsilon(1e-12));
    CHECK(path_loss(75.0, 2.2) == doctest::Approx(7.4966152238711048e-8).epsilon(1e-12));
    CHECK(path_loss(10.0, 2.8) == doctest::Approx(1.5848931924611142e-6).epsilon(1e-12));
    CHECK_THROWS_AS((void)path_loss(0.0, 2.0), channel_error);
}

TEST_CASE("dbm conversion") {
    CHECK(dbm_to_watts(10.0) == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(dbm_to_watts(-100.0) == doctest::Approx(1e-13).epsilon(1e-14));
    CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3).epsilon(1e-14));
}

TEST_CASE("reference geometry distances") {
    const auto geo = Geometry::reference();
    CHECK(geo.d_direct() == doctest::Approx(80.0).epsilon(1e-12));
    CHECK(geo.d_incident() == doctest::Approx(75.0).epsilon(1e-12));
    CHECK(geo.d_reflect() == doctest::Approx(10.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)Geometry::from_distances(100.0, 10.0, 10.0, 2, 2, 2),
                    channel_error);
}

TEST_CASE("blocked direct link zeroes its path loss") {
    auto geo = Geometry::reference();
    geo.direct_blocked = true;
    CHECK(geo.rho_direct() == 0.0);
    CHECK(geo.rho_incident() > 0.0);
}

TEST_CASE("los realization magnitudes") {
    const auto geo = Geometry::reference();
    const auto ch = los_realization(geo, 16);
    CHECK(std::abs(ch.h_d) ==
          doctest::Approx(std::sqrt(geo.rho_direct())).epsilon(1e-12));
    for (const auto& g : ch.g)
        CHECK(std::abs(g) == doctest::Approx(std::sqrt(geo.rho_incident())).epsilon(1e-12));
    for (const auto& h : ch.h)
        CHECK(std::abs(h) == doctest::Approx(std::sqrt(geo.rho_reflect())).epsilon(1e-12));
    const auto [f1, f2] = cascade(ch, 0);
    for (const auto& f : f2)
        CHECK(std::abs(f) ==
              doctest::Approx(std::sqrt(geo.rho_incident() * geo.rho_reflect()))
                  .epsilon(1e-12));
    CHECK(f1.empty());
}

TEST_CASE("channel strength ratio") {
    const auto geo = Geometry::reference();
    const double t = channel_strength_ratio(geo.rho_direct(), geo.rho_incident(),
                                            geo.rho_reflect(), 200);
    CHECK(t == doctest::Approx(0.21435317310730342).epsilon(1e-12));
    CHECK(channel_strength_ratio(0.0, 1.0, 1.0, 5) == 0.0);
    CHECK_THROWS_AS((void)channel_strength_ratio(1.0, 0.0, 1.0, 5), channel_error);
}

TEST_CASE("cascade split preserves the element set") {
    const auto geo = Geometry::reference();
    const auto ch = los_realization(geo, 9);
    const auto [a1, a2] = cascade(ch, 4);
    const auto [b1, b2] = cascade(ch, 0);
    REQUIRE(a1.size() == 4);
    REQUIRE(a2.size() == 5);
    std::vector<cplx> joined = a1;
    joined.insert(joined.end(), a2.begin(), a2.end());
    for (std::size_t i = 0; i < joined.size(); ++i)
        CHECK(std::abs(joined[i] - b2[i]) < 1e-18);
    CHECK_THROWS_AS((void)cascade(ch, 10), channel_error);
}

TEST_CASE("rician fading moments") {
    const auto geo = Geometry::reference();
    FadingConfig fading;  // kappa 10 / 8 / 12
    RngStream rng(42);
    const auto los = los_realization(geo, 1);
    const int n_draws = 100000;
    cplx mean{};
    double power = 0.0;
    for (int i = 0; i < n_draws; ++i) {
        const auto ch = sample_rician(geo, fading, 1, rng);
        mean += ch.g[0];
        power += std::norm(ch.g[0]);
    }
    mean /= static_cast<double>(n_draws);
    power /= static_cast<double>(n_draws);
    const double k = fading.kappa_incident;
    const cplx mean_expect = std::sqrt(k / (k + 1.0)) * los.g[0];
    // Second moment is preserved; the mean shrinks by sqrt(kappa/(kappa+1)).
    CHECK(std::abs(mean - mean_expect) < 4.0 * std::abs(los.g[0]) / std::sqrt(double(n_draws)));
    CHECK(power == doctest::Approx(std::norm(los.g[0])).epsilon(0.05));
}

TEST_CASE("infinite rician factor degenerates to los") {
    const auto geo = Geometry::reference();
    FadingConfig pure;
    pure.kappa_incident = pure.kappa_reflect = pure.kappa_direct =
        std::numeric_limits<double>::infinity();
    RngStream rng(7);
    const auto ch = sample_rician(geo, pure, 4, rng);
    const auto los = los_realization(geo, 4);
    CHECK(std::abs(ch.h_d - los.h_d) < 1e-18);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(ch.g[i] - los.g[i]) < 1e-18);
        CHECK(std::abs(ch.h[i] - los.h[i]) < 1e-18);
    }
}

TEST_CASE("ls estimate is unbiased and averages noise down") {
    const auto geo = Geometry::reference();
    const std::size_t n = 4;
    const auto truth = los_realization(geo, n);
    const auto [u1, f_true] = cascade(truth, 0);
    const LinkBudget budget = LinkBudget::from_dbm(10.0, -100.0);

    auto mse = [&](std::size_t reps, std::uint64_t seed, cplx* bias_out) {
        RngStream rng(seed);
        double err = 0.0;
        cplx bias{};
        const int runs = 4000;
        for (int i = 0; i < runs; ++i) {
            const auto est = ls_estimate(truth, reps * (n + 1), budget, rng);
            const auto [e1, f_est] = cascade(est, 0);
            for (std::size_t m = 0; m < n; ++m) {
                err += std::norm(f_est[m] - f_true[m]);
                bias += f_est[m] - f_true[m];
            }
        }
        if (bias_out) *bias_out = bias / static_cast<double>(runs * n);
        return err / static_cast<double>(runs * n);
    };

    cplx bias{};
    const double e1 = mse(1, 11, &bias);
    const double e4 = mse(4, 13, nullptr);
    CHECK(std::abs(bias) < 5.0 * std::sqrt(e1 / 16000.0));
    // Four repetitions average the estimation error variance down 4x.
    CHECK(e1 / e4 == doctest::Approx(4.0).epsilon(0.15));

    RngStream bad_rng(1);
    CHECK_THROWS_AS((void)ls_estimate(truth, 7, budget, bad_rng), channel_error);
}

TEST_CASE("ls estimate recovers the direct channel") {
    const auto geo = Geometry::reference();
    const std::size_t n = 4;
    const auto truth = los_realization(geo, n);
    const LinkBudget budget = LinkBudget::from_dbm(40.0, -100.0);  // near noiseless
    RngStream rng(3);
    const auto est = ls_estimate(truth, 8 * (n + 1), budget, rng);
    CHECK(std::abs(est.h_d - truth.h_d) < 5e-3 * std::abs(truth.h_d));
}

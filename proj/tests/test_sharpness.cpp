#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "hypermet/four_point.hpp"
#include "hypermet/sharpness.hpp"

using namespace hypermet;
using Catch::Matchers::WithinAbs;

namespace {

const ModelSpace e2 = ModelSpace::euclidean(2);
const double log2v = std::log(2.0);

errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return errc::invalid_argument;
}

std::vector<SweepRow> euclidean_rows(double theta_max = 0.5, int steps = 20) {
    return sweep(make_sharpness_config(e2, 1.0, geometric_theta_grid(theta_max, steps), 10.0));
}

}  // namespace

TEST_CASE("euclidean configuration in closed form") {
    const double theta = 0.3;
    const Configuration c = build_configuration(e2, 1.0, theta);
    CHECK_THAT(c.p[0], WithinAbs(-1.0, 1e-15));
    CHECK(c.p[1] == 0.0);
    CHECK_THAT(c.q[0], WithinAbs(1.0, 1e-15));
    CHECK_THAT(c.x_foot[0], WithinAbs(-std::cos(theta), 1e-15));
    CHECK(c.x_foot[1] == 0.0);
    CHECK_THAT(c.y_foot[0], WithinAbs(std::cos(theta), 1e-15));
    CHECK_THAT(c.x_minus[0], WithinAbs(-std::cos(theta), 1e-15));
    CHECK_THAT(c.x_minus[1], WithinAbs(-std::sin(theta), 1e-15));
    CHECK_THAT(c.x_plus[1], WithinAbs(std::sin(theta), 1e-15));
    CHECK_THAT(c.y_minus[0], WithinAbs(std::cos(theta), 1e-15));
    CHECK_THAT(c.y_minus[1], WithinAbs(-std::sin(theta), 1e-15));
    CHECK_THAT(c.y_plus[1], WithinAbs(std::sin(theta), 1e-15));

    CHECK(code_of([] { build_configuration(e2, 1.0, 0.0); }) == errc::parameter_out_of_range);
    CHECK(code_of([] { build_configuration(e2, 1.0, std::numbers::pi / 2); }) ==
          errc::parameter_out_of_range);
    CHECK(code_of([] { build_configuration(e2, 0.0, 0.3); }) == errc::non_positive_r);
    CHECK(code_of([] { canonical_frame(ModelSpace::sphere2(), 1.0); }) ==
          errc::invalid_argument);
}

TEST_CASE("transverse points share a geodesic") {
    for (const auto& space : {e2, ModelSpace::hyperbolic2(1.0), ModelSpace::hyperbolic2(2.5)}) {
        for (const double theta : {0.4, 0.05, 1e-3}) {
            const double r = 1.0;
            const Configuration c = build_configuration(space, r, theta);
            const double chord = 2.0 * r * std::sin(theta);
            CHECK_THAT(distance(space, c.x_minus, c.x_plus), WithinAbs(chord, 1e-12 * chord));
            CHECK_THAT(distance(space, c.y_minus, c.y_plus), WithinAbs(chord, 1e-12 * chord));
            CHECK_THAT(distance(space, c.x_minus, c.x_foot), WithinAbs(chord / 2, 1e-10));
        }
    }
}

TEST_CASE("configuration collapses continuously") {
    const Configuration c = build_configuration(e2, 1.0, 1e-4);
    CHECK(distance(e2, c.x_minus, c.p) < 2e-4);
    CHECK(distance(e2, c.y_plus, c.q) < 2e-4);
}

TEST_CASE("grid is geometric") {
    const auto grid = geometric_theta_grid(0.5, 21);
    REQUIRE(grid.size() == 21);
    CHECK(grid.front() == 0.5);
    CHECK_THAT(grid.back(), WithinAbs(0.5 * std::pow(2.0, -20), 1e-21));
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] == 0.5 * grid[i - 1]);
    CHECK(code_of([] { geometric_theta_grid(2.0, 5); }) == errc::parameter_out_of_range);
    CHECK(code_of([] { geometric_theta_grid(0.5, 0); }) == errc::invalid_argument);
}

TEST_CASE("sweep rows match the closed-form inversions") {
    const auto rows = euclidean_rows();
    REQUIRE(rows.size() == 20);
    for (const SweepRow& row : rows) {
        const double t = row.theta;
        CHECK_THAT(row.lambda_xx, WithinAbs(1.0 / std::tan(t / 2), 1e-9 / t));
        CHECK_THAT(row.lambda_yy, WithinAbs(1.0 / std::tan(t / 2), 1e-9 / t));
        CHECK_THAT(row.lambda_xy_mm, WithinAbs(1.0 / std::tan(t), 1e-9 / t));
        CHECK_THAT(row.lambda_xy_pp, WithinAbs(1.0 / std::tan(t), 1e-9 / t));
        CHECK_THAT(row.lambda_xy_mp, WithinAbs(1.0 / std::sin(t), 1e-9 / t));
        CHECK_THAT(row.lambda_xy_pm, WithinAbs(1.0 / std::sin(t), 1e-9 / t));

        const double diag = (1 + row.lambda_xx) * (1 + row.lambda_yy);
        const double cross = std::max((1 + row.lambda_xy_mm) * (1 + row.lambda_xy_pp),
                                      (1 + row.lambda_xy_mp) * (1 + row.lambda_xy_pm));
        CHECK_THAT(row.ratio, WithinAbs(4.0 * cross / diag, 1e-12 * row.ratio));
        CHECK_THAT(row.defect_delta, WithinAbs(0.5 * std::log(diag / cross), 1e-12));
        CHECK(row.ratio > 0.0);
    }
}

TEST_CASE("scaling the configuration rescales the inversions") {
    const double r = 2.0, theta = 0.3;
    const auto rows =
        sweep(make_sharpness_config(e2, r, {theta}, 10.0 * r));
    REQUIRE(rows.size() == 1);
    CHECK_THAT(rows[0].lambda_xx, WithinAbs(1.0 / (r * std::tan(theta / 2)), 1e-11));
    CHECK_THAT(rows[0].lambda_xy_mm, WithinAbs(1.0 / (r * std::tan(theta)), 1e-11));
    CHECK_THAT(rows[0].lambda_xy_mp, WithinAbs(1.0 / (r * std::sin(theta)), 1e-11));
}

TEST_CASE("defect approaches its limit from below at first order") {
    const auto rows = euclidean_rows(0.5, 21);
    std::vector<std::pair<double, double>> xy;
    for (const SweepRow& row : rows) {
        CHECK(row.defect_delta < log2v);
        CHECK(row.defect_delta <= log2v + 1e-9);
        xy.push_back({row.theta, log2v - row.defect_delta});
    }
    const PowerFit fit = fit_power_law(xy);
    CHECK(fit.points == rows.size());
    CHECK_THAT(fit.slope, WithinAbs(1.0, 0.2));
    // theta = 1e-3 sits between grid rows; a one-off row pins the criterion.
    const auto probe = sweep(make_sharpness_config(e2, 1.0, {1e-3}, 10.0));
    CHECK(std::abs(probe[0].defect_delta - log2v) <= 1e-2);
}

TEST_CASE("exponential threshold stays near one") {
    const auto rows = euclidean_rows(0.5, 12);
    for (const SweepRow& row : rows) CHECK(row.epsilon_max >= 1.0 - 1e-9);
    const auto probe = sweep(make_sharpness_config(e2, 1.0, {1e-3}, 10.0));
    CHECK(probe[0].epsilon_max >= 1.0 - 1e-9);
    CHECK(probe[0].epsilon_max <= 1.01);
}

TEST_CASE("small-angle witness is the transverse pairing") {
    const auto probe = sweep(make_sharpness_config(e2, 1.0, {1e-2}, 10.0));
    const auto out = gromov_delta(sweep_matrix(probe[0]));
    CHECK(out.witness.indices == std::array<std::size_t, 4>{0, 1, 2, 3});
    CHECK(out.witness.pairing == 0);  // (x-,x+ | y-,y+) dominates
    CHECK_THAT(out.delta_min, WithinAbs(probe[0].defect_delta, 1e-12));
}

TEST_CASE("residuals match their closed forms and orders") {
    const auto rows = euclidean_rows(0.5, 21);
    for (const SweepRow& row : rows) {
        const double t = row.theta;
        CHECK_THAT(row.rii_resid, WithinAbs(2.0 * (1.0 - std::cos(t / 2)), 1e-12));
        CHECK_THAT(row.sv1_resid, WithinAbs(2.0 * (1.0 - std::cos(t)), 1e-12));
        CHECK_THAT(row.sv2_resid, WithinAbs(std::abs(2.0 * std::sin(t / 2) - std::sin(t)), 1e-12));
        CHECK(row.fc_resid <= 1e-12 * 2.0 * std::sin(t));
    }
    const PowerFit rii = fit_residual_order(rows, [](const SweepRow& r) { return r.rii_resid; });
    const PowerFit sv1 = fit_residual_order(rows, [](const SweepRow& r) { return r.sv1_resid; });
    const PowerFit sv2 = fit_residual_order(rows, [](const SweepRow& r) { return r.sv2_resid; });
    CHECK_THAT(rii.slope, WithinAbs(2.0, 0.2));
    CHECK_THAT(sv1.slope, WithinAbs(2.0, 0.2));
    CHECK_THAT(sv2.slope, WithinAbs(3.0, 0.2));
    CHECK(rii.slope >= 0.8);
    CHECK(sv1.slope >= 1.8);
    CHECK(sv2.slope >= 1.8);

    const BoundConstants fitted = fit_bound_constants(rows);
    CHECK(fitted.rows_used >= 5);
    for (const SweepRow& row : rows) {
        if (row.theta < 1e-4 || row.theta > 1e-2) continue;
        const BoundReport rep = verify_bounds(row, fitted.sigma_hat, fitted.tau_hat);
        CHECK(rep.all_ok());
    }
    CHECK(verify_bounds(rows[5], 1.0, 2.0).all_ok());
    CHECK(code_of([&] { verify_bounds(rows[0], 0.0, 1.0); }) == errc::invalid_argument);
}

TEST_CASE("negative curvature reproduces the same limits") {
    for (const double kappa : {0.5, 2.0}) {
        const auto space = ModelSpace::hyperbolic2(kappa);
        const auto rows =
            sweep(make_sharpness_config(space, 1.0, geometric_theta_grid(0.5, 12), 10.0));
        for (const SweepRow& row : rows) {
            CHECK(row.defect_delta <= log2v + 1e-9);
            CHECK(row.epsilon_max >= 1.0 - 1e-9);
        }
        const auto probe = sweep(make_sharpness_config(space, 1.0, {1e-3}, 10.0));
        CHECK(std::abs(probe[0].defect_delta - log2v) <= 1e-2);
        const BoundConstants fitted = fit_bound_constants(rows, 1e-3, 5e-2);
        CHECK(fitted.sigma_hat < 1.0);
        CHECK(fitted.tau_hat < 4.0);
    }
}

TEST_CASE("maximizer claim with a distant witness") {
    for (const auto& space : {e2, ModelSpace::hyperbolic2(1.0)}) {
        const double r = 1.0, R = 10.0;
        const std::vector<double> grid = geometric_theta_grid(0.05, 6);
        const Point w = default_extra_boundary(space, r, R, grid.front());
        const auto cfg = make_sharpness_config(space, r, grid, R, {"w"}, {w});
        const auto rows = sweep(cfg);
        for (const SweepRow& row : rows) {
            CHECK(row.maximizer_ok);
            const MaximizerReport rep =
                verify_maximizer_claim(cfg, build_configuration(space, r, row.theta));
            CHECK(rep.ok);
            CHECK(rep.eta_ok);
            CHECK(rep.claim_margin > 0.0);
            CHECK(rep.mixed_p_margin > 0.0);
            CHECK(rep.mixed_q_margin > 0.0);
            CHECK(rep.same_pair_margin > 0.0);
        }
    }
}

TEST_CASE("claim is vacuous without extra boundary points") {
    const auto cfg = make_sharpness_config(e2, 1.0, {0.1}, 10.0);
    const MaximizerReport rep = verify_maximizer_claim(cfg, build_configuration(e2, 1.0, 0.1));
    CHECK(rep.ok);
    CHECK(rep.claim_margin == std::numeric_limits<double>::infinity());
}

TEST_CASE("extra boundary points must respect the clearances") {
    const Point close_to_q{1.5, 0.0};
    CHECK(code_of([&] {
              make_sharpness_config(e2, 1.0, {0.1}, 10.0, {"w"}, {close_to_q});
          }) == errc::parameter_out_of_range);
    const Point near_p{-3.0, 0.0};  // d(q, w) = 4 < R = 10
    CHECK(code_of([&] {
              make_sharpness_config(e2, 1.0, {0.1}, 10.0, {"w"}, {near_p});
          }) == errc::parameter_out_of_range);
    CHECK(code_of([&] { make_sharpness_config(e2, 1.0, {}, 10.0); }) ==
          errc::invalid_argument);
    CHECK(code_of([&] { make_sharpness_config(e2, 1.0, {0.1, 0.2}, 10.0); }) ==
          errc::invalid_argument);
}

TEST_CASE("power-law fit recovers synthetic exponents") {
    std::vector<std::pair<double, double>> xy;
    for (int k = 0; k < 10; ++k) {
        const double x = std::pow(2.0, -k);
        xy.push_back({x, 3.0 * x * x});
    }
    const PowerFit fit = fit_power_law(xy);
    CHECK_THAT(fit.slope, WithinAbs(2.0, 1e-12));
    CHECK_THAT(fit.intercept, WithinAbs(std::log(3.0), 1e-12));
    CHECK(fit.points == 10);
}

TEST_CASE("sweep output is deterministic across thread counts") {
    const auto cfg = make_sharpness_config(e2, 1.0, geometric_theta_grid(0.5, 10), 10.0);
    setenv("HYPERMET_THREADS", "1", 1);
    const auto rows1 = sweep(cfg);
    setenv("HYPERMET_THREADS", "4", 1);
    const auto rows4 = sweep(cfg);
    unsetenv("HYPERMET_THREADS");
    std::ostringstream a, b;
    write_sweep_csv(a, rows1);
    write_sweep_csv(b, rows4);
    CHECK(a.str() == b.str());
    CHECK(a.str().substr(0, a.str().find('\n')) == sweep_csv_header());
    REQUIRE(rows1.size() == rows4.size());
    for (std::size_t i = 0; i < rows1.size(); ++i) CHECK(rows1[i].theta == cfg.theta_grid[i]);
}

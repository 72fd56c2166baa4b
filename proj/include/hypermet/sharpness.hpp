#ifndef HYPERMET_SHARPNESS_HPP
#define HYPERMET_SHARPNESS_HPP

#include <cmath>
#include <numbers>
#include <cstddef>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "hypermet/boundary_metric.hpp"
#include "hypermet/errors.hpp"
#include "hypermet/four_point.hpp"
#include "hypermet/io.hpp"
#include "hypermet/metric_core.hpp"
#include "hypermet/model_spaces.hpp"
#include "hypermet/parallel.hpp"

namespace hypermet {

/// Canonical unit-speed geodesic of the sweep, with the two anchor boundary
/// points at parameters -r and +r.  Euclidean(2): the x-axis through the
/// origin.  Hyperbolic2: the geodesic through the sheet basepoint along the
/// first spacelike axis.
inline GeodesicFrame canonical_frame(const ModelSpace& space, double r) {
    if (!(r > 0.0)) throw Error(errc::non_positive_r, "r must be positive");
    switch (space.kind) {
        case SpaceKind::Euclidean:
            if (space.dim != 2)
                throw Error(errc::invalid_argument, "sweep requires euclidean:2");
            return GeodesicFrame(space, {0.0, 0.0}, {1.0, 0.0}, r);
        case SpaceKind::Hyperbolic2: {
            const double sk = std::sqrt(space.kappa);
            return GeodesicFrame(space, {1.0 / sk, 0.0, 0.0}, {0.0, 1.0, 0.0}, r);
        }
        case SpaceKind::Sphere2:
            throw Error(errc::invalid_argument, "sweep requires a Ptolemaic model space");
    }
    throw Error(errc::invalid_argument, "unknown space kind");
}

/// The eight points of one sweep step: anchors p, q at geodesic parameters
/// -r and r; feet at -r*cos(theta) and r*cos(theta); x and y pairs shot off
/// the feet along the parallel normal by +-r*sin(theta).
struct Configuration {
    Point p, q;
    Point x_foot, x_minus, x_plus;
    Point y_foot, y_minus, y_plus;
};

inline Configuration build_configuration(const ModelSpace& space, double r, double theta) {
    if (!(theta > 0.0) || !(theta < 0.5 * std::numbers::pi))
        throw Error(errc::parameter_out_of_range,
                    "theta must lie strictly between 0 and pi/2");
    const GeodesicFrame frame = canonical_frame(space, r);
    const double tf = r * std::cos(theta);
    const double s = r * std::sin(theta);
    Configuration c;
    c.p = frame.point_at(-r);
    c.q = frame.point_at(r);
    c.x_foot = frame.point_at(-tf);
    c.y_foot = frame.point_at(tf);
    const Vec fx = frame.normal_at(-tf);
    const Vec fy = frame.normal_at(tf);
    c.x_minus = exp_map(space, c.x_foot, fx, -s);
    c.x_plus = exp_map(space, c.x_foot, fx, s);
    c.y_minus = exp_map(space, c.y_foot, fy, -s);
    c.y_plus = exp_map(space, c.y_foot, fy, s);
    return c;
}

/// Geometric grid theta_k = theta_max * 2^-k, k = 0..steps-1 (decreasing).
inline std::vector<double> geometric_theta_grid(double theta_max = 0.5, int steps = 20) {
    if (!(theta_max > 0.0) || !(theta_max < 0.5 * std::numbers::pi))
        throw Error(errc::parameter_out_of_range, "theta-max must lie in (0, pi/2)");
    if (steps < 1) throw Error(errc::invalid_argument, "steps must be >= 1");
    std::vector<double> grid(static_cast<std::size_t>(steps));
    double t = theta_max;
    for (int k = 0; k < steps; ++k, t *= 0.5) grid[static_cast<std::size_t>(k)] = t;
    return grid;
}

struct SharpnessConfig {
    ModelSpace space;
    double r = 1.0;
    std::vector<double> theta_grid;
    double R = 10.0;
    std::vector<std::string> extra_labels;
    std::vector<Point> extra_boundary;
};

/// Worst offset of the x points from p and the y points from q; the claim
/// hypotheses need it below min{r/2, R/3}.
inline double offset_eta(const ModelSpace& space, const Configuration& c) {
    double eta = distance(space, c.x_minus, c.p);
    eta = std::max(eta, distance(space, c.x_plus, c.p));
    eta = std::max(eta, distance(space, c.y_minus, c.q));
    eta = std::max(eta, distance(space, c.y_plus, c.q));
    return eta;
}

/// Single default witness boundary point: on the sweep geodesic extended past
/// q, at distance max{R, 6*eta(theta_max)} from q.  Both config requirements
/// then hold: d(q,w) >= R and d(p,w) = 2r + d(q,w) >= 2r.
inline Point default_extra_boundary(const ModelSpace& space, double r, double R,
                                    double theta_max) {
    if (!(R > 0.0)) throw Error(errc::non_positive_r, "R must be positive");
    const double eta = offset_eta(space, build_configuration(space, r, theta_max));
    const GeodesicFrame frame = canonical_frame(space, r);
    return frame.point_at(r + std::max(R, 6.0 * eta));
}

inline SharpnessConfig make_sharpness_config(ModelSpace space, double r,
                                             std::vector<double> theta_grid, double R = 10.0,
                                             std::vector<std::string> extra_labels = {},
                                             std::vector<Point> extra_boundary = {}) {
    if (!(r > 0.0)) throw Error(errc::non_positive_r, "r must be positive");
    if (!(R > 0.0)) throw Error(errc::non_positive_r, "R must be positive");
    if (theta_grid.empty()) throw Error(errc::invalid_argument, "theta grid is empty");
    for (std::size_t i = 0; i < theta_grid.size(); ++i) {
        const double t = theta_grid[i];
        if (!(t > 0.0) || !(t < 0.5 * std::numbers::pi))
            throw Error(errc::parameter_out_of_range, "theta outside (0, pi/2)");
        if (i > 0 && !(t < theta_grid[i - 1]))
            throw Error(errc::invalid_argument, "theta grid must be strictly decreasing");
    }
    if (extra_labels.size() != extra_boundary.size())
        throw Error(errc::invalid_argument, "extra label count does not match point count");
    const GeodesicFrame frame = canonical_frame(space, r);
    const Point p = frame.point_at(-r);
    const Point q = frame.point_at(r);
    for (std::size_t i = 0; i < extra_boundary.size(); ++i) {
        check_point(space, extra_boundary[i]);
        const double dq = distance(space, q, extra_boundary[i]);
        const double dp = distance(space, p, extra_boundary[i]);
        const double slack = 1e-9;
        if (!(dq >= R * (1.0 - slack)))
            throw Error(errc::parameter_out_of_range,
                        "extra boundary point '" + extra_labels[i] + "' is closer than R to q");
        if (!(dp >= 2.0 * r * (1.0 - slack)))
            throw Error(errc::parameter_out_of_range, "extra boundary point '" +
                                                          extra_labels[i] +
                                                          "' is closer than 2r to p");
    }
    SharpnessConfig cfg;
    cfg.space = space;
    cfg.r = r;
    cfg.theta_grid = std::move(theta_grid);
    cfg.R = R;
    cfg.extra_labels = std::move(extra_labels);
    cfg.extra_boundary = std::move(extra_boundary);
    return cfg;
}

/// One grid step.  lambda_* are the boundary inversions of the six pairs
/// among {x-, x+, y-, y+}; the *_resid fields measure how far the measured
/// distances sit from their small-theta models:
///   rii_resid: max |d(x+-,q) - 2r|, |d(y+-,p) - 2r|
///   sv1_resid: max |d(x_a,y_b) - 2r*cos(theta)| over the four mixed pairs
///   sv2_resid: max |d(x+-,p) - r*sin(theta)|, |d(y+-,q) - r*sin(theta)|
///   fc_resid:  max |d(x-,x+) - 2r*sin(theta)|, |d(y-,y+) - 2r*sin(theta)|
struct SweepRow {
    double theta = 0.0;
    Configuration points;
    double lambda_xx = 0.0;     // (x-, x+)
    double lambda_yy = 0.0;     // (y-, y+)
    double lambda_xy_mm = 0.0;  // (x-, y-)
    double lambda_xy_pp = 0.0;  // (x+, y+)
    double lambda_xy_mp = 0.0;  // (x-, y+)
    double lambda_xy_pm = 0.0;  // (x+, y-)
    double ratio = 0.0;
    double defect_delta = 0.0;
    double epsilon_max = 0.0;
    double rii_resid = 0.0;
    double sv1_resid = 0.0;
    double sv2_resid = 0.0;
    double fc_resid = 0.0;
    double eta = 0.0;
    bool maximizer_ok = true;
};

/// 4x4 matrix of log(1 + lambda) over the row's points, labeled x-, x+, y-,
/// y+ in that order.
inline DistanceMatrix sweep_matrix(const SweepRow& row, double tol_rel = 1e-9) {
    const double rxx = std::log1p(row.lambda_xx);
    const double ryy = std::log1p(row.lambda_yy);
    const double rmm = std::log1p(row.lambda_xy_mm);
    const double rpp = std::log1p(row.lambda_xy_pp);
    const double rmp = std::log1p(row.lambda_xy_mp);
    const double rpm = std::log1p(row.lambda_xy_pm);
    return DistanceMatrix::build_flat({"x-", "x+", "y-", "y+"},
                                      {0.0, rxx, rmm, rmp,
                                       rxx, 0.0, rpm, rpp,
                                       rmm, rpm, 0.0, ryy,
                                       rmp, rpp, ryy, 0.0},
                                      tol_rel);
}

/// Margins of the boundary-maximizer claim for one row.  ok is the claim
/// itself: for every pair z1, z2 among {x+-, y+-} and every extra boundary
/// point w, min{d(z1,p)d(z2,p), d(z1,q)d(z2,q)} <= d(z1,w)d(z2,w), i.e. the
/// boundary inversion is maximized at p or q.  The remaining margins are the
/// supporting inequalities, reported as min over pairs and witnesses of
/// (bound - product), so positive means the inequality holds:
///   mixed_p_margin:  (5/6) d(x_a,w)d(y_b,w) - d(x_a,p)d(y_b,p)
///   mixed_q_margin:        d(x_a,w)d(y_b,w) - d(x_a,q)d(y_b,q)
///   same_pair_margin: (1/9) d(z,w)d(z',w) - d(z,p)d(z',p) for the x pair,
///                     and with q in place of p for the y pair; the y-pair
///                     products at p are of order (2r)^2 and only stay below
///                     (1/9) of the witness products when R is much larger
///                     than r, so the q form is the one that mirrors the x
///                     pair
struct MaximizerReport {
    bool ok = true;
    bool eta_ok = true;
    double eta = 0.0;
    double claim_margin = std::numeric_limits<double>::infinity();
    double mixed_p_margin = std::numeric_limits<double>::infinity();
    double mixed_q_margin = std::numeric_limits<double>::infinity();
    double same_pair_margin = std::numeric_limits<double>::infinity();
};

inline MaximizerReport verify_maximizer_claim(const SharpnessConfig& cfg,
                                              const Configuration& c) {
    MaximizerReport rep;
    rep.eta = offset_eta(cfg.space, c);
    rep.eta_ok = rep.eta < std::min(0.5 * cfg.r, cfg.R / 3.0);
    if (cfg.extra_boundary.empty()) return rep;

    const ModelSpace& sp = cfg.space;
    const Point* xs[2] = {&c.x_minus, &c.x_plus};
    const Point* ys[2] = {&c.y_minus, &c.y_plus};
    const Point* all[4] = {&c.x_minus, &c.x_plus, &c.y_minus, &c.y_plus};

    for (const Point& w : cfg.extra_boundary) {
        // the claim itself, over all six pairs
        for (int a = 0; a < 4; ++a) {
            for (int b = a + 1; b < 4; ++b) {
                const Point& z1 = *all[a];
                const Point& z2 = *all[b];
                const double at_p = distance(sp, z1, c.p) * distance(sp, z2, c.p);
                const double at_q = distance(sp, z1, c.q) * distance(sp, z2, c.q);
                const double at_w = distance(sp, z1, w) * distance(sp, z2, w);
                rep.claim_margin = std::min(rep.claim_margin, at_w - std::min(at_p, at_q));
            }
        }
        // supporting inequalities for the four mixed pairs
        for (const Point* x : xs) {
            for (const Point* y : ys) {
                const double at_p = distance(sp, *x, c.p) * distance(sp, *y, c.p);
                const double at_q = distance(sp, *x, c.q) * distance(sp, *y, c.q);
                const double at_w = distance(sp, *x, w) * distance(sp, *y, w);
                rep.mixed_p_margin = std::min(rep.mixed_p_margin, (5.0 / 6.0) * at_w - at_p);
                rep.mixed_q_margin = std::min(rep.mixed_q_margin, at_w - at_q);
            }
        }
        // supporting inequalities for the two same-letter pairs
        const double xp = distance(sp, c.x_minus, c.p) * distance(sp, c.x_plus, c.p);
        const double xw = distance(sp, c.x_minus, w) * distance(sp, c.x_plus, w);
        const double yq = distance(sp, c.y_minus, c.q) * distance(sp, c.y_plus, c.q);
        const double yw = distance(sp, c.y_minus, w) * distance(sp, c.y_plus, w);
        rep.same_pair_margin = std::min(rep.same_pair_margin, xw / 9.0 - xp);
        rep.same_pair_margin = std::min(rep.same_pair_margin, yw / 9.0 - yq);
    }
    rep.ok = rep.claim_margin >= 0.0;
    return rep;
}

namespace detail {

inline SweepRow build_row(const SharpnessConfig& cfg, double theta) {
    SweepRow row;
    row.theta = theta;
    row.points = build_configuration(cfg.space, cfg.r, theta);
    const Configuration& c = row.points;
    std::vector<Point> boundary;
    boundary.reserve(2 + cfg.extra_boundary.size());
    boundary.push_back(c.p);
    boundary.push_back(c.q);
    for (const Point& w : cfg.extra_boundary) boundary.push_back(w);

    row.lambda_xx = lambda_sup(cfg.space, c.x_minus, c.x_plus, boundary);
    row.lambda_yy = lambda_sup(cfg.space, c.y_minus, c.y_plus, boundary);
    row.lambda_xy_mm = lambda_sup(cfg.space, c.x_minus, c.y_minus, boundary);
    row.lambda_xy_pp = lambda_sup(cfg.space, c.x_plus, c.y_plus, boundary);
    row.lambda_xy_mp = lambda_sup(cfg.space, c.x_minus, c.y_plus, boundary);
    row.lambda_xy_pm = lambda_sup(cfg.space, c.x_plus, c.y_minus, boundary);

    // Products of (1 + lambda), never exponentials of accumulated logs: the
    // lambdas grow like 1/theta and the quotient below must survive theta at
    // the bottom of the grid.
    const double diag = (1.0 + row.lambda_xx) * (1.0 + row.lambda_yy);
    const double cross_same = (1.0 + row.lambda_xy_mm) * (1.0 + row.lambda_xy_pp);
    const double cross_mixed = (1.0 + row.lambda_xy_mp) * (1.0 + row.lambda_xy_pm);
    const double max_cross = std::max(cross_same, cross_mixed);
    row.ratio = 4.0 * max_cross / diag;
    row.defect_delta = 0.5 * std::log(diag / max_cross);

    const auto eps = find_max_strong_epsilon(sweep_matrix(row));
    row.epsilon_max = eps.unbounded ? std::numeric_limits<double>::infinity() : eps.epsilon;

    const ModelSpace& sp = cfg.space;
    const double two_r = 2.0 * cfg.r;
    const double chord = 2.0 * cfg.r * std::cos(theta);
    const double shot = cfg.r * std::sin(theta);
    row.rii_resid = std::max(
        std::max(std::abs(distance(sp, c.x_minus, c.q) - two_r),
                 std::abs(distance(sp, c.x_plus, c.q) - two_r)),
        std::max(std::abs(distance(sp, c.y_minus, c.p) - two_r),
                 std::abs(distance(sp, c.y_plus, c.p) - two_r)));
    row.sv1_resid = std::max(
        std::max(std::abs(distance(sp, c.x_minus, c.y_minus) - chord),
                 std::abs(distance(sp, c.x_plus, c.y_plus) - chord)),
        std::max(std::abs(distance(sp, c.x_minus, c.y_plus) - chord),
                 std::abs(distance(sp, c.x_plus, c.y_minus) - chord)));
    row.sv2_resid = std::max(
        std::max(std::abs(distance(sp, c.x_minus, c.p) - shot),
                 std::abs(distance(sp, c.x_plus, c.p) - shot)),
        std::max(std::abs(distance(sp, c.y_minus, c.q) - shot),
                 std::abs(distance(sp, c.y_plus, c.q) - shot)));
    row.fc_resid = std::max(std::abs(distance(sp, c.x_minus, c.x_plus) - 2.0 * shot),
                            std::abs(distance(sp, c.y_minus, c.y_plus) - 2.0 * shot));

    const MaximizerReport claim = verify_maximizer_claim(cfg, c);
    row.eta = claim.eta;
    row.maximizer_ok = claim.ok;
    return row;
}

}  // namespace detail

/// Runs the grid.  Rows are independent and may be computed concurrently;
/// output order is grid order regardless of the thread count.
inline std::vector<SweepRow> sweep(const SharpnessConfig& cfg) {
    std::vector<SweepRow> rows(cfg.theta_grid.size());
    struct Nothing {};
    auto work = [&](std::size_t i, Nothing&) { rows[i] = detail::build_row(cfg, cfg.theta_grid[i]); };
    striped_reduce(cfg.theta_grid.size(), scan_threads(), Nothing{}, work,
                   [](Nothing&, const Nothing&) {});
    return rows;
}

/// Pass/fail of the residual bounds at given constants: rii_resid against
/// sigma_hat*theta, sv1/sv2 against tau_hat*theta^2.
struct BoundReport {
    bool rii_ok = true;
    bool sv1_ok = true;
    bool sv2_ok = true;
    double rii_allow = 0.0;
    double sv_allow = 0.0;

    bool all_ok() const { return rii_ok && sv1_ok && sv2_ok; }
};

inline BoundReport verify_bounds(const SweepRow& row, double sigma_hat, double tau_hat) {
    if (!(sigma_hat > 0.0) || !(tau_hat > 0.0))
        throw Error(errc::invalid_argument, "bound constants must be positive");
    BoundReport rep;
    rep.rii_allow = sigma_hat * row.theta;
    rep.sv_allow = tau_hat * row.theta * row.theta;
    rep.rii_ok = row.rii_resid <= rep.rii_allow;
    rep.sv1_ok = row.sv1_resid <= rep.sv_allow;
    rep.sv2_ok = row.sv2_resid <= rep.sv_allow;
    return rep;
}

/// Smallest constants that bound the residuals on rows with theta inside
/// [theta_lo, theta_hi]: sigma_hat = max rii_resid/theta, tau_hat = max of
/// sv1 and sv2 residuals over theta^2.  The window should sit above the
/// rounding floor of the smallest grid rows.
struct BoundConstants {
    double sigma_hat = 0.0;
    double tau_hat = 0.0;
    std::size_t rows_used = 0;
};

inline BoundConstants fit_bound_constants(const std::vector<SweepRow>& rows,
                                          double theta_lo = 1e-4, double theta_hi = 1e-2) {
    BoundConstants out;
    for (const SweepRow& row : rows) {
        if (row.theta < theta_lo || row.theta > theta_hi) continue;
        ++out.rows_used;
        out.sigma_hat = std::max(out.sigma_hat, row.rii_resid / row.theta);
        const double t2 = row.theta * row.theta;
        out.tau_hat = std::max(out.tau_hat, std::max(row.sv1_resid, row.sv2_resid) / t2);
    }
    if (out.rows_used == 0)
        throw Error(errc::invalid_argument, "no rows inside the fit window");
    return out;
}

/// Least-squares slope and intercept of log(y) against log(x).  Pairs with
/// y <= 0 are skipped (residuals that vanish identically carry no order
/// information).
struct PowerFit {
    double slope = 0.0;
    double intercept = 0.0;  // log(y) at log(x) = 0
    std::size_t points = 0;
};

inline PowerFit fit_power_law(const std::vector<std::pair<double, double>>& xy) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (const auto& [x, y] : xy) {
        if (!(x > 0.0) || !(y > 0.0)) continue;
        const double lx = std::log(x), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) throw Error(errc::invalid_argument, "power-law fit needs at least two points");
    const double den = n * sxx - sx * sx;
    PowerFit fit;
    fit.points = n;
    fit.slope = (n * sxy - sx * sy) / den;
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

/// Log-log order of one residual column over a theta window.
template <class Get>
PowerFit fit_residual_order(const std::vector<SweepRow>& rows, Get get, double theta_lo = 1e-4,
                            double theta_hi = 1e-2) {
    std::vector<std::pair<double, double>> xy;
    for (const SweepRow& row : rows)
        if (row.theta >= theta_lo && row.theta <= theta_hi) xy.emplace_back(row.theta, get(row));
    return fit_power_law(xy);
}

inline const char* sweep_csv_header() {
    return "theta,lambda_xx,lambda_yy,lambda_xy_pp,lambda_xy_pm,ratio,defect_delta,"
           "epsilon_max,rii_resid,sv1_resid,sv2_resid,fc_resid,maximizer_ok";
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << sweep_csv_header() << '\n';
    for (const SweepRow& r : rows) {
        out << format_real(r.theta) << ',' << format_real(r.lambda_xx) << ','
            << format_real(r.lambda_yy) << ',' << format_real(r.lambda_xy_pp) << ','
            << format_real(r.lambda_xy_pm) << ',' << format_real(r.ratio) << ','
            << format_real(r.defect_delta) << ',' << format_real(r.epsilon_max) << ','
            << format_real(r.rii_resid) << ',' << format_real(r.sv1_resid) << ','
            << format_real(r.sv2_resid) << ',' << format_real(r.fc_resid) << ','
            << (r.maximizer_ok ? '1' : '0') << '\n';
    }
}

}  // namespace hypermet

#endif  // HYPERMET_SHARPNESS_HPP

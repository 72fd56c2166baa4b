#ifndef HYPERMET_BOUNDARY_METRIC_HPP
#define HYPERMET_BOUNDARY_METRIC_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "hypermet/errors.hpp"
#include "hypermet/metric_core.hpp"
#include "hypermet/model_spaces.hpp"
#include "hypermet/parallel.hpp"

namespace hypermet {

/// Finite stand-in for an open set with nonempty boundary: interior points
/// stay strictly away from every boundary point, so the inversion
/// denominators below never vanish.
struct DomainSample {
    ModelSpace space;
    std::vector<std::string> interior_labels;
    std::vector<Point> interior;
    std::vector<std::string> boundary_labels;
    std::vector<Point> boundary;

    static DomainSample build(ModelSpace space, std::vector<std::string> interior_labels,
                              std::vector<Point> interior,
                              std::vector<std::string> boundary_labels,
                              std::vector<Point> boundary) {
        if (boundary.empty()) throw Error(errc::empty_boundary, "boundary sample is empty");
        if (interior_labels.size() != interior.size() ||
            boundary_labels.size() != boundary.size())
            throw Error(errc::invalid_argument, "label count does not match point count");
        for (const auto& p : interior) check_point(space, p);
        for (const auto& p : boundary) check_point(space, p);
        for (std::size_t i = 0; i < interior.size(); ++i)
            for (std::size_t j = i + 1; j < interior.size(); ++j)
                if (!(distance(space, interior[i], interior[j]) > 0.0))
                    throw Error(errc::coincident_points,
                                "interior points '" + interior_labels[i] + "' and '" +
                                    interior_labels[j] + "' coincide");
        for (std::size_t i = 0; i < interior.size(); ++i)
            for (std::size_t j = 0; j < boundary.size(); ++j)
                if (!(distance(space, interior[i], boundary[j]) > 0.0))
                    throw Error(errc::point_on_boundary,
                                "interior point '" + interior_labels[i] +
                                    "' lies on boundary point '" + boundary_labels[j] + "'");
        for (std::size_t i = 0; i < interior_labels.size(); ++i)
            for (std::size_t j = i + 1; j < interior_labels.size(); ++j)
                if (interior_labels[i] == interior_labels[j])
                    throw Error(errc::duplicate_label,
                                "interior label '" + interior_labels[i] + "' repeats");
        DomainSample s;
        s.space = space;
        s.interior_labels = std::move(interior_labels);
        s.interior = std::move(interior);
        s.boundary_labels = std::move(boundary_labels);
        s.boundary = std::move(boundary);
        return s;
    }
};

/// Largest boundary inversion of a pair: max over sampled boundary points p
/// of d(x,y) / (d(x,p) d(y,p)).  Zero when x = y.  Each term is one division
/// of two pair products, accumulated by a running max, so the relative error
/// stays at a few ulps.
template <class Dist>
double lambda_sup(const Point& x, const Point& y, const std::vector<Point>& boundary,
                  Dist&& dist) {
    if (boundary.empty()) throw Error(errc::empty_boundary, "boundary sample is empty");
    const double dxy = dist(x, y);
    double best = 0.0;
    for (const Point& p : boundary) {
        const double dxp = dist(x, p);
        const double dyp = dist(y, p);
        if (!(dxp > 0.0) || !(dyp > 0.0))
            throw Error(errc::point_on_boundary, "inversion denominator vanishes");
        const double term = dxy / (dxp * dyp);
        if (term > best) best = term;
    }
    return best;
}

inline double lambda_sup(const ModelSpace& space, const Point& x, const Point& y,
                         const std::vector<Point>& boundary) {
    return lambda_sup(x, y, boundary,
                      [&space](const Point& a, const Point& b) { return distance(space, a, b); });
}

/// Boundary-inversion metric of a pair: log(1 + lambda_sup).
template <class Dist>
double rho(const Point& x, const Point& y, const std::vector<Point>& boundary, Dist&& dist) {
    return std::log1p(lambda_sup(x, y, boundary, std::forward<Dist>(dist)));
}

inline double rho(const ModelSpace& space, const Point& x, const Point& y,
                  const std::vector<Point>& boundary) {
    return rho(x, y, boundary,
               [&space](const Point& a, const Point& b) { return distance(space, a, b); });
}

/// rho over all interior pairs, plus the sample it was computed from so the
/// entries can be recomputed and audited.
struct RhoMatrix {
    DistanceMatrix matrix;
    DomainSample sample;
};

/// Builds the full rho matrix of a sample.  Rows are computed in parallel;
/// every entry is a fixed-order max over the boundary list, so the result
/// does not depend on the thread count.  Triangle validation is part of the
/// construction: a violation indicates a bug, not bad input.
inline RhoMatrix rho_matrix(const DomainSample& sample, double tol_rel = 1e-9) {
    const std::size_t n = sample.interior.size();
    std::vector<double> flat(n * n, 0.0);
    struct Nothing {};
    auto work = [&](std::size_t i, Nothing&) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double value =
                rho(sample.space, sample.interior[i], sample.interior[j], sample.boundary);
            flat[i * n + j] = value;
            flat[j * n + i] = value;
        }
    };
    striped_reduce(n, scan_threads(), Nothing{}, work, [](Nothing&, const Nothing&) {});
    return RhoMatrix{DistanceMatrix::build_flat(sample.interior_labels, std::move(flat), tol_rel),
                     sample};
}

/// One-point inversion with the +1 regularization:
/// log(1 + d(x,y) / ((1 + d(x,p)) (1 + d(y,p)))).
template <class Dist>
double sp_metric(const Point& x, const Point& y, const Point& p, Dist&& dist) {
    return std::log1p(dist(x, y) / ((1.0 + dist(x, p)) * (1.0 + dist(y, p))));
}

inline double sp_metric(const ModelSpace& space, const Point& x, const Point& y, const Point& p) {
    return sp_metric(x, y, p,
                     [&space](const Point& a, const Point& b) { return distance(space, a, b); });
}

/// Hyperbolicity parameter guaranteed by the earlier separation-based bound
/// for samples whose points stay at least R apart; printed next to log 2 for
/// comparison.
inline double zx_prior_bound(double R) {
    if (!(R > 0.0)) throw Error(errc::non_positive_r, "R = " + std::to_string(R));
    return 0.5 * std::log(std::max(2.0 + 20.0 / R, 392.0));
}

}  // namespace hypermet

#endif  // HYPERMET_BOUNDARY_METRIC_HPP

#ifndef HYPERMET_MODEL_SPACES_HPP
#define HYPERMET_MODEL_SPACES_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "hypermet/errors.hpp"

namespace hypermet {

using Point = std::vector<double>;
using Vec = std::vector<double>;

enum class SpaceKind { Euclidean, Hyperbolic2, Sphere2 };

/// Closed-form ambient geometry.
///
/// Coordinate conventions:
///   Euclidean(n)     - n Cartesian coordinates.
///   Hyperbolic2(kappa) - curvature is -kappa (kappa > 0); points are on the
///       upper sheet of the hyperboloid <x,x> = -1/kappa in Minkowski space
///       R^{2,1} with <a,b> = -a0*b0 + a1*b1 + a2*b2, three coordinates.
///   Sphere2          - unit 3-vectors on the round unit sphere.
struct ModelSpace {
    SpaceKind kind = SpaceKind::Euclidean;
    int dim = 2;         // Euclidean ambient dimension
    double kappa = 1.0;  // Hyperbolic2 only

    static ModelSpace euclidean(int n) {
        if (n < 1) throw Error(errc::invalid_argument, "Euclidean dimension must be >= 1");
        return {SpaceKind::Euclidean, n, 0.0};
    }
    static ModelSpace hyperbolic2(double kappa) {
        if (!(kappa > 0.0)) throw Error(errc::invalid_argument, "curvature parameter must be positive");
        return {SpaceKind::Hyperbolic2, 2, kappa};
    }
    static ModelSpace sphere2() { return {SpaceKind::Sphere2, 2, 0.0}; }

    /// Number of coordinates a point carries in this model.
    std::size_t coord_count() const {
        return kind == SpaceKind::Euclidean ? static_cast<std::size_t>(dim) : 3u;
    }

    std::string name() const {
        switch (kind) {
            case SpaceKind::Euclidean: return "euclidean:" + std::to_string(dim);
            case SpaceKind::Hyperbolic2: return "hyperbolic:" + std::to_string(kappa);
            case SpaceKind::Sphere2: return "sphere";
        }
        return "?";
    }
};

namespace detail {

inline double mink(const Point& a, const Point& b) {
    return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double dot3(const Point& a, const Point& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline Vec cross3(const Point& a, const Point& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// arccosh(1 + u) for u >= 0 without cancellation near u = 0.
inline double acosh1p(double u) { return std::asinh(std::sqrt(u * (2.0 + u))); }

inline Point lin_comb(double a, const Point& p, double b, const Vec& v) {
    Point out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = a * p[i] + b * v[i];
    return out;
}

inline constexpr double clamp_slack = 1e-8;
inline constexpr double constraint_tol = 1e-12;

}  // namespace detail

/// Signed residual of the model's point constraint (0 for Euclidean).
inline double constraint_residual(const ModelSpace& space, const Point& p) {
    switch (space.kind) {
        case SpaceKind::Euclidean: return 0.0;
        case SpaceKind::Hyperbolic2: return space.kappa * detail::mink(p, p) + 1.0;
        case SpaceKind::Sphere2: return detail::dot3(p, p) - 1.0;
    }
    return 0.0;
}

inline void check_point(const ModelSpace& space, const Point& p,
                        double tol = detail::constraint_tol) {
    if (p.size() != space.coord_count())
        throw Error(errc::dimension_mismatch, "point has " + std::to_string(p.size()) +
                                                  " coordinates, expected " +
                                                  std::to_string(space.coord_count()));
    for (double c : p)
        if (!std::isfinite(c)) throw Error(errc::constraint_violation, "non-finite coordinate");
    if (space.kind == SpaceKind::Euclidean) return;
    // Residual is relative to the squared coordinate magnitude, which is the
    // scale at which rounding accumulates on the quadric.
    double mag2 = 1.0;
    for (double c : p) mag2 += c * c;
    if (std::abs(constraint_residual(space, p)) > tol * mag2)
        throw Error(errc::constraint_violation,
                    "residual " + std::to_string(constraint_residual(space, p)));
    if (space.kind == SpaceKind::Hyperbolic2 && !(p[0] > 0.0))
        throw Error(errc::constraint_violation, "point is not on the upper sheet");
}

/// Geodesic distance between two points of the model.
inline double distance(const ModelSpace& space, const Point& a, const Point& b) {
    check_point(space, a);
    check_point(space, b);
    switch (space.kind) {
        case SpaceKind::Euclidean: {
            double s = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double d = a[i] - b[i];
                s += d * d;
            }
            return std::sqrt(s);
        }
        case SpaceKind::Hyperbolic2: {
            // -kappa*<a,b> >= 1 on the sheet; computing the excess u from the
            // coordinate difference avoids the cancellation that arccosh of
            // the pairing suffers for nearby points.
            const Point diff{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
            double u = 0.5 * space.kappa * detail::mink(diff, diff);
            if (u < 0.0) {
                if (u < -detail::clamp_slack) throw Error(errc::constraint_violation, "pairing below 1");
                u = 0.0;
            }
            return detail::acosh1p(u) / std::sqrt(space.kappa);
        }
        case SpaceKind::Sphere2: {
            double c = detail::dot3(a, b);
            if (c > 1.0) {
                if (c > 1.0 + detail::clamp_slack) throw Error(errc::constraint_violation, "cosine above 1");
                c = 1.0;
            }
            if (c < -1.0) {
                if (c < -1.0 - detail::clamp_slack) throw Error(errc::constraint_violation, "cosine below -1");
                c = -1.0;
            }
            return std::acos(c);
        }
    }
    return 0.0;
}

/// Checks that v is a unit tangent vector at p (orthogonal to the constraint
/// gradient, norm 1 in the model metric).
inline void check_tangent(const ModelSpace& space, const Point& p, const Vec& v,
                          double tol = 1e-10) {
    if (v.size() != space.coord_count())
        throw Error(errc::dimension_mismatch, "tangent has wrong coordinate count");
    double norm2 = 0.0, ortho = 0.0, mag2 = 1.0;
    switch (space.kind) {
        case SpaceKind::Euclidean:
            for (double c : v) norm2 += c * c;
            break;
        case SpaceKind::Hyperbolic2:
            norm2 = detail::mink(v, v);
            ortho = space.kappa * detail::mink(p, v);
            for (double c : p) mag2 += c * c;
            for (double c : v) mag2 += c * c;
            break;
        case SpaceKind::Sphere2:
            norm2 = detail::dot3(v, v);
            ortho = detail::dot3(p, v);
            for (double c : p) mag2 += c * c;
            for (double c : v) mag2 += c * c;
            break;
    }
    if (std::abs(ortho) > tol * mag2)
        throw Error(errc::constraint_violation, "direction is not tangent at the base point");
    if (std::abs(norm2 - 1.0) > tol * mag2)
        throw Error(errc::non_unit_direction, "|v|^2 = " + std::to_string(norm2));
}

/// Point at arclength s along the geodesic from p with unit direction v.
inline Point exp_map(const ModelSpace& space, const Point& p, const Vec& v, double s) {
    check_point(space, p);
    check_tangent(space, p, v);
    switch (space.kind) {
        case SpaceKind::Euclidean: return detail::lin_comb(1.0, p, s, v);
        case SpaceKind::Hyperbolic2: {
            const double sk = std::sqrt(space.kappa);
            return detail::lin_comb(std::cosh(sk * s), p, std::sinh(sk * s) / sk, v);
        }
        case SpaceKind::Sphere2: return detail::lin_comb(std::cos(s), p, std::sin(s), v);
    }
    return p;
}

/// Unit-speed geodesic through two points, parametrized on [-r, r] with
/// gamma(-r) = p and gamma(r) = q, r = distance(p,q)/2, together with the
/// parallel unit normal field along it (2-dimensional models).
class GeodesicFrame {
public:
    GeodesicFrame(ModelSpace space, Point center, Vec tangent, double half_length)
        : space_(space), center_(std::move(center)), tangent_(std::move(tangent)),
          half_length_(half_length) {}

    const ModelSpace& space() const { return space_; }
    double half_length() const { return half_length_; }
    const Point& center() const { return center_; }
    const Vec& unit_tangent() const { return tangent_; }

    /// gamma(t).  The geodesic is complete; t is not restricted to [-r, r].
    Point point_at(double t) const { return exp_map(space_, center_, tangent_, t); }

    /// gamma'(t), a unit tangent at gamma(t).
    Vec tangent_at(double t) const {
        switch (space_.kind) {
            case SpaceKind::Euclidean: return tangent_;
            case SpaceKind::Hyperbolic2: {
                const double sk = std::sqrt(space_.kappa);
                return detail::lin_comb(sk * std::sinh(sk * t), center_, std::cosh(sk * t),
                                        tangent_);
            }
            case SpaceKind::Sphere2:
                return detail::lin_comb(-std::sin(t), center_, std::cos(t), tangent_);
        }
        return tangent_;
    }

    /// Parallel unit normal F(t) with <F, gamma'> = 0, counterclockwise in the
    /// model's orientation.  Pointwise rotation of the tangent coincides with
    /// parallel transport in a 2-dimensional space.
    Vec normal_at(double t) const {
        if (std::abs(t) > half_length_ * (1.0 + 1e-12) + 1e-300)
            throw Error(errc::parameter_out_of_range,
                        std::to_string(t) + " outside [-r, r], r = " + std::to_string(half_length_));
        return normal_unchecked(t);
    }

    /// Normal field evaluated without the [-r, r] range guard (the geodesic
    /// and its normal are globally defined).
    Vec normal_unchecked(double t) const {
        const Point x = point_at(t);
        const Vec u = tangent_at(t);
        switch (space_.kind) {
            case SpaceKind::Euclidean: {
                if (space_.dim != 2)
                    throw Error(errc::dimension_mismatch,
                                "normal field requires a 2-dimensional model");
                return {-u[1], u[0]};
            }
            case SpaceKind::Hyperbolic2: {
                const double sk = std::sqrt(space_.kappa);
                const Point xh{sk * x[0], sk * x[1], sk * x[2]};  // <xh,xh> = -1
                Vec c = detail::cross3(xh, u);
                c[0] = -c[0];
                return c;
            }
            case SpaceKind::Sphere2: return detail::cross3(x, u);
        }
        return u;
    }

private:
    ModelSpace space_;
    Point center_;
    Vec tangent_;
    double half_length_;
};

/// Minimal unit-speed geodesic with gamma(-r) = p, gamma(r) = q.
inline GeodesicFrame geodesic_between(const ModelSpace& space, const Point& p, const Point& q) {
    const double d = distance(space, p, q);
    if (d == 0.0) throw Error(errc::coincident_points, "geodesic endpoints coincide");
    switch (space.kind) {
        case SpaceKind::Euclidean: {
            Point c(p.size());
            Vec u(p.size());
            for (std::size_t i = 0; i < p.size(); ++i) {
                c[i] = 0.5 * (p[i] + q[i]);
                u[i] = (q[i] - p[i]) / d;
            }
            return GeodesicFrame(space, std::move(c), std::move(u), 0.5 * d);
        }
        case SpaceKind::Hyperbolic2: {
            Point w{p[0] + q[0], p[1] + q[1], p[2] + q[2]};
            const double wn = std::sqrt(-space.kappa * detail::mink(w, w));
            Point c{w[0] / wn, w[1] / wn, w[2] / wn};  // midpoint on the sheet
            Vec u{q[0], q[1], q[2]};
            const double proj = space.kappa * detail::mink(q, c);
            for (std::size_t i = 0; i < 3; ++i) u[i] += proj * c[i];
            const double un = std::sqrt(detail::mink(u, u));
            for (double& x : u) x /= un;
            return GeodesicFrame(space, std::move(c), std::move(u), 0.5 * d);
        }
        case SpaceKind::Sphere2: {
            Point w{p[0] + q[0], p[1] + q[1], p[2] + q[2]};
            const double wn = std::sqrt(detail::dot3(w, w));
            if (wn < detail::clamp_slack)
                throw Error(errc::antipodal_points, "no unique geodesic between antipodal points");
            Point c{w[0] / wn, w[1] / wn, w[2] / wn};
            Vec u{q[0], q[1], q[2]};
            const double proj = detail::dot3(q, c);
            for (std::size_t i = 0; i < 3; ++i) u[i] -= proj * c[i];
            const double un = std::sqrt(detail::dot3(u, u));
            for (double& x : u) x /= un;
            return GeodesicFrame(space, std::move(c), std::move(u), 0.5 * d);
        }
    }
    throw Error(errc::invalid_argument, "unknown space kind");
}

/// Parallel transport of the frame's normal to parameter t (range-checked).
inline Vec parallel_normal(const GeodesicFrame& frame, double t) { return frame.normal_at(t); }

}  // namespace hypermet

#endif  // HYPERMET_MODEL_SPACES_HPP

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "hypermet/four_point.hpp"
#include "hypermet/model_spaces.hpp"
#include "support/samplers.hpp"

using namespace hypermet;
using Catch::Matchers::WithinAbs;

namespace {

constexpr double pi = std::numbers::pi;

errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return errc::invalid_argument;
}

Point hyperbolic_point(double kappa, double s, double phi) {
    const double sk = std::sqrt(kappa);
    return exp_map(ModelSpace::hyperbolic2(kappa), {1.0 / sk, 0.0, 0.0},
                   {0.0, std::cos(phi), std::sin(phi)}, s);
}

DistanceMatrix quad_matrix(const ModelSpace& space, const std::vector<Point>& pts) {
    std::vector<double> flat(16, 0.0);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            flat[i * 4 + j] = flat[j * 4 + i] = distance(space, pts[i], pts[j]);
    return DistanceMatrix::build_flat({"a", "b", "c", "d"}, std::move(flat));
}

}  // namespace

TEST_CASE("distances in the three models") {
    CHECK(distance(ModelSpace::euclidean(2), {0, 0}, {3, 4}) == 5.0);
    const auto h = ModelSpace::hyperbolic2(1.0);
    const Point a = hyperbolic_point(1.0, 0.7, 0.3);
    CHECK(distance(h, a, a) == 0.0);
    const auto s = ModelSpace::sphere2();
    CHECK_THAT(distance(s, {1, 0, 0}, {-1, 0, 0}), WithinAbs(pi, 1e-15));
}

TEST_CASE("point constraints are enforced") {
    const auto h = ModelSpace::hyperbolic2(1.0);
    CHECK(code_of([&] { check_point(h, {1, 0}); }) == errc::dimension_mismatch);
    CHECK(code_of([&] { check_point(h, {-1, 0, 0}); }) == errc::constraint_violation);
    CHECK(code_of([&] { check_point(h, {1.1, 0, 0}); }) == errc::constraint_violation);
    CHECK_NOTHROW(check_point(h, {std::sqrt(2.0), 1, 0}));
    const auto s = ModelSpace::sphere2();
    CHECK(code_of([&] { check_point(s, {1.1, 0, 0}); }) == errc::constraint_violation);
    CHECK_NOTHROW(check_point(s, {0, 0, 1}));
    CHECK(code_of([&] {
              distance(ModelSpace::euclidean(2), {0.0, std::numeric_limits<double>::infinity()},
                       {0, 0});
          }) == errc::constraint_violation);
}

TEST_CASE("curvature scales hyperbolic distances") {
    // Scaling curvature by k^2 scales all distances by 1/k.
    const Point a1 = hyperbolic_point(1.0, 0.9, 0.2), b1 = hyperbolic_point(1.0, 1.7, 2.1);
    const Point a4 = hyperbolic_point(4.0, 0.45, 0.2), b4 = hyperbolic_point(4.0, 0.85, 2.1);
    const double d1 = distance(ModelSpace::hyperbolic2(1.0), a1, b1);
    const double d4 = distance(ModelSpace::hyperbolic2(4.0), a4, b4);
    CHECK_THAT(2.0 * d4, WithinAbs(d1, 1e-12));
}

TEST_CASE("exponential map basics") {
    const auto e2 = ModelSpace::euclidean(2);
    const Point p{1.0, -2.0};
    const Vec v{0.6, 0.8};
    const Point q = exp_map(e2, p, v, 2.5);
    CHECK_THAT(q[0], WithinAbs(1.0 + 2.5 * 0.6, 1e-15));
    CHECK_THAT(q[1], WithinAbs(-2.0 + 2.5 * 0.8, 1e-15));
    CHECK(exp_map(e2, p, v, 0.0) == p);
    CHECK(code_of([&] { exp_map(e2, p, {1.0, 1.0}, 1.0); }) == errc::non_unit_direction);
    const auto h = ModelSpace::hyperbolic2(2.0);
    const Point base{1.0 / std::sqrt(2.0), 0.0, 0.0};
    CHECK(code_of([&] { exp_map(h, base, {0.0, 2.0, 0.0}, 1.0); }) == errc::non_unit_direction);
    // A non-tangent direction fails the orthogonality check first.
    CHECK(code_of([&] { exp_map(h, base, {0.5, 1.0, 0.0}, 1.0); }) == errc::constraint_violation);
}

TEST_CASE("exp and distance round-trip") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> angle(0.0, 2 * pi);
    std::uniform_real_distribution<double> arc(0.01, 2.0);

    for (int t = 0; t < 50; ++t) {
        const auto e2 = ModelSpace::euclidean(2);
        const Point p = sampling::random_point(rng, e2, 0.0, 2.0);
        const double phi = angle(rng), s = arc(rng);
        const Point q = exp_map(e2, p, {std::cos(phi), std::sin(phi)}, s);
        CHECK_THAT(distance(e2, p, q), WithinAbs(s, 1e-12));
    }
    for (const double kappa : {0.5, 1.0, 2.0}) {
        const auto h = ModelSpace::hyperbolic2(kappa);
        for (int t = 0; t < 50; ++t) {
            const Point p = sampling::random_point(rng, h, 0.0, 2.0);
            // Any unit tangent at p: complete a basis from a coordinate probe.
            const double phi = angle(rng), s = arc(rng);
            const GeodesicFrame f = geodesic_between(h, p, hyperbolic_point(kappa, 2.5, phi));
            const Vec v = f.unit_tangent();
            const Point start = f.center();
            const Point q = exp_map(h, start, v, s);
            check_point(h, q);
            CHECK_THAT(distance(h, start, q), WithinAbs(s, 1e-10));
        }
    }
    const auto sp = ModelSpace::sphere2();
    for (int t = 0; t < 50; ++t) {
        const Point p = sampling::random_point(rng, sp, 0.0, 1.0);
        const double s = 0.3 + 0.4 * arc(rng);
        const GeodesicFrame f = geodesic_between(sp, p, sampling::random_point(rng, sp, 0.0, 1.0));
        const Point q = exp_map(sp, f.center(), f.unit_tangent(), s);
        check_point(sp, q);
        CHECK_THAT(distance(sp, f.center(), q), WithinAbs(s, 1e-12));
    }
}

TEST_CASE("geodesic through two euclidean points") {
    const auto e2 = ModelSpace::euclidean(2);
    const GeodesicFrame f = geodesic_between(e2, {-1, 0}, {1, 0});
    CHECK(f.half_length() == 1.0);
    CHECK_THAT(f.point_at(-1.0)[0], WithinAbs(-1.0, 1e-15));
    CHECK_THAT(f.point_at(1.0)[0], WithinAbs(1.0, 1e-15));
    CHECK_THAT(f.point_at(0.25)[0], WithinAbs(0.25, 1e-15));
    CHECK(f.point_at(0.25)[1] == 0.0);
    const Vec n = parallel_normal(f, 0.5);
    CHECK(n[0] == 0.0);
    CHECK(n[1] == 1.0);
}

TEST_CASE("geodesic endpoints reproduce the inputs") {
    std::mt19937_64 rng(9);
    for (const auto& space : {ModelSpace::euclidean(2), ModelSpace::hyperbolic2(1.3)}) {
        for (int t = 0; t < 30; ++t) {
            const Point p = sampling::random_point(rng, space, 0.1, 2.0);
            const Point q = sampling::random_point(rng, space, 0.1, 2.0);
            if (distance(space, p, q) < 1e-6) continue;
            const GeodesicFrame f = geodesic_between(space, p, q);
            const double r = f.half_length();
            CHECK_THAT(distance(space, f.point_at(-r), p), WithinAbs(0.0, 1e-12));
            CHECK_THAT(distance(space, f.point_at(r), q), WithinAbs(0.0, 1e-12));
            CHECK_THAT(distance(space, f.point_at(0.0), p), WithinAbs(r, 1e-10));
            CHECK_THAT(distance(space, f.point_at(0.0), q), WithinAbs(r, 1e-10));
        }
    }
}

TEST_CASE("geodesics are unit speed") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> par(-1.0, 1.0);
    for (const auto& space : {ModelSpace::euclidean(2), ModelSpace::hyperbolic2(0.7),
                              ModelSpace::sphere2()}) {
        for (int t = 0; t < 25; ++t) {
            const Point p = sampling::random_point(rng, space, 0.2, 1.2);
            const Point q = sampling::random_point(rng, space, 0.2, 1.2);
            const double d = distance(space, p, q);
            if (d < 1e-6 || (space.kind == SpaceKind::Sphere2 && d > 2.0)) continue;
            const GeodesicFrame f = geodesic_between(space, p, q);
            const double s = par(rng) * f.half_length(), u = par(rng) * f.half_length();
            CHECK_THAT(distance(space, f.point_at(s), f.point_at(u)),
                       WithinAbs(std::abs(s - u), 1e-10));
        }
    }
}

TEST_CASE("degenerate chords are rejected") {
    const auto e2 = ModelSpace::euclidean(2);
    CHECK(code_of([&] { geodesic_between(e2, {1, 2}, {1, 2}); }) == errc::coincident_points);
    const auto sp = ModelSpace::sphere2();
    CHECK(code_of([&] { geodesic_between(sp, {0, 0, 1}, {0, 0, -1}); }) ==
          errc::antipodal_points);
}

TEST_CASE("normal field is parallel, unit, and orthogonal") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> par(-1.0, 1.0);
    for (const auto& space : {ModelSpace::euclidean(2), ModelSpace::hyperbolic2(1.0),
                              ModelSpace::hyperbolic2(3.0), ModelSpace::sphere2()}) {
        for (int t = 0; t < 20; ++t) {
            const Point p = sampling::random_point(rng, space, 0.2, 1.2);
            const Point q = sampling::random_point(rng, space, 0.2, 1.2);
            const double d = distance(space, p, q);
            if (d < 1e-6 || (space.kind == SpaceKind::Sphere2 && d > 2.0)) continue;
            const GeodesicFrame f = geodesic_between(space, p, q);
            const double s = par(rng) * f.half_length();
            const Vec n = parallel_normal(f, s);
            check_tangent(space, f.point_at(s), n);
            const Vec g = f.tangent_at(s);
            double inner = 0.0, norm2 = 0.0;
            if (space.kind == SpaceKind::Hyperbolic2) {
                inner = detail::mink(n, g);
                norm2 = detail::mink(n, n);
            } else {
                for (std::size_t i = 0; i < n.size(); ++i) {
                    inner += n[i] * g[i];
                    norm2 += n[i] * n[i];
                }
            }
            CHECK_THAT(inner, WithinAbs(0.0, 1e-10));
            CHECK_THAT(norm2, WithinAbs(1.0, 1e-10));
        }
    }
    const GeodesicFrame f = geodesic_between(ModelSpace::euclidean(2), {-1, 0}, {1, 0});
    CHECK(code_of([&] { parallel_normal(f, 1.5); }) == errc::parameter_out_of_range);
}

TEST_CASE("random quadruples satisfy the product condition") {
    std::mt19937_64 rng(23);
    for (const auto& space : {ModelSpace::euclidean(2), ModelSpace::euclidean(3),
                              ModelSpace::hyperbolic2(1.0)}) {
        for (int t = 0; t < 1000; ++t) {
            std::vector<Point> pts;
            for (int i = 0; i < 4; ++i) pts.push_back(sampling::random_point(rng, space, 0.0, 2.0));
            const auto m = quad_matrix(space, pts);
            const auto out = ptolemaic_defect(m);
            const double scale = m.max_entry() * m.max_entry();
            CHECK(out.defect <= 1e-9 * scale);
        }
    }
}

TEST_CASE("great-circle quadruple breaks the product condition") {
    const auto sp = ModelSpace::sphere2();
    const std::vector<Point> pts{{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}};
    const auto out = ptolemaic_defect(quad_matrix(sp, pts));
    CHECK_THAT(out.defect, WithinAbs(pi * pi / 2.0, 1e-9));
}

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fsteiner/geom.hpp"
#include "fsteiner/ifs.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace fsteiner;
using fsteiner::testing::Gen;

namespace {

bool near(Point a, Point b, double tol) { return distance(a, b) <= tol; }

}  // namespace

TEST_SUITE("geom") {

TEST_CASE("signed distance and foot") {
    const OrientedLine x_axis({0.0, 1.0}, 0.0);
    CHECK(signed_distance({0.0, 1.0}, x_axis) == 1.0);
    CHECK(signed_distance({7.5, 0.0}, x_axis) == 0.0);
    CHECK(signed_distance({2.0, -3.0}, x_axis) == -3.0);

    CHECK(perpendicular_foot({3.0, 4.0}, x_axis) == Point{3.0, 0.0});
    CHECK(perpendicular_foot({-2.0, 0.0}, x_axis) == Point{-2.0, 0.0});

    const OrientedLine y_axis({1.0, 0.0}, 0.0);
    const Point h = perpendicular_foot({1.0, 0.04 * 0.04}, y_axis);
    CHECK(std::abs(h.x - 0.0) <= 1e-15);
    CHECK(h.y == doctest::Approx(0.0016).epsilon(1e-15));
}

TEST_CASE("signed distances vanish at the first branching point") {
    const IfsParams p(0.04);
    const Point t0 = IfsParams::t0();
    // X is the x axis; f_j(X) are the lines through T0 rotated by ∓60 degrees.
    const std::array<OrientedLine, 3> lines = {
        OrientedLine({0.0, 1.0}, 0.0),
        OrientedLine::through(t0, perp(p.theta(MapIndex::one))),
        OrientedLine::through(t0, perp(p.theta(MapIndex::two))),
    };
    double sum = 0.0;
    for (const auto& l : lines) {
        CHECK(std::abs(signed_distance(t0, l)) <= 1e-15);
        sum += signed_distance(t0, l);
    }
    CHECK(std::abs(sum) <= 1e-15);
}

TEST_CASE("oriented line rejects a non-unit normal") {
    CHECK_THROWS_AS(OrientedLine({1.0, 1.0}, 0.0), std::invalid_argument);
    CHECK_NOTHROW(OrientedLine({1.0, 1e-13}, 0.0));
    CHECK_THROWS_AS(OrientedLine({NAN, 0.0}, 0.0), std::invalid_argument);
}

TEST_CASE("torricelli point examples") {
    const Point c = torricelli_point({0.0, 0.0}, {1.0, 0.0}, {0.5, kSqrt3 / 2.0});
    CHECK(near(c, {0.5, kSqrt3 / 6.0}, 1e-12));

    // 130 degrees at v.
    const Point v{0.2, -0.3};
    const Point a = v + unit_vector(0.4);
    const Point b = v + 2.0 * unit_vector(0.4 + 130.0 * kPi / 180.0);
    CHECK(torricelli_point(a, v, b) == v);
    CHECK(torricelli_point(v, b, a) == v);

    const IfsParams p(0.04);
    const Point b2 = apply_map(p, MapIndex::two, {1.0, 0.0});
    const Point c2 = apply_map(p, MapIndex::one, {1.0, 0.0});
    const Point t = torricelli_point({0.0, 0.0}, b2, c2);
    CHECK(near(t, {1.0, 0.0}, 1e-12));
    CHECK(near(oracle::weiszfeld({0.0, 0.0}, b2, c2), {1.0, 0.0}, 1e-10));
}

TEST_CASE("torricelli point on collinear and coincident input") {
    CHECK(torricelli_point({0.0, 0.0}, {2.0, 0.0}, {1.0, 0.0}) == Point{1.0, 0.0});
    CHECK(torricelli_point({3.0, 3.0}, {1.0, 1.0}, {2.0, 2.0}) == Point{2.0, 2.0});
    CHECK_THROWS_AS(torricelli_point({0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("torricelli point agrees with the Weiszfeld oracle") {
    Gen g(11);
    for (int i = 0; i < 300; ++i) {
        const auto t = g.triangle(0.02);
        const Point s = torricelli_point(t[0], t[1], t[2]);
        const Point w = oracle::weiszfeld(t[0], t[1], t[2]);
        CHECK(oracle::sum_distances(s, t) == doctest::Approx(oracle::sum_distances(w, t)).epsilon(1e-10));
    }
}

TEST_CASE("torricelli point is locally minimal with 120 degree arms") {
    Gen g(12);
    for (int i = 0; i < 200; ++i) {
        const auto t = g.triangle(0.02);
        const Point s = torricelli_point(t[0], t[1], t[2]);
        const double f = oracle::sum_distances(s, t);
        for (const Point& v : t) CHECK(f <= oracle::sum_distances(v, t) + 1e-12);
        for (int k = 0; k < 100; ++k) {
            const Point q = s + g.uniform(1e-6, 1e-2) * g.unit();
            CHECK(f <= oracle::sum_distances(q, t) + 1e-12);
        }
        const bool interior = std::none_of(t.begin(), t.end(), [&](Point v) { return v == s; });
        if (interior) {
            for (int a = 0; a < 3; ++a) {
                CHECK(angle_between(s, t[a], t[(a + 1) % 3]) >= kTwoThirdsPi - 1e-9);
            }
        }
    }
}

TEST_CASE("equilateral third vertex") {
    CHECK(near(equilateral_third({0.0, 0.0}, {1.0, 0.0}, Side::left), {0.5, kSqrt3 / 2.0}, 1e-15));
    CHECK(near(equilateral_third({0.0, 0.0}, {1.0, 0.0}, Side::right), {0.5, -kSqrt3 / 2.0}, 1e-15));
    CHECK_THROWS_AS(equilateral_third({1.0, 1.0}, {1.0, 1.0}, Side::left), std::invalid_argument);

    const double phi = kPi / 7.0;
    Gen g(13);
    for (int i = 0; i < 50; ++i) {
        const Point a = g.point(), b = g.point();
        for (Side side : {Side::left, Side::right}) {
            const Point e = equilateral_third(a, b, side);
            const Point er = equilateral_third(rotate(a, phi), rotate(b, phi), side);
            CHECK(near(er, rotate(e, phi), 1e-12));
            CHECK(distance(e, a) == doctest::Approx(distance(a, b)).epsilon(1e-12));
            CHECK(distance(e, b) == doctest::Approx(distance(a, b)).epsilon(1e-12));
            const double turn = cross(b - a, e - a);
            CHECK((side == Side::left ? turn > 0.0 : turn < 0.0));
        }
    }
}

TEST_CASE("convex hull examples") {
    const std::vector<Point> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
    const auto h = convex_hull(square);
    REQUIRE(h.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(std::find(h.begin(), h.end(), square[static_cast<std::size_t>(i)]) != h.end());
    double area = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) area += cross(h[i], h[(i + 1) % h.size()]);
    CHECK(area == doctest::Approx(2.0));

    const std::vector<Point> same = {{2, 3}, {2, 3}, {2, 3}};
    CHECK(convex_hull(same) == std::vector<Point>{{2, 3}});

    const std::vector<Point> line = {{0, 0}, {1, 1}, {2, 2}, {3, 3}};
    CHECK(convex_hull(line).size() == 2);
}

TEST_CASE("hull of A_4 lies in the ball around P") {
    const IfsParams p(0.04);
    const auto leaves = generate_leaves(p, 4);
    for (const Point& v : convex_hull(leaves.points)) CHECK(distance(v, p.center_p()) <= p.lambda());
}

TEST_CASE("convex hull contains its inputs and uses only inputs") {
    Gen g(14);
    for (int i = 0; i < 200; ++i) {
        const int n = g.integer(1, 40);
        std::vector<Point> pts;
        for (int k = 0; k < n; ++k) pts.push_back(g.point());
        // Repeated and collinear points stress the degenerate paths.
        if (n > 2) {
            pts.push_back(pts[0]);
            pts.push_back(0.5 * (pts[1] + pts[2]));
        }
        const auto h = convex_hull(pts);
        for (const Point& v : h) CHECK(std::find(pts.begin(), pts.end(), v) != pts.end());
        for (const Point& q : pts) CHECK(hull_contains(h, q));
        if (h.size() >= 3) {
            for (std::size_t a = 0; a < h.size(); ++a) {
                const Point u = h[a], v = h[(a + 1) % h.size()], w = h[(a + 2) % h.size()];
                CHECK(cross(v - u, w - v) > 0.0);
            }
        }
    }
}

TEST_CASE("angle between") {
    CHECK(angle_between({0, 0}, {1, 0}, {0, 1}) == doctest::Approx(kPi / 2.0).epsilon(1e-15));
    CHECK(angle_between({0, 0}, {1, 2}, {1, 2}) == 0.0);
    CHECK(angle_between({0, 0}, {1, 0}, {-3, 0}) == doctest::Approx(kPi).epsilon(1e-15));
    CHECK_THROWS_AS(angle_between({0, 0}, {0, 0}, {1, 0}), std::invalid_argument);
    for (double lambda : {0.001, 0.04, 0.1, 0.3, 0.49}) {
        const IfsParams p(lambda);
        const Point fp = apply_map(p, MapIndex::one, p.center_p());
        CHECK(std::abs(angle_between(IfsParams::t0(), {0.0, 0.0}, fp) - kTwoThirdsPi) <= 1e-12);
    }
}

TEST_CASE("tripod sum is constant in the evaluation point") {
    Gen g(15);
    for (int i = 0; i < 1000; ++i) {
        // Three unit vectors summing to zero are 120 degrees apart.
        const double base = g.uniform(0.0, 2.0 * kPi);
        const std::array<OrientedLine, 3> lines = {
            OrientedLine(unit_vector(base), g.uniform(-2, 2)),
            OrientedLine(unit_vector(base + kTwoThirdsPi), g.uniform(-2, 2)),
            OrientedLine(unit_vector(base - kTwoThirdsPi), g.uniform(-2, 2)),
        };
        const Point t1 = g.point(5.0), t2 = g.point(5.0);
        double s1 = 0.0, s2 = 0.0;
        for (const auto& l : lines) {
            s1 += signed_distance(t1, l);
            s2 += signed_distance(t2, l);
        }
        CHECK(std::abs(s1 - s2) <= 1e-10);
    }
}

TEST_CASE("non-finite input is rejected") {
    CHECK_THROWS_AS(require_finite({INFINITY, 0.0}, "p"), std::invalid_argument);
    CHECK_NOTHROW(require_finite({1.0, 2.0}, "p"));
}

}  // TEST_SUITE

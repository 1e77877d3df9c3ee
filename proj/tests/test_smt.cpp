#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsteiner/ifs.hpp"
#include "fsteiner/smt.hpp"
#include "fsteiner/tree.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace fsteiner;
using fsteiner::testing::Gen;
using fsteiner::testing::Motion;

namespace {

TerminalSpec points_spec(std::vector<Point> pts) { return TerminalSpec{std::move(pts), std::nullopt}; }

TerminalSpec root_and_leaves(double lambda, int depth) {
    TerminalSpec spec;
    spec.points.push_back({0.0, 0.0});
    for (const Point& p : generate_leaves(IfsParams(lambda), depth).points) spec.points.push_back(p);
    return spec;
}

long double_factorial(int k) {
    long r = 1;
    for (int i = k; i > 1; i -= 2) r *= i;
    return r;
}

/// Canonical form of a topology: for each edge, the pair of terminal sets it separates.
std::set<std::vector<int>> splits(const SteinerTopology& t) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(t.node_count()));
    for (auto [a, b] : t.edges) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    std::set<std::vector<int>> out;
    for (auto [a, b] : t.edges) {
        std::vector<int> side, stack = {b};
        std::vector<char> seen(adj.size(), 0);
        seen[static_cast<std::size_t>(a)] = seen[static_cast<std::size_t>(b)] = 1;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            if (u < t.terminals) side.push_back(u);
            for (int v : adj[static_cast<std::size_t>(u)]) {
                if (!seen[static_cast<std::size_t>(v)]) {
                    seen[static_cast<std::size_t>(v)] = 1;
                    stack.push_back(v);
                }
            }
        }
        std::sort(side.begin(), side.end());
        // Normalize to the side without terminal 0.
        if (!side.empty() && side.front() == 0) {
            std::vector<int> other;
            for (int i = 0; i < t.terminals; ++i) {
                if (!std::binary_search(side.begin(), side.end(), i)) other.push_back(i);
            }
            side = other;
        }
        out.insert(side);
    }
    return out;
}

SteinerTree star_tree(std::vector<Point> terminals, Point centre) {
    SteinerTree t;
    t.topology.terminals = 3;
    t.topology.steiner = 1;
    t.topology.edges = {{0, 3}, {1, 3}, {2, 3}};
    t.terminals = std::move(terminals);
    t.steiner_coords = {centre};
    t.length = t.edge_length_sum();
    return t;
}

}  // namespace

TEST_SUITE("smt") {

TEST_CASE("terminal spec validation") {
    CHECK_THROWS_AS(points_spec({{0, 0}}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(points_spec({{0, 0}, {0, 0}, {1, 0}}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(points_spec({{0, 0}, {NAN, 0}}).validate(), std::invalid_argument);
    CHECK_NOTHROW(points_spec({{0, 0}, {1, 0}}).validate());

    const OrientedLine y_axis({1.0, 0.0}, 0.0);
    CHECK_NOTHROW(TerminalSpec{{{3, 4}}, y_axis}.validate());
    CHECK_THROWS_AS((TerminalSpec{{}, y_axis}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((TerminalSpec{{{0, 4}, {1, 1}}, y_axis}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((TerminalSpec{{{-1, 4}, {1, 1}}, y_axis}.validate()), std::invalid_argument);
    CHECK((TerminalSpec{{{1, 4}, {1, 1}}, y_axis}.topology_terminals()) == 3);
}

TEST_CASE("topology enumeration counts") {
    for (int n = 3; n <= 8; ++n) {
        const auto topos = enumerate_topologies(n);
        CHECK(static_cast<long>(topos.size()) == double_factorial(2 * n - 5));
        std::set<std::set<std::vector<int>>> distinct;
        for (const auto& t : topos) {
            CHECK(t.terminals == n);
            CHECK(t.steiner == n - 2);
            CHECK(t.edges.size() == static_cast<std::size_t>(2 * n - 3));
            CHECK(t.is_full());
            distinct.insert(splits(t));
        }
        CHECK(distinct.size() == topos.size());
    }
    CHECK(enumerate_topologies(7).size() == 945);
    CHECK_THROWS_AS(enumerate_topologies(2), std::out_of_range);
    CHECK_THROWS_AS(enumerate_topologies(9), std::out_of_range);
}

TEST_CASE("is_full rejects malformed topologies") {
    SteinerTopology t{3, 1, {{0, 3}, {1, 3}, {2, 3}}};
    CHECK(t.is_full());
    SteinerTopology degree2{3, 1, {{0, 3}, {1, 3}, {2, 1}}};
    CHECK_FALSE(degree2.is_full());
    SteinerTopology cycle{4, 2, {{0, 4}, {1, 4}, {4, 5}, {2, 5}, {3, 5}, {4, 5}}};
    CHECK_FALSE(cycle.is_full());
    SteinerTopology split{4, 2, {{0, 4}, {1, 4}, {2, 5}, {3, 5}, {0, 1}}};
    CHECK_FALSE(split.is_full());
}

TEST_CASE("realize topology examples") {
    const auto tri = enumerate_topologies(3).front();
    const auto eq = realize_topology(tri, points_spec({{0, 0}, {1, 0}, {0.5, kSqrt3 / 2}}));
    REQUIRE(eq);
    CHECK(std::abs(eq->length - kSqrt3) <= 1e-9);
    CHECK(distance(eq->steiner_coords[0], {0.5, kSqrt3 / 6}) <= 1e-9);

    const IfsParams p(0.04);
    const auto spec = points_spec({{0, 0}, apply_map(p, MapIndex::one, {1, 0}), apply_map(p, MapIndex::two, {1, 0})});
    const auto t = realize_topology(tri, spec);
    REQUIRE(t);
    CHECK(distance(t->steiner_coords[0], {1.0, 0.0}) <= 1e-9);
    CHECK(std::abs(t->length - 1.08) <= 1e-9);
    CHECK(distance(t->steiner_coords[0], torricelli_point(spec.points[0], spec.points[1], spec.points[2])) <= 1e-9);

    std::string why;
    CHECK_FALSE(realize_topology(tri, spec, 1e-12, 1.0, &why));
    CHECK_FALSE(why.empty());

    SteinerTopology bad{3, 1, {{0, 3}, {1, 3}, {2, 1}}};
    CHECK_THROWS_AS(realize_topology(bad, spec), std::invalid_argument);
    CHECK_THROWS_AS(realize_topology(enumerate_topologies(4).front(), spec), std::invalid_argument);
}

TEST_CASE("obtuse triangle collapses onto the vertex") {
    const Point v{0.0, 0.0};
    const auto spec = points_spec({v + unit_vector(0.0), v, v + 2.0 * unit_vector(130.0 * kPi / 180.0)});
    const auto t = solve(spec);
    CHECK(std::abs(t.length - 3.0) <= 1e-9);
    CHECK(t.collapsed_edges.size() == 1);
    CHECK(validate_minimizer(t, spec).ok);
}

TEST_CASE("solve with a line") {
    const IfsParams p(0.04);
    const auto a2 = generate_leaves(p, 2).points;
    const auto t = solve_with_line(TerminalSpec{a2, OrientedLine({1.0, 0.0}, 0.0)});
    REQUIRE(t.foot);
    CHECK(distance(*t.foot, {0, 0}) <= 1e-9);
    CHECK(std::abs(t.length - 1.08) <= 1e-9);

    const auto single = solve_with_line(TerminalSpec{{{3, 4}}, OrientedLine({1.0, 0.0}, 0.0)});
    REQUIRE(single.foot);
    CHECK(distance(*single.foot, {0, 4}) <= 1e-9);
    CHECK(std::abs(single.length - 3.0) <= 1e-9);

    const auto shifted = solve_with_line(TerminalSpec{a2, OrientedLine({1.0, 0.0}, -0.5)});
    CHECK(std::abs(shifted.length - 1.58) <= 1e-9);
    CHECK(validate_minimizer(shifted, TerminalSpec{a2, OrientedLine({1.0, 0.0}, -0.5)}).ok);

    CHECK_THROWS_AS(solve_with_line(points_spec(a2)), std::invalid_argument);
}

TEST_CASE("solver caps and options") {
    Gen g(31);
    CHECK_THROWS_AS(solve(points_spec(g.spread_points(9))), std::out_of_range);
    SolveOptions wide;
    wide.max_terminals = 20;
    CHECK_THROWS_AS(solve(points_spec(g.spread_points(11)), wide), std::out_of_range);
    SolveOptions bad;
    bad.tolerance = 0.0;
    CHECK_THROWS_AS(solve(points_spec(g.spread_points(4)), bad), std::invalid_argument);
    auto spec8 = points_spec(g.spread_points(8));
    spec8.line = OrientedLine({1.0, 0.0}, -2.0);
    CHECK_THROWS_AS(solve(spec8), std::out_of_range);
}

TEST_CASE("n=3 agrees with the Weiszfeld oracle") {
    Gen g(32);
    for (int i = 0; i < 200; ++i) {
        const auto t = g.triangle(0.02);
        const double expect = oracle::sum_distances(oracle::weiszfeld(t[0], t[1], t[2]), t);
        const auto s = solve(points_spec(t));
        CHECK(std::abs(s.length - expect) <= 1e-8);
    }
}

TEST_CASE("n=4 agrees with the brute-force oracle") {
    Gen g(33);
    for (int i = 0; i < 8; ++i) {
        const auto t = g.spread_points(4, 1.0, 0.1);
        const double expect = oracle::brute_force_four(t);
        const auto s = solve(points_spec(t));
        CHECK(std::abs(s.length - expect) <= 1e-6);
        CHECK(s.length <= expect + 1e-9);
    }
}

TEST_CASE("isometry equivariance") {
    Gen g(34);
    for (int i = 0; i < 25; ++i) {
        const int n = g.integer(3, 6);
        const auto pts = g.spread_points(n, 1.0, 0.05);
        const Motion m{g.uniform(0.0, 2.0 * kPi), g.point(10.0)};
        std::vector<Point> moved;
        for (const Point& p : pts) moved.push_back(m(p));
        const double a = solve(points_spec(pts)).length;
        const double b = solve(points_spec(moved)).length;
        CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, a));
        std::vector<Point> scaled;
        for (const Point& p : pts) scaled.push_back(3.5 * p);
        CHECK(std::abs(solve(points_spec(scaled)).length - 3.5 * a) <= 1e-9 * 3.5 * a);
    }
}

TEST_CASE("length lies between the Steiner ratio bound and the MST") {
    Gen g(35);
    for (int i = 0; i < 40; ++i) {
        const auto spec = points_spec(g.spread_points(g.integer(2, 7), 1.0, 0.05));
        const auto t = solve(spec);
        const double mst = mst_length(spec);
        CHECK(t.length <= mst + 1e-9);
        CHECK(t.length >= kSqrt3 / 2.0 * mst - 1e-9);
        CHECK(std::abs(t.length - t.edge_length_sum()) <= 1e-9);
    }
}

TEST_CASE("mirror symmetric input gives a mirror symmetric length") {
    Gen g(36);
    for (int i = 0; i < 15; ++i) {
        const auto half = g.spread_points(3, 1.0, 0.1);
        std::vector<Point> pts;
        for (const Point& p : half) {
            pts.push_back({p.x, std::abs(p.y) + 0.05});
            pts.push_back({p.x, -std::abs(p.y) - 0.05});
        }
        std::vector<Point> flipped;
        for (const Point& p : pts) flipped.push_back({p.x, -p.y});
        CHECK(std::abs(solve(points_spec(pts)).length - solve(points_spec(flipped)).length) <= 1e-9);
    }
}

TEST_CASE("parallel and serial branch-and-bound agree") {
    Gen g(37);
    for (int i = 0; i < 10; ++i) {
        auto spec = points_spec(g.spread_points(g.integer(3, 7), 1.0, 0.05));
        if (i % 3 == 0) spec.line = OrientedLine({0.0, 1.0}, -1.5);
        const auto par = solve(spec);
        const auto ser = serial::solve(spec);
        CHECK(std::abs(par.length - ser.length) <= 1e-10);
        CHECK(par.multiplicity == ser.multiplicity);
    }
}

TEST_CASE("every solver output passes validation") {
    Gen g(38);
    for (int i = 0; i < 30; ++i) {
        auto spec = points_spec(g.spread_points(g.integer(2, 7), 1.0, 0.05));
        if (i % 2 == 0) spec.line = OrientedLine(g.unit(), -3.0);
        const auto t = solve(spec);
        const auto r = validate_minimizer(t, spec);
        CHECK(r.ok);
        CHECK(r.worst_angle_deficit <= 1e-9);
    }
}

TEST_CASE("small instances far from the origin validate") {
    Gen g(99);
    for (int i = 0; i < 60; ++i) {
        auto spec = points_spec(g.spread_points(g.integer(2, 6), 1.0, 0.01));
        const Point shift{5.0, 5.0};
        for (auto& p : spec.points) p = 1e-3 * p + shift;
        const Point n = g.unit();
        spec.line = OrientedLine(n, 1e-3 * (-1.5 - g.uniform(0.0, 2.0)) + dot(n, shift));
        const auto t = solve(spec);
        const auto r = validate_minimizer(t, spec);
        CHECK(r.ok);
        CHECK(r.trunk_tilt <= 1e-9);
    }
}

TEST_CASE("root plus leaves reproduces the truncated tree") {
    for (int n = 2; n <= 3; ++n) {
        const auto spec = root_and_leaves(0.04, n);
        const auto t = solve(spec);
        CHECK(std::abs(t.length - tree_length(IfsParams(0.04), n)) <= 1e-9);
        CHECK(t.multiplicity == 1);
        CHECK(t.collapsed_edges.empty());
        CHECK(validate_minimizer(t, spec).ok);
    }
}

TEST_CASE("solve_topology realizes a supplied topology") {
    const auto spec = points_spec({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    double best = INFINITY;
    for (const auto& topo : enumerate_topologies(4)) best = std::min(best, solve_topology(spec, topo).length);
    CHECK(std::abs(best - (1.0 + kSqrt3)) <= 1e-9);
    CHECK(std::abs(solve(spec).length - (1.0 + kSqrt3)) <= 1e-9);
    CHECK(solve(spec).multiplicity == 2);
}

TEST_CASE("injected faults fail the named checks") {
    // Arms at 0, 100 and 230 degrees: one 100 degree angle.
    const std::vector<Point> arms = {unit_vector(0.0), unit_vector(100.0 * kPi / 180.0),
                                     unit_vector(230.0 * kPi / 180.0)};
    const auto spec = points_spec(arms);
    const auto bent = star_tree(arms, {0.0, 0.0});
    const auto r1 = validate_minimizer(bent, spec);
    CHECK_FALSE(r1.ok);
    CHECK(r1.failed("angle"));
    CHECK_FALSE(r1.failed("hull"));
    CHECK(r1.worst_angle_deficit == doctest::Approx(20.0 * kPi / 180.0).epsilon(1e-12));

    const std::vector<Point> flat = {{0, 0}, {1, 0}, {0.5, 0.2}};
    const auto outside = star_tree(flat, {0.5, -1.0});
    const auto r2 = validate_minimizer(outside, points_spec(flat));
    CHECK(r2.failed("hull"));

    auto wrong_length = solve(points_spec(flat));
    wrong_length.length += 1e-3;
    CHECK(validate_minimizer(wrong_length, points_spec(flat)).failed("length"));

    auto moved = solve(points_spec(flat));
    moved.terminals[1].x += 1e-3;
    moved.length = moved.edge_length_sum();
    CHECK(validate_minimizer(moved, points_spec(flat)).failed("terminal_position"));

    auto degree = star_tree(arms, {0.0, 0.0});
    degree.topology.edges = {{0, 3}, {1, 3}, {2, 3}, {0, 1}};
    degree.length = degree.edge_length_sum();
    const auto r3 = validate_minimizer(degree, spec);
    CHECK(r3.failed("full_topology"));

    const IfsParams p(0.04);
    const TerminalSpec line_spec{generate_leaves(p, 2).points, OrientedLine({1.0, 0.0}, 0.0)};
    auto tilted = solve_with_line(line_spec);
    const int foot = tilted.topology.terminals - 1;
    tilted.terminals[static_cast<std::size_t>(foot)] = {0.0, 0.01};
    tilted.foot = Point{0.0, 0.01};
    tilted.length = tilted.edge_length_sum();
    const auto r4 = validate_minimizer(tilted, line_spec);
    CHECK(r4.failed("trunk_perpendicular"));
    CHECK_FALSE(r4.failed("foot_on_line"));

    auto lifted = solve_with_line(line_spec);
    lifted.terminals[static_cast<std::size_t>(foot)] = {0.01, 0.0};
    lifted.foot = Point{0.01, 0.0};
    lifted.length = lifted.edge_length_sum();
    CHECK(validate_minimizer(lifted, line_spec).failed("foot_on_line"));
}

TEST_CASE("a branch outside its strip fails the strip check") {
    const std::vector<Point> pts = {{0, 0}, {0, 1}, {3, 0}, {3, 1}};
    SteinerTree t;
    t.topology = SteinerTopology{4, 2, {{0, 4}, {1, 4}, {2, 5}, {3, 5}, {4, 5}}};
    t.terminals = pts;
    t.steiner_coords = {{1.0, 0.5}, {2.0, 0.5}};
    t.length = t.edge_length_sum();
    CHECK_FALSE(validate_minimizer(t, points_spec(pts)).failed("strip"));
    t.steiner_coords[1] = {2.0, 5.0};
    t.length = t.edge_length_sum();
    CHECK(validate_minimizer(t, points_spec(pts)).failed("strip"));
}

}  // TEST_SUITE

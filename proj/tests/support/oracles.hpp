#pragma once

// Independent reference computations. None of these call the library's
// solver, Torricelli construction or closed-form evaluators.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "fsteiner/geom.hpp"

namespace fsteiner::oracle {

/// Geometric median of three points by Weiszfeld iteration, with the
/// vertex optimality test (a vertex is optimal when the pull of the other
/// two points has norm at most one).
inline Point weiszfeld(Point a, Point b, Point c, int iterations = 200000) {
    const std::array<Point, 3> pts = {a, b, c};
    for (int i = 0; i < 3; ++i) {
        Point pull;
        for (int j = 0; j < 3; ++j) {
            if (j != i) pull += (pts[j] - pts[i]) / distance(pts[j], pts[i]);
        }
        if (std::hypot(pull.x, pull.y) <= 1.0) return pts[i];
    }
    Point x = (a + b + c) / 3.0;
    for (int it = 0; it < iterations; ++it) {
        Point num;
        double den = 0.0;
        for (const Point& p : pts) {
            const double w = 1.0 / std::max(distance(x, p), 1e-300);
            num += w * p;
            den += w;
        }
        const Point next = num / den;
        if (distance(next, x) < 1e-16) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

inline double sum_distances(Point x, const std::vector<Point>& pts) {
    double s = 0.0;
    for (const Point& p : pts) s += distance(x, p);
    return s;
}

/// Minimal length over the three full topologies of four terminals, each
/// minimized over both Steiner points by a coarse grid followed by a
/// multi-direction pattern search. Collapsed trees are included since the
/// Steiner points range over the whole plane.
inline double brute_force_four(const std::vector<Point>& t, int grid = 14) {
    Point lo{INFINITY, INFINITY}, hi{-INFINITY, -INFINITY};
    for (const Point& p : t) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    const double span = std::max(hi.x - lo.x, hi.y - lo.y);
    const std::array<std::array<int, 4>, 3> pairings = {{{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}};
    std::vector<Point> dirs;
    for (int k = 0; k < 16; ++k) dirs.push_back(unit_vector(2.0 * kPi * k / 16.0));

    double best = std::numeric_limits<double>::infinity();
    for (const auto& pr : pairings) {
        auto f = [&](Point s1, Point s2) {
            return distance(s1, t[pr[0]]) + distance(s1, t[pr[1]]) + distance(s1, s2) + distance(s2, t[pr[2]]) +
                   distance(s2, t[pr[3]]);
        };
        std::vector<Point> cells;
        for (int i = 0; i <= grid; ++i) {
            for (int j = 0; j <= grid; ++j) {
                cells.push_back({lo.x + (hi.x - lo.x) * i / grid, lo.y + (hi.y - lo.y) * j / grid});
            }
        }
        Point s1 = cells[0], s2 = cells[0];
        double value = f(s1, s2);
        for (const Point& p : cells) {
            for (const Point& q : cells) {
                const double v = f(p, q);
                if (v < value) {
                    value = v;
                    s1 = p;
                    s2 = q;
                }
            }
        }
        double step = span / grid;
        while (step > 1e-13 * span) {
            bool improved = false;
            for (const Point& d : dirs) {
                const Point moves[4][2] = {{d, {}}, {{}, d}, {d, d}, {d, -d}};
                for (const auto& mv : moves) {
                    const Point a = s1 + step * mv[0];
                    const Point b = s2 + step * mv[1];
                    const double v = f(a, b);
                    if (v < value) {
                        value = v;
                        s1 = a;
                        s2 = b;
                        improved = true;
                    }
                }
            }
            if (!improved) step *= 0.5;
        }
        best = std::min(best, value);
    }
    return best;
}

using Real50 = boost::multiprecision::cpp_dec_float_50;

/// Closed forms evaluated in 50-digit decimal arithmetic.
struct HighPrecision {
    Real50 l;
    explicit HighPrecision(double lambda) : l(lambda) {}

    Real50 sqrt3() const { return boost::multiprecision::sqrt(Real50(3)); }
    Real50 root_line() const { return 1 + l / 2 - l * l * (1 + 2 * l) / (2 * (1 - l * l)); }
    Real50 between() const { return sqrt3() * l - sqrt3() * l * l * l / (1 - l); }
    Real50 tree_limit() const { return 1 / (1 - 2 * l); }
    Real50 gap() const { return root_line() + between() - tree_limit(); }
    Real50 containment() const { return l - (sqrt3() * l / 2 + l * l / (1 - l)); }
    Real50 dimension() const { return -boost::multiprecision::log(Real50(2)) / boost::multiprecision::log(l); }
};

}  // namespace fsteiner::oracle

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fsteiner/smt.hpp"

namespace fsteiner {

bool MinimizerReport::failed(const std::string& check) const {
    return std::any_of(failures.begin(), failures.end(),
                       [&check](const MinimizerFailure& f) { return f.check == check; });
}

namespace {

Point normalized(Point v) { return v / norm(v); }

double spec_scale(const TerminalSpec& spec, std::vector<Point>& cloud) {
    cloud = spec.points;
    if (spec.line) {
        for (const Point& p : spec.points) cloud.push_back(perpendicular_foot(p, *spec.line));
    }
    double diameter = 0.0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        for (std::size_t j = i + 1; j < cloud.size(); ++j) diameter = std::max(diameter, distance(cloud[i], cloud[j]));
    }
    return diameter > 0.0 ? diameter : 1.0;
}

}  // namespace

MinimizerReport validate_minimizer(const SteinerTree& tree, const TerminalSpec& spec, double tol_angle) {
    MinimizerReport report;
    auto fail = [&report](const char* check, int node, double value) {
        report.ok = false;
        report.failures.push_back({check, node, value});
    };

    std::vector<Point> cloud;
    const double scale = spec_scale(spec, cloud);
    const double tol = kEpsGeom * scale;
    const SteinerTopology& topo = tree.topology;
    const int m = spec.topology_terminals();
    const int nn = topo.node_count();

    if (topo.terminals != m || !topo.is_full() || static_cast<int>(tree.terminals.size()) != topo.terminals ||
        static_cast<int>(tree.steiner_coords.size()) != topo.steiner) {
        fail("full_topology", -1, static_cast<double>(topo.terminals));
        return report;
    }
    for (const Point& p : tree.terminals) require_finite(p, "validate_minimizer");
    for (const Point& p : tree.steiner_coords) require_finite(p, "validate_minimizer");

    const double sum = tree.edge_length_sum();
    if (std::abs(sum - tree.length) > tol) {
        fail("length", -1, sum - tree.length);
    }
    for (std::size_t i = 0; i < spec.points.size(); ++i) {
        const double off = distance(tree.terminals[i], spec.points[i]);
        if (off > tol) fail("terminal_position", static_cast<int>(i), off);
    }

    // clusters of nodes joined by collapsed edges act as a single junction
    const double collapse_len = 1e-10 * scale;
    std::vector<int> root(nn);
    std::iota(root.begin(), root.end(), 0);
    auto find = [&root](int u) {
        while (root[u] != u) u = root[u] = root[root[u]];
        return u;
    };
    std::vector<std::vector<int>> adj(nn);
    for (const auto& [a, b] : topo.edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
        if (distance(tree.node(a), tree.node(b)) <= collapse_len) root[find(a)] = find(b);
    }
    std::vector<std::vector<Point>> arms(nn);
    std::vector<int> terminals_in(nn, 0);
    for (int u = 0; u < m; ++u) ++terminals_in[find(u)];
    for (const auto& [a, b] : topo.edges) {
        const int ra = find(a);
        const int rb = find(b);
        if (ra == rb) continue;
        arms[ra].push_back(normalized(tree.node(b) - tree.node(a)));
        arms[rb].push_back(normalized(tree.node(a) - tree.node(b)));
    }

    for (int r = 0; r < nn; ++r) {
        if (find(r) != r) continue;
        const auto& dirs = arms[r];
        if (terminals_in[r] > 0 && dirs.size() > 3) {
            fail("terminal_degree", r, static_cast<double>(dirs.size()));
        }
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            for (std::size_t j = i + 1; j < dirs.size(); ++j) {
                const double angle = std::atan2(std::abs(cross(dirs[i], dirs[j])), dot(dirs[i], dirs[j]));
                const double deficit = kTwoThirdsPi - angle;
                report.worst_angle_deficit = std::max(report.worst_angle_deficit, deficit);
                if (deficit > tol_angle) fail("angle", r, deficit);
            }
        }
    }

    const std::vector<Point> hull = convex_hull(cloud);
    for (int s = 0; s < topo.steiner; ++s) {
        if (!hull_contains(hull, tree.steiner_coords[s], tol)) fail("hull", m + s, 0.0);
    }

    if (spec.line) {
        const int foot = m - 1;
        const Point f = tree.terminals[foot];
        const double off = std::abs(signed_distance(f, *spec.line));
        if (off > tol) fail("foot_on_line", foot, off);
        if (tree.foot && distance(*tree.foot, f) > tol) fail("foot_on_line", foot, distance(*tree.foot, f));
        Point pull;
        for (const Point& d : arms[find(foot)]) pull += d;
        const double len = norm(pull);
        report.trunk_tilt = len > 0.0 ? std::abs(dot(pull, spec.line->direction())) / len : 1.0;
        if (report.trunk_tilt > kEpsGeom) fail("trunk_perpendicular", foot, report.trunk_tilt);
    }

    // A branch hanging off Steiner point s through edge (s, v) lies, together
    // with s, in the thinnest slab parallel to (s, v) holding its terminals.
    for (int s = m; s < nn; ++s) {
        const Point ps = tree.node(s);
        for (int v : adj[s]) {
            const Point d = tree.node(v) - ps;
            if (norm(d) <= collapse_len) continue;
            const Point n = perp(normalized(d));
            double lo = INFINITY;
            double hi = -INFINITY;
            std::vector<int> branch{v};
            std::vector<int> from(nn, -1);
            from[v] = s;
            for (std::size_t i = 0; i < branch.size(); ++i) {
                const int u = branch[i];
                if (u < m) {
                    const double c = dot(n, tree.node(u));
                    lo = std::min(lo, c);
                    hi = std::max(hi, c);
                }
                for (int w : adj[u]) {
                    if (w != from[u]) {
                        from[w] = u;
                        branch.push_back(w);
                    }
                }
            }
            double excess = 0.0;
            auto outside = [&](Point p) {
                const double c = dot(n, p);
                return std::max({0.0, lo - c, c - hi});
            };
            excess = std::max(excess, outside(ps));
            for (int u : branch) excess = std::max(excess, outside(tree.node(u)));
            if (excess > tol) fail("strip", s, excess);
        }
    }
    return report;
}

}  // namespace fsteiner

#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "fsteiner/smt.hpp"

namespace fsteiner {

void TerminalSpec::validate() const {
    const std::size_t min_points = line ? 1 : 2;
    if (points.size() < min_points) {
        throw std::invalid_argument(line ? "TerminalSpec: a line terminal needs at least one point"
                                         : "TerminalSpec: at least two point terminals are required");
    }
    double extent = 0.0;
    for (const Point& p : points) {
        require_finite(p, "TerminalSpec");
        extent = std::max({extent, std::abs(p.x), std::abs(p.y)});
    }
    const double tol = kEpsGeom * std::max(1.0, extent);
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (distance(points[i], points[j]) <= tol) {
                throw std::invalid_argument("TerminalSpec: terminals " + std::to_string(i) + " and " +
                                            std::to_string(j) + " coincide");
            }
        }
    }
    if (line) {
        const double first = signed_distance(points.front(), *line);
        for (const Point& p : points) {
            const double d = signed_distance(p, *line);
            if (std::abs(d) <= tol) {
                throw std::invalid_argument("TerminalSpec: a point terminal lies on the line");
            }
            if ((d > 0.0) != (first > 0.0)) {
                throw std::invalid_argument("TerminalSpec: point terminals must lie on one side of the line");
            }
        }
    }
}

bool SteinerTopology::is_full() const {
    const int n = node_count();
    if (terminals < 2 || steiner < 0 || static_cast<int>(edges.size()) != n - 1) {
        return false;
    }
    std::vector<int> degree(n, 0);
    std::vector<int> root(n);
    std::iota(root.begin(), root.end(), 0);
    auto find = [&root](int u) {
        while (root[u] != u) u = root[u] = root[root[u]];
        return u;
    };
    for (const auto& [a, b] : edges) {
        if (a < 0 || b < 0 || a >= n || b >= n || a == b) {
            return false;
        }
        const int ra = find(a);
        const int rb = find(b);
        if (ra == rb) {
            return false;
        }
        root[ra] = rb;
        ++degree[a];
        ++degree[b];
    }
    for (int u = 0; u < n; ++u) {
        if (degree[u] != (u < terminals ? 1 : 3)) {
            return false;
        }
    }
    return true;
}

namespace {

void insert_terminals(SteinerTopology& topo, int next_terminal, int n, std::vector<SteinerTopology>& out) {
    if (next_terminal == n) {
        out.push_back(topo);
        return;
    }
    const std::size_t edge_count = topo.edges.size();
    for (std::size_t i = 0; i < edge_count; ++i) {
        const auto saved = topo.edges[i];
        const int s = n + topo.steiner;
        topo.edges[i] = {saved.first, s};
        topo.edges.emplace_back(s, saved.second);
        topo.edges.emplace_back(s, next_terminal);
        ++topo.steiner;
        insert_terminals(topo, next_terminal + 1, n, out);
        --topo.steiner;
        topo.edges.resize(edge_count);
        topo.edges[i] = saved;
    }
}

}  // namespace

std::vector<SteinerTopology> enumerate_topologies(int n) {
    if (n < 3 || n > kMaxEnumeratedTerminals) {
        throw std::out_of_range("enumerate_topologies: n must lie in [3, " + std::to_string(kMaxEnumeratedTerminals) +
                                "]; supply a conjectured topology to solve_topology for larger instances");
    }
    SteinerTopology start{n, 1, {{0, n}, {1, n}, {2, n}}};
    std::vector<SteinerTopology> out;
    insert_terminals(start, 3, n, out);
    return out;
}

double SteinerTree::edge_length_sum() const {
    double sum = 0.0;
    for (const auto& [a, b] : topology.edges) {
        sum += distance(node(a), node(b));
    }
    return sum;
}

}  // namespace fsteiner

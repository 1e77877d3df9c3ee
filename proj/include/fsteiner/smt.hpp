#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fsteiner/geom.hpp"

namespace fsteiner {

/// Point terminals, optionally with one line terminal.
struct TerminalSpec {
    std::vector<Point> points;
    std::optional<OrientedLine> line;

    /// Number of topology terminals: the points plus the foot on the line.
    int topology_terminals() const { return static_cast<int>(points.size()) + (line ? 1 : 0); }
    /// Throws std::invalid_argument on non-finite or coincident points, fewer
    /// than 2 points without a line (1 with), or points not strictly on one
    /// side of the line.
    void validate() const;
};

/// A combinatorial tree: terminals are 0..n-1, Steiner points n..n+s-1.
/// With a line terminal, id n-1 is the foot on the line.
struct SteinerTopology {
    int terminals = 0;
    int steiner = 0;
    std::vector<std::pair<int, int>> edges;

    int node_count() const { return terminals + steiner; }
    /// Connected, acyclic, terminals of degree 1, Steiner points of degree 3.
    bool is_full() const;
};

/// Hard cap of enumerate_topologies.
inline constexpr int kMaxEnumeratedTerminals = 8;
/// Hard cap of the exhaustive solver, whatever SolveOptions says.
inline constexpr int kMaxSolverTerminals = 10;

/// All (2n-5)!! full topologies on n terminals, 3 <= n <= 8, in the order
/// generated by inserting terminal k into each edge of every topology on k
/// terminals. Throws std::out_of_range outside that range.
std::vector<SteinerTopology> enumerate_topologies(int n);

struct SteinerTree {
    SteinerTopology topology;
    /// Terminal coordinates (including the foot when a line is present).
    std::vector<Point> terminals;
    std::vector<Point> steiner_coords;
    double length = 0.0;
    std::optional<Point> foot;
    /// Indices into topology.edges of zero-length (collapsed) edges.
    std::vector<int> collapsed_edges;
    /// Number of full topologies reaching the minimum (within tolerance).
    int multiplicity = 1;
    /// Whether the exact equilateral-point construction produced the coordinates.
    bool exact_construction = false;
    /// Iterations spent on the returned realization.
    int iterations = 0;
    /// Fixed-topology optimizations run by the search (1 for a single topology).
    long evaluated_topologies = 1;

    Point node(int id) const {
        return id < topology.terminals ? terminals[static_cast<std::size_t>(id)]
                                       : steiner_coords[static_cast<std::size_t>(id - topology.terminals)];
    }
    double edge_length_sum() const;
};

struct SolveOptions {
    /// Exhaustive search refuses larger terminal counts (foot included).
    int max_terminals = kMaxEnumeratedTerminals;
    /// Target accuracy of lengths and coordinates, relative to the instance diameter.
    double tolerance = 1e-12;
    int max_iterations = 10000;
    /// Use the OpenMP branch-and-bound (false: single-threaded reference path).
    bool parallel = true;
};

/// Relatively minimal realization of `topo` for `spec`.
///
/// Steiner points satisfy the 120-degree condition unless an edge collapses;
/// collapsed edges are listed in the result. Returns nullopt when the
/// realization is provably longer than `incumbent`, or when the iteration
/// cap is reached (diagnostic in *why_absent when given).
std::optional<SteinerTree> realize_topology(const SteinerTopology& topo, const TerminalSpec& spec, double tol = 1e-12,
                                            double incumbent = INFINITY, std::string* why_absent = nullptr,
                                            int max_iterations = 10000);

/// Euclidean Steiner minimal tree over all full topologies (with collapse).
/// Throws std::out_of_range when the terminal count exceeds the cap.
SteinerTree solve(const TerminalSpec& spec, const SolveOptions& options = {});

/// Minimal tree connecting the line and the points; the foot slides on the line.
/// Throws std::invalid_argument if spec.line is absent.
SteinerTree solve_with_line(const TerminalSpec& spec, const SolveOptions& options = {});

/// Conjectured-topology mode: realize a caller-supplied topology, any size.
/// Throws std::runtime_error if the realization does not converge.
SteinerTree solve_topology(const TerminalSpec& spec, const SteinerTopology& topo, const SolveOptions& options = {});

/// Length of the Euclidean minimum spanning tree (plus the shortest drop to the line).
double mst_length(const TerminalSpec& spec);

struct MinimizerFailure {
    std::string check;
    int node = -1;
    double value = 0.0;
};

struct MinimizerReport {
    bool ok = true;
    std::vector<MinimizerFailure> failures;
    /// Largest 2π/3 - angle over pairs of edges meeting at a junction (<= 0 is good).
    double worst_angle_deficit = -INFINITY;
    double trunk_tilt = 0.0;

    bool failed(const std::string& check) const;
};

/// Local-optimality checks: length consistency, full topology, terminal
/// degree, junction angles >= 2π/3 - tol_angle, convex hull containment,
/// foot on the line with a perpendicular trunk, and strip containment of
/// every branch hanging off a Steiner point.
MinimizerReport validate_minimizer(const SteinerTree& tree, const TerminalSpec& spec, double tol_angle = kEpsGeom);

namespace serial {
/// Single-threaded branch-and-bound reference.
SteinerTree solve(const TerminalSpec& spec, const SolveOptions& options = {});
}  // namespace serial

}  // namespace fsteiner

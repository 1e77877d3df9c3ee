#pragma once

// Fixed-topology machinery shared by realize_topology and the branch-and-bound.

#include <optional>
#include <utility>
#include <vector>

#include "fsteiner/smt.hpp"

namespace fsteiner::detail {

/// Per-solve constant data. Terminal ids are 0..m-1; the foot (if any) is m-1.
struct Instance {
    std::vector<Point> terminals;
    std::optional<OrientedLine> line;
    int foot = -1;
    /// Hull of the points and their projections on the line; some optimal
    /// realization of every topology lies inside it.
    std::vector<Point> hull;
    double scale = 1.0;

    int m() const { return static_cast<int>(terminals.size()); }
    bool is_variable(int id) const { return id >= m() || id == foot; }
};

Instance make_instance(const TerminalSpec& spec);

/// Node positions plus the edge list of a (possibly partial) full topology.
/// Steiner ids are m .. m+steiner-1.
struct Network {
    std::vector<Point> pos;
    std::vector<std::pair<int, int>> edges;
    int steiner = 0;
};

struct OptimizeResult {
    double length = 0.0;
    double lower_bound = 0.0;
    bool converged = false;
    bool pruned = false;
    int iterations = 0;
};

/// Minimizes the total edge length over Steiner positions (and the foot).
///
/// Stops when the certified gap length - lower_bound drops below
/// tol * scale, when the lower bound exceeds prune_above, when steps stall,
/// or at the iteration cap. On return `net` holds the best iterate found.
OptimizeResult optimize(const Instance& inst, Network& net, double tol, double prune_above, int max_iterations);

double network_length(const Network& net);

/// Exact coordinates for a non-degenerate full topology by the equilateral
/// point (Melzak) construction, with sides read off the current iterate.
/// Returns false (and leaves `net` untouched) when the construction is not valid.
bool exact_construction(const Instance& inst, Network& net);

/// Spreads Steiner points by hop-distance weighted terminal averages.
void initial_positions(const Instance& inst, Network& net);

SteinerTree to_tree(const Instance& inst, const Network& net);

}  // namespace fsteiner::detail

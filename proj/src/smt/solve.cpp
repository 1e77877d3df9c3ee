#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "engine.hpp"
#include "fsteiner/kernels.hpp"
#include "fsteiner/smt.hpp"

namespace fsteiner {

using detail::Instance;
using detail::Network;

namespace {

/// Length differences below this multiple of the instance scale count as ties.
constexpr double kTieFactor = 1e-10;

struct Candidate {
    double length = 0.0;
    std::vector<int> key;
    Network net;
    int iterations = 0;
};

/// Incremental (Smith) branch-and-bound: terminal k of the insertion order is
/// inserted into every edge of a partial topology. The relatively minimal
/// length of a partial topology bounds every completion from below.
class BranchAndBound {
public:
    BranchAndBound(Instance inst, const SolveOptions& options, double initial_bound)
        : inst_(std::move(inst)), options_(options), initial_bound_(initial_bound) {
        tie_ = kTieFactor * inst_.scale;
        order_ = insertion_order();
    }

    SteinerTree run(bool parallel) {
        const int m = inst_.m();
        incumbent_.store(initial_bound_ + tie_);

        std::vector<Candidate> found;
        if (m == 2) {
            Node only = root_node();
            found.push_back({only.length, only.key, only.net, only.iterations});
        } else {
            std::vector<Node> frontier{root_node()};
            if (parallel) {
                frontier = widen(std::move(frontier));
            }
            run_frontier(frontier, found, parallel);
        }
        return select(found);
    }

private:
    struct Node {
        Network net;
        std::vector<int> key;
        int placed = 0;
        double length = 0.0;
        double lower = 0.0;
        int iterations = 0;
    };

    /// Foot first, then farthest-point order so early partial trees span the instance.
    std::vector<int> insertion_order() const {
        const int m = inst_.m();
        std::vector<int> order;
        std::vector<char> used(m, 0);
        int first = 0;
        if (inst_.foot >= 0) {
            first = inst_.foot;
        } else {
            double best = -1.0;
            for (int i = 0; i < m; ++i) {
                for (int j = i + 1; j < m; ++j) {
                    const double d = distance(inst_.terminals[i], inst_.terminals[j]);
                    if (d > best) {
                        best = d;
                        first = i;
                    }
                }
            }
        }
        order.push_back(first);
        used[first] = 1;
        std::vector<double> reach(m, std::numeric_limits<double>::infinity());
        while (static_cast<int>(order.size()) < m) {
            const Point last = inst_.terminals[order.back()];
            int pick = -1;
            for (int i = 0; i < m; ++i) {
                if (used[i]) continue;
                reach[i] = std::min(reach[i], distance(last, inst_.terminals[i]));
                if (pick < 0 || reach[i] > reach[pick]) pick = i;
            }
            order.push_back(pick);
            used[pick] = 1;
        }
        return order;
    }

    void evaluate(Node& node) const {
        const detail::OptimizeResult r =
            detail::optimize(inst_, node.net, options_.tolerance, incumbent_.load() + tie_, options_.max_iterations);
        evaluated_.fetch_add(1);
        node.length = r.length;
        node.lower = r.pruned ? std::numeric_limits<double>::infinity() : r.lower_bound;
        node.iterations = r.iterations;
    }

    Node root_node() const {
        const int m = inst_.m();
        Node node;
        node.net.pos = inst_.terminals;
        node.net.pos.resize(static_cast<std::size_t>(m + std::max(m - 2, 0)));
        if (m == 2) {
            node.net.edges = {{order_[0], order_[1]}};
            node.placed = 2;
        } else {
            const int s = m;
            node.net.edges = {{order_[0], s}, {order_[1], s}, {order_[2], s}};
            node.net.steiner = 1;
            node.net.pos[s] = (inst_.terminals[order_[0]] + inst_.terminals[order_[1]] + inst_.terminals[order_[2]]) / 3.0;
            node.placed = 3;
        }
        evaluate(node);
        return node;
    }

    std::vector<Node> children(const Node& parent) const {
        const int m = inst_.m();
        const int t = order_[parent.placed];
        std::vector<Node> kids;
        for (std::size_t i = 0; i < parent.net.edges.size(); ++i) {
            Node kid;
            kid.net = parent.net;
            kid.key = parent.key;
            kid.key.push_back(static_cast<int>(i));
            kid.placed = parent.placed + 1;
            const auto [a, b] = parent.net.edges[i];
            const int s = m + kid.net.steiner;
            kid.net.edges[i] = {a, s};
            kid.net.edges.emplace_back(s, b);
            kid.net.edges.emplace_back(s, t);
            ++kid.net.steiner;
            kid.net.pos[s] = (kid.net.pos[a] + kid.net.pos[b] + kid.net.pos[t]) / 3.0;
            evaluate(kid);
            if (kid.lower <= incumbent_.load() + tie_) {
                kids.push_back(std::move(kid));
            }
        }
        std::stable_sort(kids.begin(), kids.end(),
                         [](const Node& l, const Node& r) { return l.length < r.length; });
        return kids;
    }

    void offer(double length) {
        double current = incumbent_.load();
        while (length < current && !incumbent_.compare_exchange_weak(current, length)) {
        }
    }

    void expand(const Node& node, std::vector<Candidate>& out) {
        if (node.lower > incumbent_.load() + tie_) {
            return;
        }
        if (node.placed == inst_.m()) {
            out.push_back({node.length, node.key, node.net, node.iterations});
            offer(node.length);
            return;
        }
        for (const Node& kid : children(node)) {
            expand(kid, out);
        }
    }

    /// Breadth-first expansion until there is enough independent work per thread.
    std::vector<Node> widen(std::vector<Node> frontier) const {
        const std::size_t target = 16 * static_cast<std::size_t>(std::max(1, thread_count()));
        while (!frontier.empty() && frontier.size() < target && frontier.front().placed < inst_.m()) {
            std::vector<Node> next;
            for (const Node& node : frontier) {
                for (Node& kid : children(node)) {
                    next.push_back(std::move(kid));
                }
            }
            frontier = std::move(next);
        }
        std::stable_sort(frontier.begin(), frontier.end(),
                         [](const Node& l, const Node& r) { return l.length < r.length; });
        return frontier;
    }

    void run_frontier(const std::vector<Node>& frontier, std::vector<Candidate>& found, bool parallel) {
        if (!parallel) {
            for (const Node& node : frontier) {
                expand(node, found);
            }
            return;
        }
        const auto count = static_cast<std::ptrdiff_t>(frontier.size());
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            std::vector<Candidate> local;
            expand(frontier[static_cast<std::size_t>(i)], local);
#pragma omp critical(fsteiner_bnb_merge)
            {
                for (Candidate& c : local) {
                    found.push_back(std::move(c));
                }
            }
        }
    }

    /// Minimum length, ties broken by the smallest insertion sequence so the
    /// result does not depend on thread scheduling.
    SteinerTree select(std::vector<Candidate>& found) const {
        if (found.empty()) {
            throw std::runtime_error("solve: branch-and-bound found no candidate tree");
        }
        double best = std::numeric_limits<double>::infinity();
        for (const Candidate& c : found) best = std::min(best, c.length);
        const Candidate* winner = nullptr;
        int multiplicity = 0;
        for (const Candidate& c : found) {
            if (c.length <= best + tie_) {
                ++multiplicity;
                if (winner == nullptr || c.key < winner->key) winner = &c;
            }
        }
        Network net = winner->net;
        const bool exact = detail::exact_construction(inst_, net);
        SteinerTree tree = detail::to_tree(inst_, net);
        tree.multiplicity = multiplicity;
        tree.exact_construction = exact;
        tree.iterations = winner->iterations;
        tree.evaluated_topologies = evaluated_.load();
        return tree;
    }

    Instance inst_;
    SolveOptions options_;
    double initial_bound_ = 0.0;
    std::vector<int> order_;
    double tie_ = 0.0;
    std::atomic<double> incumbent_{std::numeric_limits<double>::infinity()};
    mutable std::atomic<long> evaluated_{0};
};

void check_cap(const TerminalSpec& spec, const SolveOptions& options) {
    const int m = spec.topology_terminals();
    const int cap = std::min(options.max_terminals, kMaxSolverTerminals);
    if (m > cap) {
        throw std::out_of_range("solve: " + std::to_string(m) + " terminals exceed the exhaustive-search cap of " +
                                std::to_string(cap) +
                                "; raise SolveOptions::max_terminals (at most " + std::to_string(kMaxSolverTerminals) +
                                ") or supply a conjectured topology to solve_topology");
    }
    if (!(options.tolerance > 0.0) || options.max_iterations < 1) {
        throw std::invalid_argument("solve: tolerance must be positive and max_iterations at least 1");
    }
}

SteinerTree solve_impl(const TerminalSpec& spec, const SolveOptions& options, bool parallel) {
    check_cap(spec, options);
    BranchAndBound bnb(detail::make_instance(spec), options, mst_length(spec));
    return bnb.run(parallel);
}

}  // namespace

std::optional<SteinerTree> realize_topology(const SteinerTopology& topo, const TerminalSpec& spec, double tol,
                                            double incumbent, std::string* why_absent, int max_iterations) {
    const Instance inst = detail::make_instance(spec);
    if (topo.terminals != inst.m() || !topo.is_full()) {
        throw std::invalid_argument("realize_topology: topology is not a full topology on " + std::to_string(inst.m()) +
                                    " terminals");
    }
    Network net;
    net.pos = inst.terminals;
    net.pos.resize(static_cast<std::size_t>(topo.node_count()));
    net.edges = topo.edges;
    net.steiner = topo.steiner;
    detail::initial_positions(inst, net);
    const detail::OptimizeResult r = detail::optimize(inst, net, tol, incumbent, max_iterations);
    if (r.pruned) {
        if (why_absent) *why_absent = "provably longer than the incumbent";
        return std::nullopt;
    }
    if (!r.converged) {
        if (why_absent) {
            *why_absent = "no convergence after " + std::to_string(r.iterations) + " iterations (gap " +
                          std::to_string(r.length - r.lower_bound) + ")";
        }
        return std::nullopt;
    }
    const bool exact = detail::exact_construction(inst, net);
    SteinerTree tree = detail::to_tree(inst, net);
    tree.exact_construction = exact;
    tree.iterations = r.iterations;
    return tree;
}

SteinerTree solve(const TerminalSpec& spec, const SolveOptions& options) {
    return solve_impl(spec, options, options.parallel);
}

SteinerTree solve_with_line(const TerminalSpec& spec, const SolveOptions& options) {
    if (!spec.line) {
        throw std::invalid_argument("solve_with_line: the terminal spec has no line");
    }
    return solve(spec, options);
}

SteinerTree solve_topology(const TerminalSpec& spec, const SteinerTopology& topo, const SolveOptions& options) {
    std::string why;
    auto tree = realize_topology(topo, spec, options.tolerance, INFINITY, &why, options.max_iterations);
    if (!tree) {
        throw std::runtime_error("solve_topology: " + why);
    }
    return *tree;
}

double mst_length(const TerminalSpec& spec) {
    spec.validate();
    const auto& pts = spec.points;
    const std::size_t n = pts.size();
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<char> in(n, 0);
    double total = 0.0;
    best[0] = 0.0;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t u = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!in[i] && (u == n || best[i] < best[u])) u = i;
        }
        in[u] = 1;
        total += best[u];
        for (std::size_t i = 0; i < n; ++i) {
            if (!in[i]) best[i] = std::min(best[i], distance(pts[u], pts[i]));
        }
    }
    if (spec.line) {
        double drop = std::numeric_limits<double>::infinity();
        for (const Point& p : pts) drop = std::min(drop, std::abs(signed_distance(p, *spec.line)));
        total += drop;
    }
    return total;
}

namespace serial {

SteinerTree solve(const TerminalSpec& spec, const SolveOptions& options) { return solve_impl(spec, options, false); }

}  // namespace serial

}  // namespace fsteiner

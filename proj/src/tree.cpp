#include "fsteiner/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fsteiner {

TruncatedTree::TruncatedTree(IfsParams params, int depth, std::vector<TreeEdge> edges)
    : params_(params), depth_(depth), edges_(std::move(edges)) {
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        if (!index_.emplace(edges_[i].word, i).second) {
            throw std::invalid_argument("TruncatedTree: duplicate edge word " + edges_[i].word.str());
        }
    }
}

const TreeEdge& TruncatedTree::edge(const Word& word) const {
    const auto it = index_.find(word);
    if (it == index_.end()) {
        throw std::out_of_range("TruncatedTree: no edge for word '" + word.str() + "'");
    }
    return edges_[it->second];
}

Point TruncatedTree::tip(const Word& word) const { return edge(word).segment.b; }

std::vector<Point> TruncatedTree::leaves() const {
    std::vector<Point> out;
    for (const TreeEdge& e : edges_) {
        if (e.level == depth_ - 1) {
            out.push_back(e.segment.b);
        }
    }
    return out;
}

std::vector<std::pair<Word, Point>> TruncatedTree::branch_points() const {
    std::vector<std::pair<Word, Point>> out;
    for (const TreeEdge& e : edges_) {
        if (e.level < depth_ - 1) {
            out.emplace_back(e.word, e.segment.b);
        }
    }
    return out;
}

double TruncatedTree::total_length() const {
    double sum = 0.0;
    for (const TreeEdge& e : edges_) {
        sum += e.segment.length();
    }
    return sum;
}

TruncatedTree TruncatedTree::with_tip_moved(const Word& word, Point delta) const {
    std::vector<TreeEdge> edges = edges_;
    edges[index_.at(word)].segment.b += delta;
    for (MapIndex j : {MapIndex::one, MapIndex::two}) {
        const auto it = index_.find(word.extended(j));
        if (it != index_.end()) {
            edges[it->second].segment.a += delta;
        }
    }
    return TruncatedTree(params_, depth_, std::move(edges));
}

TruncatedTree build_tree(const IfsParams& params, int depth, int max_depth) {
    if (depth < 1 || depth > max_depth) {
        throw std::out_of_range("build_tree: depth must lie in [1, " + std::to_string(max_depth) + "]");
    }
    std::vector<TreeEdge> edges;
    edges.reserve((std::size_t{1} << depth) - 1);
    edges.push_back({Word{}, {TruncatedTree::root(), {1.0, 0.0}}, 0});
    std::size_t level_begin = 0;
    for (int k = 1; k < depth; ++k) {
        const std::size_t level_end = edges.size();
        // f_{j w}([0,1]) = f_j(f_w([0,1])): level k is f_1(level k-1) then f_2(level k-1)
        for (MapIndex j : {MapIndex::one, MapIndex::two}) {
            for (std::size_t i = level_begin; i < level_end; ++i) {
                const TreeEdge& prev = edges[i];
                edges.push_back({Word((j == MapIndex::one ? "1" : "2") + prev.word.str()),
                                 {apply_map(params, j, prev.segment.a), apply_map(params, j, prev.segment.b)},
                                 k});
            }
        }
        level_begin = level_end;
        std::sort(edges.begin() + static_cast<std::ptrdiff_t>(level_begin), edges.end(),
                  [](const TreeEdge& l, const TreeEdge& r) { return l.word < r.word; });
    }
    return TruncatedTree(params, depth, std::move(edges));
}

double tree_length(const IfsParams& params, int depth) {
    if (depth < 0) {
        throw std::out_of_range("tree_length: negative depth");
    }
    const double ratio = 2.0 * params.lambda();
    double sum = 0.0;
    double term = 1.0;
    for (int k = 0; k < depth; ++k) {
        sum += term;
        term *= ratio;
    }
    return sum;
}

double tree_length_limit(double lambda) {
    if (!(lambda < 0.5) || !(lambda > 0.0)) {
        throw std::domain_error("tree_length_limit: series diverges unless 0 < lambda < 1/2");
    }
    return 1.0 / (1.0 - 2.0 * lambda);
}

StructureReport validate_structure(const TruncatedTree& tree) {
    StructureReport report;
    auto fail = [&report](std::string check, const Word& w, double value) {
        report.ok = false;
        report.failures.push_back({std::move(check), w.str(), value});
    };

    const double lambda = tree.params().lambda();
    const std::size_t expected_edges = (std::size_t{1} << tree.depth()) - 1;
    if (tree.edges().size() != expected_edges) {
        fail("edge_count", Word{}, static_cast<double>(tree.edges().size()));
    }

    for (const TreeEdge& e : tree.edges()) {
        // connectivity: every edge starts where its parent ends
        const Point start = e.word.empty() ? TruncatedTree::root() : tree.has_edge(e.word.parent())
                                                                         ? tree.tip(e.word.parent())
                                                                         : Point{NAN, NAN};
        const double gap = is_finite(start) ? distance(start, e.segment.a) : INFINITY;
        if (!(gap <= kEpsGeom)) {
            fail("connected", e.word, gap);
        }
        if (static_cast<int>(e.word.size()) != e.level) {
            fail("level", e.word, e.level);
        }
        const double expected = std::pow(lambda, e.level);
        const double dev = std::abs(e.segment.length() - expected) / expected;
        report.worst_length_deviation = std::max(report.worst_length_deviation, dev);
        // Endpoints are stored absolutely, so short edges carry their rounding error.
        const double rounding = 8.0 * std::numeric_limits<double>::epsilon() *
                                std::max(norm(e.segment.a), norm(e.segment.b)) / expected;
        if (dev > kEpsAlgebraic + rounding) {
            fail("edge_length", e.word, dev);
        }
    }

    for (const TreeEdge& e : tree.edges()) {
        if (e.level >= tree.depth() - 1) {
            continue;
        }
        const Word c1 = e.word.extended(MapIndex::one);
        const Word c2 = e.word.extended(MapIndex::two);
        if (!tree.has_edge(c1) || !tree.has_edge(c2)) {
            fail("degree", e.word, tree.has_edge(c1) + tree.has_edge(c2) + 1.0);
            continue;
        }
        const Point v = e.segment.b;
        const Point arms[3] = {e.segment.a, tree.edge(c1).segment.b, tree.edge(c2).segment.b};
        double worst = 0.0;
        for (int i = 0; i < 3; ++i) {
            worst = std::max(worst, std::abs(angle_between(v, arms[i], arms[(i + 1) % 3]) - kTwoThirdsPi));
        }
        report.worst_angle_deviation = std::max(report.worst_angle_deviation, worst);
        const double shortest = std::min({distance(v, arms[0]), distance(v, arms[1]), distance(v, arms[2])});
        const double rounding = 8.0 * std::numeric_limits<double>::epsilon() * norm(v) / shortest;
        if (worst > kEpsGeom + rounding) {
            fail("angle", e.word, worst);
        }
    }

    const Segment trunk = tree.edge(Word{}).segment;
    const Point dir = trunk.b - trunk.a;
    // Y = {x = 0} has direction (0, 1)
    report.trunk_tilt = std::abs(dir.y) / norm(dir);
    if (report.trunk_tilt > kEpsGeom) {
        fail("trunk_perpendicular", Word{}, report.trunk_tilt);
    }
    return report;
}

}  // namespace fsteiner

#pragma once

#include <map>
#include <string>
#include <vector>

#include "fsteiner/geom.hpp"
#include "fsteiner/ifs.hpp"

namespace fsteiner {

/// The image f_w([0,1]) of the trunk; its level is |w|.
struct TreeEdge {
    Word word;
    Segment segment;
    int level = 0;
};

/// The truncation Σ_N: the union of f_w([0,1]) over all words |w| < N.
///
/// Vertices are keyed by words, never by coordinates: the tip of edge w is
/// f_w(1) (equal to f_{wj}(0) for either j), and the root is the origin.
/// Edge w starts at the tip of w.parent(), or at the root when w is empty.
class TruncatedTree {
public:
    TruncatedTree(IfsParams params, int depth, std::vector<TreeEdge> edges);

    const IfsParams& params() const { return params_; }
    int depth() const { return depth_; }
    /// Edges ordered by level, then lexicographically by word.
    const std::vector<TreeEdge>& edges() const { return edges_; }
    static constexpr Point root() { return {0.0, 0.0}; }
    /// Tip of edge `word`; throws std::out_of_range for unknown words.
    Point tip(const Word& word) const;
    const TreeEdge& edge(const Word& word) const;
    bool has_edge(const Word& word) const { return index_.count(word) != 0; }

    /// Tips of the level N-1 edges: the leaf set A_N, in word order.
    std::vector<Point> leaves() const;
    /// Tips of all non-leaf edges (the branching points), in edge order.
    std::vector<std::pair<Word, Point>> branch_points() const;
    double total_length() const;

    /// Copy with the tip of `word` displaced by `delta`; incident edges follow.
    TruncatedTree with_tip_moved(const Word& word, Point delta) const;

private:
    IfsParams params_;
    int depth_;
    std::vector<TreeEdge> edges_;
    std::map<Word, std::size_t> index_;
};

/// Σ_N rooted at the origin; 2^k edges at level k, for k < N.
/// Throws std::out_of_range unless 1 <= N <= max_depth.
TruncatedTree build_tree(const IfsParams& params, int depth, int max_depth = kDefaultMaxDepth);

/// Σ_{k<N} (2λ)^k.
double tree_length(const IfsParams& params, int depth);
/// 1/(1-2λ), the length of the infinite tree. Throws std::domain_error if λ >= 1/2.
double tree_length_limit(double lambda);

struct StructureFailure {
    std::string check;
    std::string word;
    double value = 0.0;
};

struct StructureReport {
    bool ok = true;
    std::vector<StructureFailure> failures;
    double worst_angle_deviation = 0.0;
    double worst_length_deviation = 0.0;
    double trunk_tilt = 0.0;
};

/// Checks connectivity, degree 3 at branching points, 2π/3 angles within
/// 1e-9, edge lengths λ^k and a trunk perpendicular to the line x = 0.
/// Failures are collected, never thrown.
StructureReport validate_structure(const TruncatedTree& tree);

}  // namespace fsteiner

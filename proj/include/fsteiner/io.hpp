#pragma once

// Text serialization of leaf sets, trees, Steiner trees and lemma reports.
// All writers are deterministic: identical inputs give identical bytes.

#include <string>
#include <string_view>
#include <vector>

#include "fsteiner/ifs.hpp"
#include "fsteiner/lemmas.hpp"
#include "fsteiner/smt.hpp"
#include "fsteiner/tree.hpp"

namespace fsteiner::io {

/// One "x,y" row per point with 17 significant digits, no header.
std::string leaves_csv(const LeafSet& leaves);
std::string leaves_json(const LeafSet& leaves, const IfsParams& params);

std::string tree_json(const TruncatedTree& tree);
/// y axis up, 5% padding, stroke width shrinking with the level.
std::string tree_svg(const TruncatedTree& tree);

/// {"points": [[x, y], ...], "line": {"normal": [nx, ny], "offset": c}}; line optional.
/// Throws std::invalid_argument on malformed input.
TerminalSpec parse_terminal_spec(std::string_view text);
std::string terminal_spec_json(const TerminalSpec& spec);

std::string steiner_json(const SteinerTree& tree, const MinimizerReport& report);
std::string steiner_svg(const SteinerTree& tree, const TerminalSpec& spec);

std::string reports_json(const std::vector<LemmaReport>& reports, const IfsParams& params);
std::string reports_table(const std::vector<LemmaReport>& reports);

/// "lambda,gap" rows of branching_gap(λ, 0) on `steps` evenly spaced values in [lo, hi].
std::string gap_csv(double lo, double hi, int steps);

}  // namespace fsteiner::io

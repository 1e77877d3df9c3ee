#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fsteiner/geom.hpp"
#include "fsteiner/ifs.hpp"
#include "fsteiner/smt.hpp"
#include "fsteiner/tree.hpp"

namespace fsteiner {

/// Reports pass when margin >= -kReportTol (or margin >= 0 for strict checks).
inline constexpr double kReportTol = 1e-9;
/// Largest deviation between solver Steiner points and tree nodes accepted.
inline constexpr double kContractionTol = 1e-7;

struct LemmaReport {
    std::string name;
    double formula_value = 0.0;
    std::optional<double> empirical_value;
    double margin = 0.0;
    bool passed = false;
    /// False for exploratory runs outside the proven λ range.
    bool asserted = true;
    std::string detail;
};

/// Fills in `passed` from the margin.
LemmaReport make_report(std::string name, double formula_value, std::optional<double> empirical_value, double margin,
                        bool strict, bool asserted, std::string detail);

/// 1 + λ/2 - λ²(1+2λ)/(2(1-λ²)): lower bound for dist(Y, A), attained for λ < 1/2.
double dist_root_line(const IfsParams& params);

/// √3λ - √3λ³/(1-λ): lower bound for dist(f_1(A), f_2(A)), attained for λ < 1/2.
double dist_between_branches(const IfsParams& params);

/// Length of the competitor that branches at the line minus the length of
/// the tree, for a line at abscissa d; d cancels. Throws std::invalid_argument unless d < 1.
double branching_gap(const IfsParams& params, double d);

/// Root of branching_gap(λ, 0) in (0.04, 0.05) by bisection to `tol`.
double critical_lambda(double tol = 1e-10);

/// Sum of the signed distances of T from three lines whose unit normals sum
/// to zero. Throws std::invalid_argument if |ν1+ν2+ν3| > 1e-12.
double tripod_sum(const std::array<OrientedLine, 3>& lines, Point t);

/// min over A_N of the x coordinate (distance from Y = {x = 0}).
double empirical_dist_root_line(const IfsParams& params, int depth);
/// min |a - b| over a ∈ f_1(A_N), b ∈ f_2(A_N), by brute force.
double empirical_dist_between_branches(const IfsParams& params, int depth);
/// Same quantity via the mirror symmetry f_2(A) = conj f_1(A): 2 min |y| over f_1(A_N).
double empirical_dist_between_branches_mirror(const IfsParams& params, int depth);

/// Runs the solver on Y ∪ A_N and checks that the first Steiner point T and
/// the foot satisfy |T - T0| <= λ² and |foot.y| <= λ². Requires 2 <= N <= 4.
LemmaReport branch_confinement(const IfsParams& params, int depth);
/// As above for caller-supplied leaves (used to show the check is not vacuous).
LemmaReport branch_confinement(const IfsParams& params, std::span<const Point> leaves, bool asserted);

struct ContractionResult {
    LemmaReport report;
    std::optional<SteinerTree> tree;
    bool topology_matches = false;
    double max_deviation = INFINITY;
};

/// Solves {0} ∪ A_N and matches every Steiner point with the corresponding
/// branch point of the truncated tree. Requires 1 <= N <= 4.
ContractionResult contraction_experiment(const IfsParams& params, int depth);

struct SuiteOptions {
    /// Depth of the leaf sets used by the empirical checks.
    int depth = 12;
    /// Depth N of the solver experiments (2..4).
    int solver_depth = 3;
    std::uint64_t seed = 20240229;
    int tripod_samples = 1000;
};

LemmaReport tripod_report(std::uint64_t seed, int samples);

/// Every quantitative check at one λ.
std::vector<LemmaReport> verification_suite(const IfsParams& params, const SuiteOptions& options = {});

}  // namespace fsteiner

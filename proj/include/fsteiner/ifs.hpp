#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fsteiner/geom.hpp"

namespace fsteiner {

/// Largest word length (and leaf depth) accepted by default.
inline constexpr int kDefaultMaxDepth = 24;

/// Threshold below which the open set condition holds with U = B_R(T0).
inline const double kOscThreshold = 2.0 * kSqrt3 - 3.0;
/// Threshold below which A ⊂ B_λ(P).
inline constexpr double kContainmentThreshold = 0.1;
/// Threshold of the uniqueness theorem.
inline constexpr double kTheoremThreshold = 1.0 / 25.0;

/// Index of one of the two similarities f_1, f_2.
enum class MapIndex : std::uint8_t { one = 1, two = 2 };

/// Contraction ratio λ of the two-map system f_j(z) = 1 + θ_j z, with
/// θ_j = λ e^{(-1)^j iπ/3}, plus the constants derived from it.
class IfsParams {
public:
    /// Throws std::invalid_argument unless 0 < lambda < 1/2.
    explicit IfsParams(double lambda);

    double lambda() const { return lambda_; }
    /// θ_j as a complex number (rotation by ∓60 degrees scaled by λ).
    Point theta(MapIndex j) const { return j == MapIndex::one ? theta1_ : theta2_; }
    /// Centre of the ball containing A: (1 + λ/2, 0).
    Point center_p() const { return {1.0 + lambda_ / 2.0, 0.0}; }
    /// First branching point (1, 0).
    static constexpr Point t0() { return {1.0, 0.0}; }
    /// Radius λ/(1-λ) of the open set U = B_R(T0).
    double osc_radius() const { return lambda_ / (1.0 - lambda_); }

private:
    double lambda_;
    Point theta1_;
    Point theta2_;
};

/// A composition word j_1 j_2 ... j_k over {1, 2}; f_w = f_{j_1} ∘ ... ∘ f_{j_k}.
class Word {
public:
    Word() = default;
    /// Parses a string of '1'/'2' characters.
    explicit Word(std::string letters);

    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    MapIndex operator[](std::size_t i) const { return letters_[i] == '1' ? MapIndex::one : MapIndex::two; }
    Word extended(MapIndex j) const;
    /// The word without its last letter; the empty word maps to itself.
    Word parent() const;
    const std::string& str() const { return letters_; }

    friend auto operator<=>(const Word&, const Word&) = default;

private:
    std::string letters_;
};

Point apply_map(const IfsParams& params, MapIndex j, Point z);
/// f_w(z), innermost letter applied first.
Point apply_word(const IfsParams& params, const Word& word, Point z);

struct LeafSet {
    int level = 0;
    std::vector<Point> points;
};

/// A_N: the 2^{N-1} distinct points f_{j_1}(... f_{j_N}(0)), ordered
/// lexicographically by j_1 ... j_{N-1} (the innermost letter is irrelevant
/// because f_j(0) = 1). Throws std::out_of_range unless 1 <= N <= max_depth.
LeafSet generate_leaves(const IfsParams& params, int depth, int max_depth = kDefaultMaxDepth);

/// Symmetric Hausdorff distance. Throws std::invalid_argument on empty input.
double hausdorff_distance(std::span<const Point> s1, std::span<const Point> s2);

/// Similarity dimension -1/log2(λ).
double hausdorff_dimension(const IfsParams& params);

struct OscReport {
    bool holds = false;
    /// R - (λ + λR): f_j(U) ⊂ U when >= 0 (an identity for this R).
    double invariance_margin = 0.0;
    /// |f_1(T0) - f_2(T0)| - 2λR: f_1(U) ∩ f_2(U) = ∅ when >= 0.
    double disjointness_margin = 0.0;
};

/// Open set condition with U = B_R(T0), R = λ/(1-λ).
OscReport osc_holds(const IfsParams& params);

/// λ - (√3λ/2 + λ²/(1-λ)); positive certifies A ⊂ B_λ(P).
double containment_margin(const IfsParams& params);

/// Which of the three λ thresholds (2√3-3, 1/10, 1/25) are satisfied.
struct LambdaRegime {
    bool osc = false;
    bool containment = false;
    bool theorem = false;
};
LambdaRegime lambda_regime(const IfsParams& params);

}  // namespace fsteiner

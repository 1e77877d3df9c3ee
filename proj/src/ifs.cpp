#include "fsteiner/ifs.hpp"

#include <cmath>
#include <stdexcept>

#include "fsteiner/kernels.hpp"

namespace fsteiner {

IfsParams::IfsParams(double lambda) : lambda_(lambda) {
    if (!std::isfinite(lambda) || !(lambda > 0.0) || !(lambda < 0.5)) {
        throw std::invalid_argument("IfsParams: lambda must lie in (0, 1/2)");
    }
    // (-1)^j: f_1 rotates by -60 degrees, f_2 by +60 degrees
    theta1_ = lambda * unit_vector(-kPi / 3.0);
    theta2_ = lambda * unit_vector(kPi / 3.0);
}

Word::Word(std::string letters) : letters_(std::move(letters)) {
    for (char c : letters_) {
        if (c != '1' && c != '2') {
            throw std::invalid_argument("Word: letters must be '1' or '2'");
        }
    }
}

Word Word::extended(MapIndex j) const {
    Word w = *this;
    w.letters_.push_back(j == MapIndex::one ? '1' : '2');
    return w;
}

Word Word::parent() const {
    Word w = *this;
    if (!w.letters_.empty()) {
        w.letters_.pop_back();
    }
    return w;
}

Point apply_map(const IfsParams& params, MapIndex j, Point z) {
    require_finite(z, "apply_map");
    return Point{1.0, 0.0} + complex_mul(params.theta(j), z);
}

Point apply_word(const IfsParams& params, const Word& word, Point z) {
    for (std::size_t i = word.size(); i-- > 0;) {
        z = apply_map(params, word[i], z);
    }
    return z;
}

LeafSet generate_leaves(const IfsParams& params, int depth, int max_depth) {
    if (depth < 1 || depth > max_depth) {
        throw std::out_of_range("generate_leaves: depth must lie in [1, " + std::to_string(max_depth) + "]");
    }
    return LeafSet{depth, kernels::leaf_points(params, depth)};
}

double hausdorff_distance(std::span<const Point> s1, std::span<const Point> s2) {
    if (s1.empty() || s2.empty()) {
        throw std::invalid_argument("hausdorff_distance: empty point set");
    }
    return std::max(kernels::directed_hausdorff(s1, s2), kernels::directed_hausdorff(s2, s1));
}

double hausdorff_dimension(const IfsParams& params) { return -1.0 / std::log2(params.lambda()); }

OscReport osc_holds(const IfsParams& params) {
    const double lambda = params.lambda();
    const double radius = params.osc_radius();
    const Point t0 = IfsParams::t0();
    OscReport report;
    report.invariance_margin = radius - (lambda + lambda * radius);
    report.disjointness_margin =
        distance(apply_map(params, MapIndex::one, t0), apply_map(params, MapIndex::two, t0)) - 2.0 * lambda * radius;
    // the invariance margin vanishes identically, so only rounding is tolerated
    report.holds = report.invariance_margin >= -kEpsAlgebraic * radius && report.disjointness_margin >= 0.0;
    return report;
}

double containment_margin(const IfsParams& params) {
    const double lambda = params.lambda();
    return lambda - (kSqrt3 * lambda / 2.0 + lambda * lambda / (1.0 - lambda));
}

LambdaRegime lambda_regime(const IfsParams& params) {
    const double lambda = params.lambda();
    return {lambda < kOscThreshold, lambda < kContainmentThreshold, lambda <= kTheoremThreshold};
}

}  // namespace fsteiner

#include <cmath>
#include <limits>

#include "fsteiner/kernels.hpp"

namespace fsteiner::serial {

std::vector<Point> leaf_points(const IfsParams& params, int depth) {
    std::vector<Point> level{{1.0, 0.0}};
    for (int k = 1; k < depth; ++k) {
        std::vector<Point> next;
        next.reserve(2 * level.size());
        for (MapIndex j : {MapIndex::one, MapIndex::two}) {
            for (const Point& z : level) {
                next.push_back(apply_map(params, j, z));
            }
        }
        level = std::move(next);
    }
    return level;
}

double directed_hausdorff(std::span<const Point> from, std::span<const Point> to) {
    double worst = 0.0;
    for (const Point& p : from) {
        double best = std::numeric_limits<double>::infinity();
        for (const Point& q : to) {
            const double dx = p.x - q.x;
            const double dy = p.y - q.y;
            best = std::min(best, dx * dx + dy * dy);
        }
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

double min_cross_distance(std::span<const Point> a, std::span<const Point> b) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& p : a) {
        for (const Point& q : b) {
            const double dx = p.x - q.x;
            const double dy = p.y - q.y;
            best = std::min(best, dx * dx + dy * dy);
        }
    }
    return std::sqrt(best);
}

double max_distance_from(std::span<const Point> pts, Point center) {
    double worst = 0.0;
    for (const Point& p : pts) {
        worst = std::max(worst, distance(p, center));
    }
    return worst;
}

}  // namespace fsteiner::serial

#include "fsteiner/kernels.hpp"

#include <omp.h>

#include <cmath>
#include <cstdint>
#include <limits>

namespace fsteiner {

void set_thread_count(int n) {
    if (n > 0) {
        omp_set_num_threads(n);
    }
}

int thread_count() { return omp_get_max_threads(); }

namespace kernels {

std::vector<Point> leaf_points(const IfsParams& params, int depth) {
    // The leaf of word u = j_1 ... j_{N-1} is f_u(1); level k+1 is f_1(level k)
    // followed by f_2(level k), which keeps lexicographic order.
    std::vector<Point> level{{1.0, 0.0}};
    const Point theta[2] = {params.theta(MapIndex::one), params.theta(MapIndex::two)};
    for (int k = 1; k < depth; ++k) {
        const std::int64_t n = static_cast<std::int64_t>(level.size());
        std::vector<Point> next(2 * level.size());
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < 2 * n; ++i) {
            const Point z = level[i % n];
            next[i] = Point{1.0, 0.0} + complex_mul(theta[i / n], z);
        }
        level = std::move(next);
    }
    return level;
}

double directed_hausdorff(std::span<const Point> from, std::span<const Point> to) {
    const std::int64_t n = static_cast<std::int64_t>(from.size());
    const std::int64_t m = static_cast<std::int64_t>(to.size());
    double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::int64_t j = 0; j < m; ++j) {
            const double dx = from[i].x - to[j].x;
            const double dy = from[i].y - to[j].y;
            best = std::min(best, dx * dx + dy * dy);
        }
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

double min_cross_distance(std::span<const Point> a, std::span<const Point> b) {
    const std::int64_t n = static_cast<std::int64_t>(a.size());
    const std::int64_t m = static_cast<std::int64_t>(b.size());
    double best = std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(min : best) schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t j = 0; j < m; ++j) {
            const double dx = a[i].x - b[j].x;
            const double dy = a[i].y - b[j].y;
            best = std::min(best, dx * dx + dy * dy);
        }
    }
    return std::sqrt(best);
}

double max_distance_from(std::span<const Point> pts, Point center) {
    const std::int64_t n = static_cast<std::int64_t>(pts.size());
    double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        worst = std::max(worst, distance(pts[i], center));
    }
    return worst;
}

}  // namespace kernels

}  // namespace fsteiner

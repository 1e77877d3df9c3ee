#pragma once

// Data-parallel inner loops. The default implementations use OpenMP; the
// `serial` namespace holds straightforward single-threaded references with
// identical results, used by the tests and the benchmark.

#include <span>
#include <vector>

#include "fsteiner/geom.hpp"
#include "fsteiner/ifs.hpp"

namespace fsteiner {

/// Sets the OpenMP thread count; n <= 0 keeps the runtime default.
void set_thread_count(int n);
int thread_count();

namespace kernels {

/// Leaf points of A_depth in lexicographic word order.
std::vector<Point> leaf_points(const IfsParams& params, int depth);
/// max over a in `from` of min over b in `to` of |a - b|.
double directed_hausdorff(std::span<const Point> from, std::span<const Point> to);
/// min over pairs (a, b) of |a - b|.
double min_cross_distance(std::span<const Point> a, std::span<const Point> b);
/// max over p of |p - center|.
double max_distance_from(std::span<const Point> pts, Point center);

}  // namespace kernels

namespace serial {

std::vector<Point> leaf_points(const IfsParams& params, int depth);
double directed_hausdorff(std::span<const Point> from, std::span<const Point> to);
double min_cross_distance(std::span<const Point> a, std::span<const Point> b);
double max_distance_from(std::span<const Point> pts, Point center);

}  // namespace serial

}  // namespace fsteiner

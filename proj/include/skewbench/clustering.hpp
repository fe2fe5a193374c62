#pragma once

#include <cstddef>
#include <vector>

#include "skewbench/core.hpp"

namespace skewbench {

struct ClusterModel {
  PointMatrix centers;
  std::vector<int> assignment;
  double bandwidth = 0.0;

  std::size_t cluster_count() const { return centers.rows(); }
};

inline constexpr double kDefaultQuantile = 0.3;
inline constexpr double kDefaultTolFactor = 1e-4;
inline constexpr std::size_t kDefaultMaxIter = 300;

/// Mean over all points of the distance to their ceil(quantile*(n-1))-th
/// nearest neighbour. Throws Error("zero bandwidth") when every point
/// coincides.
double estimate_bandwidth(const PointMatrix& points, double quantile = kDefaultQuantile);

/// Flat-kernel mean shift.
///
/// Every seed (all points unless `seeds` is given) repeatedly moves to the
/// mean of the points within `bandwidth` until the shift drops below `tol` or
/// `max_iter` is reached. Converged modes are ranked by how many modes lie
/// within bandwidth/2 of them (ties to the lower seed index) and greedily
/// kept when no kept center is closer than bandwidth/2. Points are assigned
/// to the nearest kept center.
ClusterModel mean_shift(const PointMatrix& points, double bandwidth, double tol,
                        std::size_t max_iter, const PointMatrix* seeds = nullptr);

/// estimate_bandwidth followed by mean_shift with tol = 1e-4 * bandwidth.
ClusterModel discover_clusters(const PointMatrix& points, double quantile = kDefaultQuantile);

/// Index of the nearest row of `centers` (ties to the lower index).
std::size_t nearest_center(const PointMatrix& centers, PointView p);

}  // namespace skewbench

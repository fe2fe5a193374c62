#include "skewbench/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace skewbench {

double estimate_bandwidth(const PointMatrix& points, double quantile) {
  const std::size_t n = points.rows();
  if (n < 2) throw Error("estimate_bandwidth: need at least two points");
  if (!(quantile > 0.0 && quantile <= 1.0)) {
    throw Error("estimate_bandwidth: quantile must lie in (0,1]");
  }
  const auto rank = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(quantile * static_cast<double>(n - 1) - 1e-12)));

  std::vector<double> dist(n - 1);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t t = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) dist[t++] = squared_euclidean(points.row(i), points.row(j));
    }
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                     dist.end());
    total += std::sqrt(dist[rank - 1]);
  }
  const double bandwidth = total / static_cast<double>(n);
  if (!(bandwidth > 0.0)) throw Error("zero bandwidth");
  return bandwidth;
}

std::size_t nearest_center(const PointMatrix& centers, PointView p) {
  std::size_t best = 0;
  double best_d = squared_euclidean(centers.row(0), p);
  for (std::size_t j = 1; j < centers.rows(); ++j) {
    const double d = squared_euclidean(centers.row(j), p);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

ClusterModel mean_shift(const PointMatrix& points, double bandwidth, double tol,
                        std::size_t max_iter, const PointMatrix* seeds) {
  if (!(bandwidth > 0.0)) throw Error("mean_shift: bandwidth must be positive");
  if (!(tol > 0.0)) throw Error("mean_shift: tol must be positive");
  if (max_iter < 1) throw Error("mean_shift: max_iter must be at least 1");
  if (points.rows() == 0) throw Error("mean_shift: no points");

  const PointMatrix& start = seeds ? *seeds : points;
  const std::size_t dims = points.dims();
  const std::size_t m = start.rows();
  const double radius_sq = bandwidth * bandwidth;

  PointMatrix modes = start;
  parallel_for(m, worker_threads(), [&](std::size_t s) {
    Point x(modes.row(s).begin(), modes.row(s).end());
    Point mean(dims);
    for (std::size_t iter = 0; iter < max_iter; ++iter) {
      std::fill(mean.begin(), mean.end(), 0.0);
      std::size_t inside = 0;
      for (std::size_t i = 0; i < points.rows(); ++i) {
        const auto p = points.row(i);
        if (squared_euclidean(p, x) <= radius_sq) {
          for (std::size_t k = 0; k < dims; ++k) mean[k] += p[k];
          ++inside;
        }
      }
      if (inside == 0) break;
      for (auto& v : mean) v /= static_cast<double>(inside);
      const double shift = euclidean(mean, x);
      x = mean;
      if (shift < tol) break;
    }
    std::copy(x.begin(), x.end(), modes.row(s).begin());
  });

  const double merge_sq = 0.25 * radius_sq;
  std::vector<std::size_t> attraction(m, 0);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (squared_euclidean(modes.row(a), modes.row(b)) <= merge_sq) ++attraction[a];
    }
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return attraction[a] > attraction[b]; });

  ClusterModel model;
  model.bandwidth = bandwidth;
  model.centers = PointMatrix(dims);
  for (std::size_t s : order) {
    bool separate = true;
    for (std::size_t c = 0; c < model.centers.rows() && separate; ++c) {
      separate = squared_euclidean(model.centers.row(c), modes.row(s)) >= merge_sq;
    }
    if (separate) model.centers.append(modes.row(s));
  }
  model.assignment.resize(points.rows());
  for (std::size_t i = 0; i < points.rows(); ++i) {
    model.assignment[i] = static_cast<int>(nearest_center(model.centers, points.row(i)));
  }
  return model;
}

ClusterModel discover_clusters(const PointMatrix& points, double quantile) {
  const double bandwidth = estimate_bandwidth(points, quantile);
  return mean_shift(points, bandwidth, kDefaultTolFactor * bandwidth, kDefaultMaxIter);
}

}  // namespace skewbench

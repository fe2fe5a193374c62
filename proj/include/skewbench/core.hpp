#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace skewbench {

/// Runtime or data error. The CLI maps it to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Point = std::vector<double>;
using PointView = std::span<const double>;

/// Dense row-major n x d matrix of feature values.
class PointMatrix {
 public:
  PointMatrix() = default;
  explicit PointMatrix(std::size_t dims) : dims_(dims) {}
  PointMatrix(std::size_t dims, std::vector<double> values);

  std::size_t rows() const { return dims_ == 0 ? 0 : values_.size() / dims_; }
  std::size_t dims() const { return dims_; }
  bool empty() const { return values_.empty(); }

  PointView row(std::size_t i) const { return {values_.data() + i * dims_, dims_}; }
  std::span<double> row(std::size_t i) { return {values_.data() + i * dims_, dims_}; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * dims_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * dims_ + j]; }

  void append(PointView p);
  void reserve(std::size_t rows) { values_.reserve(rows * dims_); }

  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const PointMatrix&, const PointMatrix&) = default;

 private:
  std::size_t dims_ = 0;
  std::vector<double> values_;
};

enum class ExampleKind { Safe, Borderline, Rare, Majority };

std::string_view to_string(ExampleKind kind);
std::optional<ExampleKind> parse_kind(std::string_view text);

/// Labelled points with optional per-point provenance tags.
///
/// `kinds` is either empty (no tags) or has one entry per point.
struct Dataset {
  PointMatrix points;
  std::vector<int> labels;
  std::vector<ExampleKind> kinds;

  std::size_t size() const { return labels.size(); }
  std::size_t dims() const { return points.dims(); }
  bool has_kinds() const { return !kinds.empty(); }

  /// Throws Error when shapes disagree, d == 0, a label is negative or a
  /// value is not finite.
  void validate() const;

  /// Copies row i of `src` to the end of this dataset.
  void append_row(const Dataset& src, std::size_t i);
  Dataset subset(std::span<const std::size_t> rows) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct ClassSummary {
  std::map<int, std::size_t> counts;
  int minority_label = 0;
  int majority_label = 0;
  double imbalance_ratio = 1.0;

  std::size_t minority_count() const { return counts.at(minority_label); }
  std::size_t majority_count() const { return counts.at(majority_label); }
};

/// Class counts and roles, recomputed from the labels every time.
///
/// Minority is the strictly smallest count, ties going to the lowest label.
/// Majority is the largest count among the remaining labels (ties to the
/// lowest label). Throws Error("degenerate class structure") for fewer than
/// two labels.
ClassSummary summarize(const Dataset& ds);
ClassSummary summarize(std::span<const int> labels);

double euclidean(PointView a, PointView b);
double squared_euclidean(PointView a, PointView b);

/// Exact k nearest neighbours of `query` among the rows of `train`, ordered
/// by ascending distance with ties broken by ascending row index. The row
/// `exclude`, if given, is skipped.
std::vector<std::size_t> knn_indices(const PointMatrix& train, PointView query, std::size_t k,
                                     std::optional<std::size_t> exclude = std::nullopt);
std::vector<std::size_t> knn_indices(const Dataset& train, PointView query, std::size_t k,
                                     std::optional<std::size_t> exclude = std::nullopt);

/// Worker count from SKEWBENCH_THREADS (unset or 0 = hardware concurrency).
std::size_t worker_threads();

/// Runs fn(i) for i in [0, n) on up to `threads` workers. fn must only write
/// to slots owned by i, so results do not depend on scheduling.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

}  // namespace skewbench

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skewbench/classify.hpp"
#include "skewbench/core.hpp"
#include "skewbench/datagen.hpp"
#include "skewbench/resample.hpp"

namespace skewbench {

/// Counts with "positive" = minority class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct Metrics {
  double sensitivity = 0.0;
  double specificity = 0.0;
  double accuracy = 0.0;
  double gmean = 0.0;
  double auc = 0.0;
};

inline constexpr std::string_view kMetricNames[] = {"sensitivity", "specificity", "accuracy",
                                                    "gmean", "auc"};
double metric_value(const Metrics& m, std::string_view name);

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> pred, int minority);

/// All metrics except auc (left at 0). Throws Error("fold lacks a class") if
/// either class is absent.
Metrics metrics_from(const ConfusionMatrix& cm);

/// Mann-Whitney rank statistic with tied scores counted one half. Throws
/// Error unless both classes are present.
double auc(std::span<const double> scores, std::span<const int> truth, int minority);

/// Fold index per row: each class is shuffled and dealt round-robin, the
/// dealing position carrying over from one class to the next.
std::vector<std::size_t> stratified_kfold(std::span<const int> labels, std::size_t folds,
                                          std::uint64_t seed);

enum class ClassifierKind { Knn, Tree };

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::Knn;
  std::size_t k = 3;
  std::size_t max_depth = 12;
  std::size_t min_leaf = 2;
};

std::string classifier_name(const ClassifierSpec& spec);
std::optional<ClassifierSpec> parse_classifier(std::string_view name);

/// Mean and sample standard deviation (n - 1 denominator, 0 for one sample).
struct MetricStats {
  Metrics mean;
  Metrics stddev;
};
MetricStats aggregate(std::span<const Metrics> samples);

/// Fits on `train`, predicts every row of `test`, scores with `roles.minority`
/// as the positive class. Roles come from the data before resampling.
Metrics fit_and_score(const Dataset& train, const Dataset& test, const ClassifierSpec& spec,
                      const ClassRoles& roles);

/// What the runner saw in one fold for one method, for auditing.
struct FoldView {
  std::size_t fold = 0;
  std::string method;
  std::span<const std::size_t> test_rows;
  const Dataset* test = nullptr;
  const Dataset* train = nullptr;
  const Dataset* resampled_train = nullptr;
};
using FoldObserver = std::function<void(const FoldView&)>;

/// Metrics for every (method, classifier, fold), laid out
/// [method][classifier][fold].
struct CrossValidation {
  std::size_t methods = 0;
  std::size_t classifiers = 0;
  std::size_t folds = 0;
  std::vector<Metrics> results;

  const Metrics& at(std::size_t m, std::size_t c, std::size_t f) const {
    return results[(m * classifiers + c) * folds + f];
  }
};

/// Stratified k-fold evaluation. Resampling touches the training part of
/// each fold only; test folds keep the original rows. `clusters` (one id per
/// row) is restricted to the training rows and handed to the resampler.
CrossValidation cross_validate(const Dataset& ds, std::optional<ClusterIds> clusters,
                               std::span<const ResampleMethod> methods,
                               std::span<const ClassifierSpec> classifiers, std::size_t folds,
                               const Rng& rng, const FoldObserver& observer = {});

struct GeneratorGrid {
  std::vector<std::size_t> subclusters{3};
  std::vector<std::size_t> sizes{400};
  std::vector<ClassRatio> ratios{ClassRatio{}};
  std::vector<double> disturbances{0.0};

  std::size_t cell_count() const {
    return subclusters.size() * sizes.size() * ratios.size() * disturbances.size();
  }
};

struct ExperimentSpec {
  /// Template for every cell; the grid overrides sub-cluster count, size,
  /// ratio and disturbance, and seeds are derived per cell and repeat.
  GenSpec base;
  GeneratorGrid grid;
  std::vector<ResampleMethod> methods{Base{}};
  std::vector<ClassifierSpec> classifiers{ClassifierSpec{}};
  std::size_t folds = 5;
  std::size_t repeats = 10;
  std::uint64_t seed = 1;
  /// Worker threads; 0 = worker_threads().
  std::size_t threads = 0;

  void validate() const;
};

struct Cell {
  std::size_t index = 0;
  std::size_t subclusters = 0;
  std::size_t n_samples = 0;
  ClassRatio ratio;
  double disturbance = 0.0;
};

/// Cells in grid order: sub-clusters outermost, then sizes, ratios,
/// disturbances.
std::vector<Cell> expand_grid(const GeneratorGrid& grid);

/// Generator recipe for one (cell, repeat) work unit.
GenSpec cell_spec(const ExperimentSpec& spec, const Cell& cell, std::size_t repeat);

struct ReportRow {
  Cell cell;
  std::string method;
  std::string classifier;
  std::size_t runs = 0;
  Metrics mean;
  Metrics stddev;
  std::string error;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  std::size_t error_count = 0;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every (cell, repeat) unit, in parallel when allowed, and aggregates
/// mean and sample standard deviation over folds x repeats. A failing cell
/// produces rows carrying the error text. Output does not depend on the
/// thread count.
ExperimentReport run_experiment(const ExperimentSpec& spec, const ProgressFn& progress = {});

}  // namespace skewbench

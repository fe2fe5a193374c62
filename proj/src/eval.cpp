#include "skewbench/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>

namespace skewbench {

double metric_value(const Metrics& m, std::string_view name) {
  if (name == "sensitivity") return m.sensitivity;
  if (name == "specificity") return m.specificity;
  if (name == "accuracy") return m.accuracy;
  if (name == "gmean") return m.gmean;
  if (name == "auc") return m.auc;
  throw Error("unknown metric: " + std::string(name));
}

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> pred, int minority) {
  if (truth.size() != pred.size()) throw Error("confusion: length mismatch");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool positive = truth[i] == minority;
    const bool predicted_positive = pred[i] == minority;
    if (positive) {
      ++(predicted_positive ? cm.tp : cm.fn);
    } else {
      ++(predicted_positive ? cm.fp : cm.tn);
    }
  }
  return cm;
}

Metrics metrics_from(const ConfusionMatrix& cm) {
  const std::size_t positives = cm.tp + cm.fn;
  const std::size_t negatives = cm.tn + cm.fp;
  if (positives == 0 || negatives == 0) throw Error("fold lacks a class");
  Metrics m;
  m.sensitivity = static_cast<double>(cm.tp) / static_cast<double>(positives);
  m.specificity = static_cast<double>(cm.tn) / static_cast<double>(negatives);
  m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(positives + negatives);
  m.gmean = std::sqrt(m.sensitivity * m.specificity);
  return m;
}

double auc(std::span<const double> scores, std::span<const int> truth, int minority) {
  if (scores.size() != truth.size()) throw Error("auc: length mismatch");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Tied scores share their mid-rank, which counts each tied pair as 1/2.
  double positive_rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t lo = 0; lo < n;) {
    std::size_t hi = lo + 1;
    while (hi < n && scores[order[hi]] == scores[order[lo]]) ++hi;
    const double mid_rank = 0.5 * static_cast<double>(lo + 1 + hi);
    for (std::size_t t = lo; t < hi; ++t) {
      if (truth[order[t]] == minority) {
        positive_rank_sum += mid_rank;
        ++positives;
      }
    }
    lo = hi;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) throw Error("auc: both classes must be present");
  const double p = static_cast<double>(positives);
  const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

std::vector<std::size_t> stratified_kfold(std::span<const int> labels, std::size_t folds,
                                          std::uint64_t seed) {
  if (folds < 2) throw Error("stratified_kfold: folds must be at least 2");
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  for (const auto& [label, rows] : by_class) {
    if (rows.size() < folds) {
      throw Error("stratified_kfold: class " + std::to_string(label) + " has fewer rows (" +
                  std::to_string(rows.size()) + ") than folds");
    }
  }
  Rng rng(seed);
  std::vector<std::size_t> fold_of(labels.size(), 0);
  std::size_t dealt = 0;
  for (auto& [label, rows] : by_class) {
    for (std::size_t t = rows.size(); t > 1; --t) std::swap(rows[t - 1], rows[rng.index(t)]);
    for (std::size_t i : rows) fold_of[i] = dealt++ % folds;
  }
  return fold_of;
}

std::string classifier_name(const ClassifierSpec& spec) {
  return spec.kind == ClassifierKind::Knn ? "knn" : "tree";
}

std::optional<ClassifierSpec> parse_classifier(std::string_view name) {
  if (name == "knn") return ClassifierSpec{ClassifierKind::Knn};
  if (name == "tree") return ClassifierSpec{ClassifierKind::Tree};
  return std::nullopt;
}

Metrics fit_and_score(const Dataset& train, const Dataset& test, const ClassifierSpec& spec,
                      const ClassRoles& roles) {
  std::vector<int> predicted(test.size());
  std::vector<double> scores(test.size());
  if (spec.kind == ClassifierKind::Knn) {
    const KnnModel model = knn_fit(train, std::min(spec.k, train.size()), roles);
    for (std::size_t i = 0; i < test.size(); ++i) {
      const auto p = knn_predict(model, test.points.row(i));
      predicted[i] = p.label;
      scores[i] = p.score;
    }
  } else {
    const TreeModel model = tree_fit(train, spec.max_depth, spec.min_leaf, roles);
    for (std::size_t i = 0; i < test.size(); ++i) {
      const auto p = tree_predict(model, test.points.row(i));
      predicted[i] = p.label;
      scores[i] = p.score;
    }
  }
  Metrics m = metrics_from(confusion(test.labels, predicted, roles.minority));
  m.auc = auc(scores, test.labels, roles.minority);
  return m;
}

CrossValidation cross_validate(const Dataset& ds, std::optional<ClusterIds> clusters,
                               std::span<const ResampleMethod> methods,
                               std::span<const ClassifierSpec> classifiers, std::size_t folds,
                               const Rng& rng, const FoldObserver& observer) {
  const ClassSummary summary = summarize(ds);
  const ClassRoles roles{summary.minority_label, summary.majority_label};
  const auto fold_of = stratified_kfold(ds.labels, folds, rng.child("folds").seed());

  CrossValidation cv;
  cv.methods = methods.size();
  cv.classifiers = classifiers.size();
  cv.folds = folds;
  cv.results.resize(cv.methods * cv.classifiers * folds);

  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t i = 0; i < ds.size(); ++i) (fold_of[i] == f ? test_rows : train_rows).push_back(i);
    const Dataset train = ds.subset(train_rows);
    const Dataset test = ds.subset(test_rows);
    std::vector<int> train_clusters;
    if (clusters) {
      train_clusters.reserve(train_rows.size());
      for (std::size_t i : train_rows) train_clusters.push_back((*clusters)[i]);
    }
    for (std::size_t m = 0; m < methods.size(); ++m) {
      const std::string name = method_name(methods[m]);
      Rng method_rng = rng.child("resample-" + name, f);
      const Dataset resampled =
          apply_method(train, methods[m], method_rng,
                       clusters ? std::optional<ClusterIds>(train_clusters) : std::nullopt);
      if (observer) observer(FoldView{f, name, test_rows, &test, &train, &resampled});
      for (std::size_t c = 0; c < classifiers.size(); ++c) {
        cv.results[(m * cv.classifiers + c) * folds + f] =
            fit_and_score(resampled, test, classifiers[c], roles);
      }
    }
  }
  return cv;
}

void ExperimentSpec::validate() const {
  if (grid.cell_count() == 0) throw Error("experiment: generator grid is empty");
  if (methods.empty()) throw Error("experiment: no methods");
  if (classifiers.empty()) throw Error("experiment: no classifiers");
  if (folds < 2) throw Error("experiment: folds must be at least 2");
  if (repeats < 1) throw Error("experiment: repeats must be at least 1");
  for (const auto& m : methods) validate_method(m);
  for (const auto& cell : expand_grid(grid)) cell_spec(*this, cell, 0).validate();
}

std::vector<Cell> expand_grid(const GeneratorGrid& grid) {
  std::vector<Cell> cells;
  for (auto sub : grid.subclusters) {
    for (auto n : grid.sizes) {
      for (const auto& ratio : grid.ratios) {
        for (double disturbance : grid.disturbances) {
          cells.push_back({cells.size(), sub, n, ratio, disturbance});
        }
      }
    }
  }
  return cells;
}

GenSpec cell_spec(const ExperimentSpec& spec, const Cell& cell, std::size_t repeat) {
  GenSpec g = spec.base;
  g.minority_subclusters = cell.subclusters;
  g.n_samples = cell.n_samples;
  g.class_ratio = cell.ratio;
  g.disturbance_ratio = cell.disturbance;
  g.safe_fraction.reset();
  g.seed = derive_seed(derive_seed(spec.seed, "cell", cell.index), "repeat", repeat);
  return g;
}

namespace {

struct UnitResult {
  CrossValidation cv;
  std::string error;
};

}  // namespace

MetricStats aggregate(std::span<const Metrics> samples) {
  MetricStats out;
  if (samples.empty()) return out;
  const double n = static_cast<double>(samples.size());
  auto field = [](Metrics& m, std::size_t k) -> double& {
    switch (k) {
      case 0: return m.sensitivity;
      case 1: return m.specificity;
      case 2: return m.accuracy;
      case 3: return m.gmean;
      default: return m.auc;
    }
  };
  for (std::size_t k = 0; k < std::size(kMetricNames); ++k) {
    double sum = 0.0;
    for (Metrics s : samples) sum += field(s, k);
    const double mean = sum / n;
    double sq = 0.0;
    for (Metrics s : samples) sq += (field(s, k) - mean) * (field(s, k) - mean);
    field(out.mean, k) = mean;
    field(out.stddev, k) = n > 1 ? std::sqrt(sq / (n - 1)) : 0.0;
  }
  return out;
}

ExperimentReport run_experiment(const ExperimentSpec& spec, const ProgressFn& progress) {
  spec.validate();
  const auto cells = expand_grid(spec.grid);
  const std::size_t units = cells.size() * spec.repeats;
  std::vector<UnitResult> results(units);
  std::mutex progress_mutex;
  std::size_t done = 0;

  parallel_for(units, spec.threads == 0 ? worker_threads() : spec.threads, [&](std::size_t u) {
    const Cell& cell = cells[u / spec.repeats];
    const std::size_t repeat = u % spec.repeats;
    try {
      const GenSpec g = cell_spec(spec, cell, repeat);
      const Generated gen = generate_imbalanced(g);
      results[u].cv = cross_validate(gen.data, ClusterIds(gen.truth.subcluster), spec.methods,
                                     spec.classifiers, spec.folds, Rng(g.seed).child("cv"));
    } catch (const std::exception& e) {
      results[u].error = e.what();
    }
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(++done, units);
    }
  });

  ExperimentReport report;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const Cell& cell : cells) {
    std::string error;
    for (std::size_t r = 0; r < spec.repeats && error.empty(); ++r) {
      error = results[cell.index * spec.repeats + r].error;
    }
    if (!error.empty()) ++report.error_count;
    for (std::size_t m = 0; m < spec.methods.size(); ++m) {
      for (std::size_t c = 0; c < spec.classifiers.size(); ++c) {
        ReportRow row;
        row.cell = cell;
        row.method = method_name(spec.methods[m]);
        row.classifier = classifier_name(spec.classifiers[c]);
        row.error = error;
        if (!error.empty()) {
          row.mean = row.stddev = Metrics{nan, nan, nan, nan, nan};
          report.rows.push_back(std::move(row));
          continue;
        }
        std::vector<Metrics> samples;
        for (std::size_t r = 0; r < spec.repeats; ++r) {
          const auto& cv = results[cell.index * spec.repeats + r].cv;
          for (std::size_t f = 0; f < spec.folds; ++f) samples.push_back(cv.at(m, c, f));
        }
        const MetricStats stats = aggregate(samples);
        row.mean = stats.mean;
        row.stddev = stats.stddev;
        row.runs = samples.size();
        report.rows.push_back(std::move(row));
      }
    }
  }
  return report;
}

}  // namespace skewbench

#include "skewbench/core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>

namespace skewbench {

PointMatrix::PointMatrix(std::size_t dims, std::vector<double> values)
    : dims_(dims), values_(std::move(values)) {
  if (dims_ == 0 || values_.size() % dims_ != 0) {
    throw Error("point matrix: value count is not a multiple of the dimension");
  }
}

void PointMatrix::append(PointView p) {
  if (p.size() != dims_) throw Error("point matrix: dimension mismatch on append");
  values_.insert(values_.end(), p.begin(), p.end());
}

std::string_view to_string(ExampleKind kind) {
  switch (kind) {
    case ExampleKind::Safe:
      return "safe";
    case ExampleKind::Borderline:
      return "borderline";
    case ExampleKind::Rare:
      return "rare";
    case ExampleKind::Majority:
      return "majority";
  }
  return "?";
}

std::optional<ExampleKind> parse_kind(std::string_view text) {
  if (text == "safe") return ExampleKind::Safe;
  if (text == "borderline") return ExampleKind::Borderline;
  if (text == "rare") return ExampleKind::Rare;
  if (text == "majority") return ExampleKind::Majority;
  return std::nullopt;
}

void Dataset::validate() const {
  if (points.dims() == 0) throw Error("dataset: dimension must be at least 1");
  if (points.rows() != labels.size()) throw Error("dataset: point and label counts differ");
  if (!kinds.empty() && kinds.size() != labels.size()) {
    throw Error("dataset: kind tag count differs from label count");
  }
  for (int label : labels) {
    if (label < 0) throw Error("dataset: labels must be nonnegative");
  }
  for (double v : points.values()) {
    if (!std::isfinite(v)) throw Error("dataset: non-finite feature value");
  }
}

void Dataset::append_row(const Dataset& src, std::size_t i) {
  if (points.dims() == 0 && points.empty()) points = PointMatrix(src.dims());
  points.append(src.points.row(i));
  labels.push_back(src.labels[i]);
  if (src.has_kinds()) kinds.push_back(src.kinds[i]);
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.points = PointMatrix(dims());
  out.points.reserve(rows.size());
  out.labels.reserve(rows.size());
  for (std::size_t i : rows) out.append_row(*this, i);
  return out;
}

ClassSummary summarize(std::span<const int> labels) {
  ClassSummary s;
  for (int label : labels) ++s.counts[label];
  if (s.counts.size() < 2) throw Error("degenerate class structure");

  // std::map iterates labels in ascending order, so strict comparisons keep
  // the lowest label on ties.
  auto minority = s.counts.begin();
  for (auto it = s.counts.begin(); it != s.counts.end(); ++it) {
    if (it->second < minority->second) minority = it;
  }
  auto majority = s.counts.end();
  for (auto it = s.counts.begin(); it != s.counts.end(); ++it) {
    if (it == minority) continue;
    if (majority == s.counts.end() || it->second > majority->second) majority = it;
  }
  s.minority_label = minority->first;
  s.majority_label = majority->first;
  s.imbalance_ratio =
      static_cast<double>(majority->second) / static_cast<double>(minority->second);
  return s;
}

ClassSummary summarize(const Dataset& ds) { return summarize(std::span<const int>(ds.labels)); }

double squared_euclidean(PointView a, PointView b) {
  if (a.size() != b.size()) throw Error("euclidean: dimension mismatch");
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    sum += diff * diff;
  }
  return sum;
}

double euclidean(PointView a, PointView b) { return std::sqrt(squared_euclidean(a, b)); }

std::vector<std::size_t> knn_indices(const PointMatrix& train, PointView query, std::size_t k,
                                     std::optional<std::size_t> exclude) {
  const std::size_t n = train.rows();
  const std::size_t usable = (exclude && *exclude < n) ? n - 1 : n;
  if (k == 0) throw Error("knn: k must be at least 1");
  if (k > usable) throw Error("knn: k exceeds the number of usable training points");
  if (query.size() != train.dims()) throw Error("euclidean: dimension mismatch");

  // Squared distances give the same order as distances and keep ties exact.
  std::vector<std::pair<double, std::size_t>> cand;
  cand.reserve(usable);
  for (std::size_t i = 0; i < n; ++i) {
    if (exclude && *exclude == i) continue;
    cand.emplace_back(squared_euclidean(train.row(i), query), i);
  }
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());

  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = cand[i].second;
  return out;
}

std::vector<std::size_t> knn_indices(const Dataset& train, PointView query, std::size_t k,
                                     std::optional<std::size_t> exclude) {
  return knn_indices(train.points, query, k, exclude);
}

std::size_t worker_threads() {
  if (const char* env = std::getenv("SKEWBENCH_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace {
thread_local bool in_worker = false;
}  // namespace

void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
  threads = std::min(std::max<std::size_t>(threads, 1), n);
  // Nested regions run inline on the calling worker.
  if (threads <= 1 || in_worker) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      in_worker = true;
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& worker : pool) worker.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace skewbench

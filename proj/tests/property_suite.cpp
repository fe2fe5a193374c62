// Randomized property checks, runnable on their own. Prints one line per
// property and exits nonzero on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "skewbench/eval.hpp"
#include "skewbench/resample.hpp"

using namespace skewbench;

namespace {

constexpr int kCasesPerProperty = 250;

struct P2 {
  double x, y;
  bool operator<(const P2& o) const { return x < o.x || (x == o.x && y < o.y); }
};

double cross(const P2& o, const P2& a, const P2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

/// Andrew's monotone chain; counter-clockwise, no repeated endpoint.
std::vector<P2> hull(std::vector<P2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const P2& a, const P2& b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  if (pts.size() < 3) return pts;
  std::vector<P2> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

bool inside(const std::vector<P2>& h, const P2& p, double eps) {
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto& a = h[i];
    const auto& b = h[(i + 1) % h.size()];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (cross(a, b, p) < -eps * len) return false;
  }
  return true;
}

/// Returns an empty string on success, otherwise a description.
using Property = std::function<std::string(Rng&)>;

std::string smote_hull(Rng& rng) {
  const std::size_t minority = 3 + rng.index(28);
  auto ds = oracle::random_dataset(rng, minority * 3, 2, 0, 0.0);
  for (std::size_t i = 0; i < minority; ++i) ds.labels[i] = 1;
  const std::size_t k = 1 + rng.index(std::min<std::size_t>(minority - 1, 6));
  const int amount = 100 * static_cast<int>(1 + rng.index(3));
  const auto out = smote(ds, k, amount, rng);
  std::vector<P2> pts;
  for (std::size_t i = 0; i < minority; ++i) pts.push_back({ds.points(i, 0), ds.points(i, 1)});
  const auto h = hull(pts);
  if (out.size() != ds.size() + minority * static_cast<std::size_t>(amount / 100)) return "count";
  for (std::size_t i = ds.size(); i < out.size(); ++i) {
    if (out.labels[i] != 1) return "label";
    if (!inside(h, {out.points(i, 0), out.points(i, 1)}, 1e-9)) return "outside hull";
  }
  return {};
}

std::string sparsity_scaling(Rng& rng) {
  const std::size_t n = 20 + rng.index(60);
  const std::size_t dims = 1 + rng.index(3);
  auto ds = oracle::random_dataset(rng, n, dims, 0, 0.4);
  ds.labels[0] = 0;
  ds.labels[1] = 1;
  const int clusters = 1 + static_cast<int>(rng.index(3));
  std::vector<int> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<int>(i % static_cast<std::size_t>(clusters));
  // Ids must be contiguous within each class; the first 2 * clusters rows
  // alternate labels so every id appears in both classes.
  for (std::size_t i = 0; i < std::min<std::size_t>(n, 2 * static_cast<std::size_t>(clusters)); ++i) {
    ds.labels[i] = static_cast<int>((i / static_cast<std::size_t>(clusters)) % 2);
  }
  const auto scope = rng.bernoulli(0.5) ? SparsityScope::BothClasses : SparsityScope::MinorityOnly;
  if (!(sparsity(ds, 1.0, scope, ClusterIds(ids)) == ds)) return "alpha=1 changed data";

  const double alpha = 1.0 + 2.0 * rng.uniform();
  const auto out = sparsity(ds, alpha, SparsityScope::BothClasses, ClusterIds(ids));
  if (out.labels != ds.labels) return "labels changed";
  for (int label : {0, 1}) {
    for (int id = 0; id < clusters; ++id) {
      for (std::size_t j = 0; j < dims; ++j) {
        double cnt = 0, m0 = 0, m1 = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (ds.labels[i] != label || ids[i] != id) continue;
          cnt += 1;
          m0 += ds.points(i, j);
          m1 += out.points(i, j);
        }
        if (cnt < 2) continue;
        m0 /= cnt;
        m1 /= cnt;
        if (std::abs(m1 - m0) > 1e-9) return "mean moved";
        double v0 = 0, v1 = 0;
        for (std::size_t i = 0; i < n; ++i) {
          if (ds.labels[i] != label || ids[i] != id) continue;
          v0 += (ds.points(i, j) - m0) * (ds.points(i, j) - m0);
          v1 += (out.points(i, j) - m1) * (out.points(i, j) - m1);
        }
        if (std::abs(v1 - alpha * alpha * v0) > 1e-9 * std::max(1.0, v1)) return "variance";
      }
    }
  }
  return {};
}

std::string fold_bounds(Rng& rng) {
  const std::size_t folds = 2 + rng.index(9);
  const std::size_t classes = 2 + rng.index(2);
  std::vector<int> labels;
  for (std::size_t c = 0; c < classes; ++c) {
    labels.insert(labels.end(), folds + rng.index(80), static_cast<int>(c));
  }
  for (std::size_t i = labels.size() - 1; i > 0; --i) std::swap(labels[i], labels[rng.index(i + 1)]);
  const auto f = stratified_kfold(labels, folds, rng.next_u64());
  if (f.size() != labels.size()) return "size";
  std::vector<std::vector<std::size_t>> sizes(classes, std::vector<std::size_t>(folds, 0));
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] >= folds) return "fold index";
    sizes[static_cast<std::size_t>(labels[i])][f[i]] += 1;
  }
  for (const auto& s : sizes) {
    const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    if (*hi - *lo > 1) return "unbalanced fold";
  }
  return {};
}

bool same_row(const Dataset& a, std::size_t i, const Dataset& b, std::size_t j) {
  return a.labels[i] == b.labels[j] &&
         std::equal(a.points.row(i).begin(), a.points.row(i).end(), b.points.row(j).begin());
}

std::string training_only(Rng& rng) {
  GenSpec g;
  g.n_samples = 60 + rng.index(60);
  g.class_ratio = {static_cast<int>(2 + rng.index(4)), 1};
  g.minority_subclusters = 1 + rng.index(2);
  g.disturbance_ratio = 0.3 * rng.uniform();
  g.seed = rng.next_u64();
  const auto gen = generate_imbalanced(g);
  const std::vector<ResampleMethod> all{RandomOversampling{}, ClusterOversampling{}, Smote{3, 100},
                                        Ncr{}, Sparsity{}};
  const std::vector<ResampleMethod> methods{all[rng.index(all.size())]};
  const std::vector<ClassifierSpec> classifiers{ClassifierSpec{}};
  const std::size_t folds = 2 + rng.index(3);
  std::string failure;
  std::size_t calls = 0;
  cross_validate(gen.data, ClusterIds(gen.truth.subcluster), methods, classifiers, folds,
                 Rng(rng.next_u64()), [&](const FoldView& v) {
                   calls += 1;
                   if (!failure.empty()) return;
                   for (std::size_t t = 0; t < v.test_rows.size(); ++t) {
                     if (!same_row(gen.data, v.test_rows[t], *v.test, t)) failure = "test row altered";
                   }
                   if (v.train->size() + v.test->size() != gen.data.size()) failure = "split size";
                   for (std::size_t r = 0; r < v.resampled_train->size() && failure.empty(); ++r) {
                     for (std::size_t t = 0; t < v.test->size(); ++t) {
                       if (same_row(*v.resampled_train, r, *v.test, t)) {
                         failure = "test row leaked into " + v.method;
                         break;
                       }
                     }
                   }
                 });
  if (failure.empty() && calls != folds) failure = "observer saw " + std::to_string(calls) + " folds";
  return failure;
}

}  // namespace

int main() {
  const std::pair<const char*, Property> properties[] = {
      {"smote synthetics inside the minority convex hull", smote_hull},
      {"sparsity identity at alpha 1 and alpha^2 variance scaling", sparsity_scaling},
      {"stratified fold size bounds and partition", fold_bounds},
      {"resampling confined to training folds", training_only},
  };
  const auto start = std::chrono::steady_clock::now();
  Rng root(20240601);
  int total = 0, failed = 0;
  for (std::size_t p = 0; p < std::size(properties); ++p) {
    const auto& [name, check] = properties[p];
    int bad = 0;
    std::string first;
    for (int c = 0; c < kCasesPerProperty; ++c) {
      Rng rng = root.child(name, static_cast<std::uint64_t>(c));
      std::string why;
      try {
        why = check(rng);
      } catch (const std::exception& e) {
        why = std::string("threw: ") + e.what();
      }
      if (!why.empty()) {
        if (bad++ == 0) first = "case " + std::to_string(c) + ": " + why;
      }
    }
    total += kCasesPerProperty;
    failed += bad;
    std::printf("%s %s (%d/%d)%s%s\n", bad ? "FAIL" : "PASS", name, kCasesPerProperty - bad,
                kCasesPerProperty, bad ? " first " : "", first.c_str());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d cases, %d failures, %.2f s\n", total, failed, secs);
  return failed == 0 ? 0 : 1;
}

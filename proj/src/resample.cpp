#include "skewbench/resample.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "skewbench/clustering.hpp"

namespace skewbench {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<std::size_t> rows_with_label(const Dataset& ds, int label) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.labels[i] == label) rows.push_back(i);
  }
  return rows;
}

/// Sub-cluster id per entry of `rows`, either read from `clusters` or found
/// by mean shift on those rows.
std::vector<int> class_clusters(const Dataset& ds, const std::vector<std::size_t>& rows,
                                std::optional<ClusterIds> clusters) {
  std::vector<int> ids(rows.size(), 0);
  if (clusters) {
    if (clusters->size() != ds.size()) throw Error("cluster ids must cover every row");
    for (std::size_t t = 0; t < rows.size(); ++t) ids[t] = (*clusters)[rows[t]];
    return ids;
  }
  if (rows.size() < 2) return ids;
  const PointMatrix sub = ds.subset(rows).points;
  try {
    return discover_clusters(sub).assignment;
  } catch (const Error&) {
    // All points coincide: one cluster.
    return ids;
  }
}

/// Groups positions 0..ids.size()-1 by id; ids must be 0..m-1 with no gaps.
std::vector<std::vector<std::size_t>> group_by_id(const std::vector<int>& ids) {
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t t = 0; t < ids.size(); ++t) {
    if (ids[t] < 0) throw Error("negative sub-cluster id");
    const auto id = static_cast<std::size_t>(ids[t]);
    if (id >= groups.size()) groups.resize(id + 1);
    groups[id].push_back(t);
  }
  for (const auto& g : groups) {
    if (g.empty()) throw Error("empty sub-cluster");
  }
  return groups;
}

}  // namespace

std::string method_name(const ResampleMethod& method) {
  return std::visit(Overloaded{
                        [](const Base&) { return "base"; },
                        [](const RandomOversampling&) { return "ro"; },
                        [](const ClusterOversampling&) { return "co"; },
                        [](const Smote&) { return "smote"; },
                        [](const Ncr&) { return "ncr"; },
                        [](const Sparsity&) { return "sparsity"; },
                    },
                    method);
}

std::optional<ResampleMethod> parse_method(std::string_view name) {
  if (name == "base") return Base{};
  if (name == "ro") return RandomOversampling{};
  if (name == "co") return ClusterOversampling{};
  if (name == "smote") return Smote{};
  if (name == "ncr") return Ncr{};
  if (name == "sparsity") return Sparsity{};
  return std::nullopt;
}

void validate_method(const ResampleMethod& method) {
  std::visit(Overloaded{
                 [](const Smote& m) {
                   if (m.k < 1) throw Error("smote: k must be at least 1");
                   if (m.amount_pct < 0 || m.amount_pct % 100 != 0) {
                     throw Error("smote: amount must be a nonnegative multiple of 100");
                   }
                 },
                 [](const Ncr& m) {
                   if (m.k < 1) throw Error("ncr: k must be at least 1");
                 },
                 [](const Sparsity& m) {
                   if (!(m.alpha >= 1.0)) throw Error("sparsity: alpha must be >= 1");
                 },
                 [](const auto&) {},
             },
             method);
}

Dataset random_oversample(const Dataset& ds, Rng& rng) {
  const ClassSummary s = summarize(ds);
  const auto minority = rows_with_label(ds, s.minority_label);
  Dataset out = ds;
  const std::size_t needed = s.majority_count() - s.minority_count();
  for (std::size_t t = 0; t < needed; ++t) {
    out.append_row(ds, minority[rng.index(minority.size())]);
  }
  return out;
}

Dataset cluster_oversample(const Dataset& ds, std::optional<ClusterIds> clusters, Rng& rng) {
  const ClassSummary s = summarize(ds);
  const auto minority = rows_with_label(ds, s.minority_label);
  const auto groups = group_by_id(class_clusters(ds, minority, clusters));

  const std::size_t majority = s.majority_count();
  const std::size_t target = (majority + groups.size() - 1) / groups.size();
  std::vector<std::size_t> duplicates;
  for (const auto& g : groups) {
    for (std::size_t size = g.size(); size < target; ++size) {
      duplicates.push_back(minority[g[rng.index(g.size())]]);
    }
  }

  // Every group reaches ceil(majority / m), so the total never falls short.
  const std::size_t surplus = minority.size() + duplicates.size() - majority;
  std::vector<char> dropped(duplicates.size(), 0);
  std::vector<std::size_t> slots(duplicates.size());
  std::iota(slots.begin(), slots.end(), 0);
  for (std::size_t t = 0; t < surplus; ++t) {
    std::swap(slots[t], slots[t + rng.index(slots.size() - t)]);
    dropped[slots[t]] = 1;
  }

  Dataset out = ds;
  for (std::size_t t = 0; t < duplicates.size(); ++t) {
    if (!dropped[t]) out.append_row(ds, duplicates[t]);
  }
  return out;
}

Point smote_interpolate(PointView base, PointView nn, double lambda) {
  Point out(base.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = base[j] + lambda * (nn[j] - base[j]);
  return out;
}

Dataset smote(const Dataset& ds, std::size_t k, int amount_pct, Rng& rng) {
  validate_method(Smote{k, amount_pct});
  const ClassSummary s = summarize(ds);
  const auto minority = rows_with_label(ds, s.minority_label);
  if (minority.size() <= k) throw Error("smote: minority count must exceed k");
  const PointMatrix pool = ds.subset(minority).points;
  const auto per_point = static_cast<std::size_t>(amount_pct / 100);

  Dataset out = ds;
  for (std::size_t t = 0; t < minority.size(); ++t) {
    const auto base = pool.row(t);
    const auto neighbours = knn_indices(pool, base, k, t);
    for (std::size_t r = 0; r < per_point; ++r) {
      const auto nn = pool.row(neighbours[rng.index(k)]);
      out.points.append(smote_interpolate(base, nn, rng.uniform()));
      out.labels.push_back(s.minority_label);
      if (ds.has_kinds()) out.kinds.push_back(ds.kinds[minority[t]]);
    }
  }
  return out;
}

std::vector<std::size_t> ncr_removals(const Dataset& ds, std::size_t k) {
  const ClassSummary s = summarize(ds);
  if (k < 1) throw Error("ncr: k must be at least 1");
  if (ds.size() <= k) {
    throw Error("ncr: dataset needs more than k points");
  }
  std::vector<char> remove(ds.size(), 0);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto nn = knn_indices(ds.points, ds.points.row(i), k, i);
    std::size_t minority_votes = 0;
    for (std::size_t j : nn) minority_votes += ds.labels[j] == s.minority_label;
    // Vote ties go to the majority side, as in the k-NN classifier.
    const bool predicted_minority = 2 * minority_votes > k;
    const bool is_minority = ds.labels[i] == s.minority_label;
    if (!is_minority && predicted_minority) {
      remove[i] = 1;
    } else if (is_minority && !predicted_minority) {
      for (std::size_t j : nn) {
        if (ds.labels[j] != s.minority_label) remove[j] = 1;
      }
    }
  }
  std::vector<std::size_t> removed;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (remove[i]) removed.push_back(i);
  }
  return removed;
}

Dataset ncr(const Dataset& ds, std::size_t k) {
  const auto removed = ncr_removals(ds, k);
  std::vector<std::size_t> keep;
  keep.reserve(ds.size() - removed.size());
  auto it = removed.begin();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (it != removed.end() && *it == i) {
      ++it;
    } else {
      keep.push_back(i);
    }
  }
  return ds.subset(keep);
}

Dataset sparsity(const Dataset& ds, double alpha, SparsityScope scope,
                 std::optional<ClusterIds> clusters) {
  validate_method(Sparsity{alpha, scope});
  const ClassSummary s = summarize(ds);
  Dataset out = ds;
  if (alpha == 1.0) return out;

  std::vector<int> labels;
  if (scope == SparsityScope::MinorityOnly) {
    labels.push_back(s.minority_label);
  } else {
    for (const auto& [label, count] : s.counts) labels.push_back(label);
  }
  const std::size_t dims = ds.dims();
  for (int label : labels) {
    const auto rows = rows_with_label(ds, label);
    const auto groups = group_by_id(class_clusters(ds, rows, clusters));
    for (const auto& g : groups) {
      Point center(dims, 0.0);
      for (std::size_t t : g) {
        const auto p = ds.points.row(rows[t]);
        for (std::size_t j = 0; j < dims; ++j) center[j] += p[j];
      }
      for (auto& v : center) v /= static_cast<double>(g.size());
      for (std::size_t t : g) {
        auto p = out.points.row(rows[t]);
        for (std::size_t j = 0; j < dims; ++j) p[j] = center[j] + alpha * (p[j] - center[j]);
      }
    }
  }
  return out;
}

Dataset apply_method(const Dataset& ds, const ResampleMethod& method, Rng& rng,
                     std::optional<ClusterIds> clusters) {
  validate_method(method);
  return std::visit(
      Overloaded{
          [&](const Base&) { return ds; },
          [&](const RandomOversampling&) { return random_oversample(ds, rng); },
          [&](const ClusterOversampling& m) {
            if (m.source == ClusterSource::GroundTruth) {
              if (!clusters) throw Error("co: ground-truth sub-clusters are not available");
              return cluster_oversample(ds, clusters, rng);
            }
            return cluster_oversample(ds, std::nullopt, rng);
          },
          [&](const Smote& m) { return smote(ds, m.k, m.amount_pct, rng); },
          [&](const Ncr& m) { return ncr(ds, m.k); },
          [&](const Sparsity& m) { return sparsity(ds, m.alpha, m.scope, clusters); },
      },
      method);
}

}  // namespace skewbench

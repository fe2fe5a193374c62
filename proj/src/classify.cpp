#include "skewbench/classify.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

namespace skewbench {

ClassRoles class_roles(const Dataset& train) {
  if (train.size() == 0) throw Error("classifier: empty training set");
  std::map<int, std::size_t> counts;
  for (int label : train.labels) ++counts[label];
  if (counts.size() == 1) return {counts.begin()->first, counts.begin()->first};
  const ClassSummary s = summarize(train);
  return {s.minority_label, s.majority_label};
}

KnnModel knn_fit(Dataset train, std::size_t k, std::optional<ClassRoles> roles) {
  train.validate();
  if (k < 1 || k > train.size()) throw Error("knn: k must lie in [1, training size]");
  KnnModel model;
  model.roles = roles ? *roles : class_roles(train);
  model.train = std::move(train);
  model.k = k;
  return model;
}

Prediction knn_predict(const KnnModel& model, PointView query) {
  const auto nn = knn_indices(model.train.points, query, model.k);
  std::map<int, std::size_t> votes;
  for (std::size_t j : nn) ++votes[model.train.labels[j]];

  int label = model.roles.majority;
  std::size_t best = votes.count(label) ? votes[label] : 0;
  for (const auto& [l, v] : votes) {
    if (v > best) {
      best = v;
      label = l;
    }
  }
  const std::size_t minority = votes.count(model.roles.minority) ? votes[model.roles.minority] : 0;
  return {label, static_cast<double>(minority) / static_cast<double>(model.k)};
}

namespace {

__extension__ typedef __int128 Wide;

/// Split quality sum_c n_Lc^2 / n_L + sum_c n_Rc^2 / n_R as an exact fraction.
/// Larger means lower weighted Gini impurity.
struct Score {
  Wide num = 0;
  Wide den = 1;

  bool better_than(const Score& other) const { return num * other.den > other.num * den; }
};

Wide sum_squares(const std::vector<std::size_t>& counts) {
  Wide s = 0;
  for (auto c : counts) s += static_cast<Wide>(c) * static_cast<Wide>(c);
  return s;
}

double midpoint(double a, double b) {
  const double m = a + (b - a) / 2.0;
  return m < b ? m : a;
}

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& ds, TreeModel& model) : ds_(ds), model_(model) {
    for (int label : ds.labels) {
      class_index_.try_emplace(label, 0);
    }
    for (auto& [label, idx] : class_index_) {
      idx = model_.classes.size();
      model_.classes.push_back(label);
    }
  }

  int build(std::vector<std::size_t> rows, std::size_t depth) {
    const int id = static_cast<int>(model_.nodes.size());
    model_.nodes.push_back({});
    model_.nodes[id].depth = depth;
    model_.nodes[id].counts = count(rows);

    const auto& counts = model_.nodes[id].counts;
    const bool pure = std::count_if(counts.begin(), counts.end(),
                                    [](std::size_t c) { return c > 0; }) <= 1;
    if (pure || depth >= model_.max_depth || rows.size() < 2 * model_.min_leaf) return id;

    const auto split = best_split(rows);
    if (!split) return id;

    std::vector<std::size_t> left, right;
    for (std::size_t i : rows) {
      (ds_.points(i, split->feature) <= split->threshold ? left : right).push_back(i);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = build(std::move(left), depth + 1);
    const int r = build(std::move(right), depth + 1);
    auto& node = model_.nodes[id];
    node.feature = static_cast<int>(split->feature);
    node.threshold = split->threshold;
    node.left = l;
    node.right = r;
    return id;
  }

 private:
  struct Split {
    std::size_t feature;
    double threshold;
  };

  std::vector<std::size_t> count(const std::vector<std::size_t>& rows) const {
    std::vector<std::size_t> c(model_.classes.size(), 0);
    for (std::size_t i : rows) ++c[class_index_.at(ds_.labels[i])];
    return c;
  }

  std::optional<Split> best_split(const std::vector<std::size_t>& rows) const {
    const std::size_t n = rows.size();
    const std::size_t min_leaf = std::max<std::size_t>(model_.min_leaf, 1);
    const auto total = count(rows);
    std::optional<Split> best;
    Score best_score;
    std::vector<std::size_t> order(rows);
    for (std::size_t f = 0; f < ds_.dims(); ++f) {
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return ds_.points(a, f) < ds_.points(b, f);
      });
      std::vector<std::size_t> left(total.size(), 0);
      std::vector<std::size_t> right = total;
      for (std::size_t t = 0; t + 1 < n; ++t) {
        const std::size_t c = class_index_.at(ds_.labels[order[t]]);
        ++left[c];
        --right[c];
        const double here = ds_.points(order[t], f);
        const double next = ds_.points(order[t + 1], f);
        if (!(here < next)) continue;
        const std::size_t n_left = t + 1;
        const std::size_t n_right = n - n_left;
        if (n_left < min_leaf || n_right < min_leaf) continue;
        const Score s{sum_squares(left) * static_cast<Wide>(n_right) +
                          sum_squares(right) * static_cast<Wide>(n_left),
                      static_cast<Wide>(n_left) * static_cast<Wide>(n_right)};
        if (!best || s.better_than(best_score)) {
          best = Split{f, midpoint(here, next)};
          best_score = s;
        }
      }
    }
    return best;
  }

  const Dataset& ds_;
  TreeModel& model_;
  std::map<int, std::size_t> class_index_;
};

const TreeNode& leaf_for(const TreeModel& model, PointView query) {
  if (query.size() != model.dims) throw Error("tree: query dimension mismatch");
  const TreeNode* node = &model.nodes.at(0);
  while (!node->is_leaf()) {
    node = &model.nodes[static_cast<std::size_t>(
        query[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left
                                                                          : node->right)];
  }
  return *node;
}

std::size_t count_of(const TreeModel& model, const TreeNode& node, int label) {
  const auto it = std::find(model.classes.begin(), model.classes.end(), label);
  return it == model.classes.end() ? 0 : node.counts[static_cast<std::size_t>(it - model.classes.begin())];
}

}  // namespace

std::size_t TreeModel::depth() const {
  std::size_t d = 0;
  for (const auto& node : nodes) d = std::max(d, node.depth);
  return d;
}

TreeModel tree_fit(const Dataset& ds, std::size_t max_depth, std::size_t min_leaf,
                   std::optional<ClassRoles> roles) {
  ds.validate();
  if (ds.size() == 0) throw Error("tree: empty training set");
  if (ds.size() < 2 * min_leaf) throw Error("tree: need at least 2 * min_leaf rows");
  TreeModel model;
  model.roles = roles ? *roles : class_roles(ds);
  model.dims = ds.dims();
  model.max_depth = max_depth;
  model.min_leaf = min_leaf;
  TreeBuilder builder(ds, model);
  std::vector<std::size_t> rows(ds.size());
  std::iota(rows.begin(), rows.end(), 0);
  builder.build(std::move(rows), 0);
  return model;
}

Prediction tree_predict(const TreeModel& model, PointView query) {
  const TreeNode& leaf = leaf_for(model, query);
  int label = model.roles.majority;
  std::size_t best = count_of(model, leaf, label);
  for (std::size_t c = 0; c < model.classes.size(); ++c) {
    if (leaf.counts[c] > best) {
      best = leaf.counts[c];
      label = model.classes[c];
    }
  }
  const std::size_t total = std::accumulate(leaf.counts.begin(), leaf.counts.end(), std::size_t{0});
  const std::size_t minority = count_of(model, leaf, model.roles.minority);
  return {label, (static_cast<double>(minority) + 1.0) / (static_cast<double>(total) + 2.0)};
}

std::string tree_export(const TreeModel& model) {
  std::ostringstream out;
  auto counts_text = [&](const TreeNode& node) {
    std::string s = "{";
    for (std::size_t c = 0; c < model.classes.size(); ++c) {
      if (c) s += ", ";
      s += std::to_string(model.classes[c]) + ": " + std::to_string(node.counts[c]);
    }
    return s + "}";
  };
  auto emit = [&](auto&& self, int id) -> void {
    const TreeNode& node = model.nodes[static_cast<std::size_t>(id)];
    out << std::string(2 * node.depth, ' ');
    if (node.is_leaf()) {
      out << "leaf " << counts_text(node) << '\n';
      return;
    }
    char threshold[32];
    std::snprintf(threshold, sizeof threshold, "%.17g", node.threshold);
    out << "x" << node.feature << " <= " << threshold << ' ' << counts_text(node) << '\n';
    self(self, node.left);
    self(self, node.right);
  };
  emit(emit, 0);
  return out.str();
}

}  // namespace skewbench

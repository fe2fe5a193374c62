#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "skewbench/core.hpp"

namespace skewbench {

/// Predicted label and a minority-class score in [0,1] for ranking.
struct Prediction {
  int label = 0;
  double score = 0.0;
};

/// Class roles of a training set. A single-class training set gets the same
/// label for both roles.
struct ClassRoles {
  int minority = 0;
  int majority = 0;
};
ClassRoles class_roles(const Dataset& train);

struct KnnModel {
  Dataset train;
  std::size_t k = 3;
  ClassRoles roles;
};

/// Throws Error unless 1 <= k <= training size. `roles` pins which label is
/// scored as minority; by default they come from the training counts, which
/// is wrong once a resampler has balanced the classes.
KnnModel knn_fit(Dataset train, std::size_t k = 3,
                 std::optional<ClassRoles> roles = std::nullopt);

/// Majority vote of the k nearest training points; an even split resolves
/// to the majority class. Score is the minority fraction of the neighbours.
Prediction knn_predict(const KnnModel& model, PointView query);

/// One node of a CART tree; `feature < 0` marks a leaf.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::size_t depth = 0;
  /// Training counts per class, aligned with TreeModel::classes.
  std::vector<std::size_t> counts;

  bool is_leaf() const { return feature < 0; }
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  std::vector<int> classes;     // ascending labels seen in training
  ClassRoles roles;
  std::size_t dims = 0;
  std::size_t max_depth = 12;
  std::size_t min_leaf = 2;

  std::size_t depth() const;
};

/// Greedy binary tree minimizing weighted Gini impurity. Candidate thresholds
/// are midpoints between consecutive distinct feature values, both children
/// must hold at least `min_leaf` rows, and ties go to the lower feature index,
/// then the lower threshold. Growth stops at purity, max_depth, or when no
/// admissible split exists.
TreeModel tree_fit(const Dataset& ds, std::size_t max_depth = 12, std::size_t min_leaf = 2,
                   std::optional<ClassRoles> roles = std::nullopt);

/// Routes by `x[feature] <= threshold` to the left. Leaf label is the most
/// frequent class (ties to the majority class); score is the Laplace-smoothed
/// minority share (minority + 1) / (total + 2).
Prediction tree_predict(const TreeModel& model, PointView query);

/// One node per line, two spaces of indentation per depth level.
std::string tree_export(const TreeModel& model);

}  // namespace skewbench

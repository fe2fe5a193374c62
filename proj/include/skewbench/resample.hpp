#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "skewbench/core.hpp"
#include "skewbench/rng.hpp"

namespace skewbench {

/// Per-point sub-cluster ids. Only the entries of the classes being processed
/// are read; ids of one class must be contiguous from 0.
using ClusterIds = std::span<const int>;

// Method configurations. `Base` leaves the data untouched.
struct Base {};
struct RandomOversampling {};
enum class ClusterSource { GroundTruth, MeanShift };
struct ClusterOversampling {
  ClusterSource source = ClusterSource::GroundTruth;
};
struct Smote {
  std::size_t k = 5;
  int amount_pct = 100;
};
struct Ncr {
  std::size_t k = 3;
};
enum class SparsityScope { MinorityOnly, BothClasses };
struct Sparsity {
  double alpha = 1.5;
  SparsityScope scope = SparsityScope::MinorityOnly;
};

using ResampleMethod =
    std::variant<Base, RandomOversampling, ClusterOversampling, Smote, Ncr, Sparsity>;

/// Short name used in configs and reports: base, ro, co, smote, ncr, sparsity.
std::string method_name(const ResampleMethod& method);
/// Parses a short name into a method with default parameters.
std::optional<ResampleMethod> parse_method(std::string_view name);
inline constexpr std::string_view kMethodNames = "base, ro, co, smote, ncr, sparsity";

/// Throws Error when a parameter is out of range.
void validate_method(const ResampleMethod& method);

/// Duplicates minority rows (uniform, with replacement) until both classes
/// have the majority count. Originals come first, duplicates after.
Dataset random_oversample(const Dataset& ds, Rng& rng);

/// Grows every minority sub-cluster to ceil(majority / clusters) by
/// duplication, then drops random duplicates so the minority total equals the
/// majority count. Without `clusters`, minority sub-clusters are found by
/// mean shift.
Dataset cluster_oversample(const Dataset& ds, std::optional<ClusterIds> clusters, Rng& rng);

/// base + lambda (nn - base).
Point smote_interpolate(PointView base, PointView nn, double lambda);

/// Appends amount_pct/100 interpolated points per minority row, each toward
/// one of its k nearest minority neighbours.
Dataset smote(const Dataset& ds, std::size_t k, int amount_pct, Rng& rng);

/// Rows the neighbourhood cleaning rule removes, ascending. Only
/// non-minority rows are ever listed. Requires more than k rows.
std::vector<std::size_t> ncr_removals(const Dataset& ds, std::size_t k);
Dataset ncr(const Dataset& ds, std::size_t k = 3);

/// Spreads every in-scope point away from its sub-cluster mean:
/// x <- c + alpha (x - c). Sub-clusters come from `clusters` or, when absent,
/// from mean shift on each class.
Dataset sparsity(const Dataset& ds, double alpha, SparsityScope scope,
                 std::optional<ClusterIds> clusters = std::nullopt);

/// Dispatches on the method. `clusters` feeds CO (GroundTruth source) and
/// Sparsity; CO with the GroundTruth source requires it.
Dataset apply_method(const Dataset& ds, const ResampleMethod& method, Rng& rng,
                     std::optional<ClusterIds> clusters = std::nullopt);

}  // namespace skewbench

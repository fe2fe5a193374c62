#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "skewbench/core.hpp"
#include "skewbench/rng.hpp"

namespace skewbench {

/// Axis-aligned hypercube [lo, hi]^d used for center sampling.
struct CenterBox {
  double lo = -10.0;
  double hi = 10.0;

  double side() const { return hi - lo; }
  double middle() const { return 0.5 * (lo + hi); }
};

struct ClassRatio {
  int majority_parts = 5;
  int minority_parts = 1;
};

/// Recipe for one synthetic two-class dataset. Majority points get label 0,
/// minority points label 1.
struct GenSpec {
  std::size_t n_samples = 400;
  ClassRatio class_ratio;
  std::size_t dims = 2;
  std::size_t minority_subclusters = 3;
  std::size_t majority_subclusters = 1;
  double sub_sigma = 1.0;
  /// Standard deviation of the majority blob(s); 0 selects side/4 so a
  /// single majority blob spans the center box.
  double majority_sigma = 0.0;
  CenterBox center_box;
  double min_center_separation = 5.0;
  double disturbance_ratio = 0.0;
  double rare_fraction = 0.0;
  /// When set, safe + disturbance + rare must equal 1.
  std::optional<double> safe_fraction;
  std::uint64_t seed = 1;

  /// Throws Error naming the violated constraint.
  void validate() const;

  /// (majority, minority) counts: minority = round(n * m / (M + m)).
  std::pair<std::size_t, std::size_t> class_counts() const;

  double effective_majority_sigma() const {
    return majority_sigma > 0.0 ? majority_sigma : center_box.side() / 4.0;
  }
};

struct GroundTruth {
  int majority_label = 0;
  int minority_label = 1;
  PointMatrix minority_centers;
  PointMatrix majority_centers;
  /// Per point: index into the center list of the point's own class.
  std::vector<int> subcluster;
};

/// Safe / borderline / rare minority counts via largest-remainder rounding,
/// so the three always add up to `minority`.
struct Composition {
  std::size_t safe = 0;
  std::size_t borderline = 0;
  std::size_t rare = 0;
};
Composition composition_counts(std::size_t minority, double disturbance_ratio,
                               double rare_fraction);

/// Splits `total` into `parts` sizes that differ by at most one (larger first).
std::vector<std::size_t> even_split(std::size_t total, std::size_t parts);

/// Largest-remainder apportionment of `total` proportional to `weights`.
std::vector<std::size_t> apportion(std::size_t total, std::span<const double> weights);

inline constexpr std::size_t kMaxPlacementAttempts = 10000;

/// Uniform rejection sampling of `count` centers in box^dims with pairwise
/// distance >= min_sep, also keeping min_sep from every row of `avoid`.
/// Throws Error("center packing infeasible") once kMaxPlacementAttempts
/// candidate draws have been spent.
PointMatrix sample_centers(std::size_t count, std::size_t dims, const CenterBox& box,
                           double min_sep, Rng& rng, const PointMatrix* avoid = nullptr);

struct Blobs {
  PointMatrix points;
  std::vector<int> assignment;
};

/// counts[j] points around centers row j, each coordinate center + sigma * N(0,1).
Blobs generate_blobs(const PointMatrix& centers, std::span<const std::size_t> counts,
                     double sigma, Rng& rng);

/// Moves `count` currently-safe minority points into the borderline shell
/// R <= |x - c| <= 2R (R = 2 sub_sigma) around their own sub-cluster center,
/// spread over sub-clusters proportionally to their safe counts. Returns the
/// number of points tagged Borderline.
std::size_t apply_disturbance(Dataset& ds, const GroundTruth& gt, std::size_t count,
                              double sub_sigma, Rng& rng);
/// Same, with count = round(ratio * minority size).
std::size_t apply_disturbance(Dataset& ds, const GroundTruth& gt, double ratio,
                              double sub_sigma, Rng& rng);

/// Moves `count` currently-safe minority points into majority territory:
/// majority center + u, u uniform in the ball of radius 2 sub_sigma, at
/// distance > 3 sub_sigma from every minority center. Points go singly or,
/// with probability 0.5, in pairs sharing a locus (jitter 0.1 sub_sigma).
std::size_t inject_rare(Dataset& ds, const GroundTruth& gt, std::size_t count, double sub_sigma,
                        Rng& rng);
std::size_t inject_rare(Dataset& ds, const GroundTruth& gt, double fraction, double sub_sigma,
                        Rng& rng);

struct Generated {
  Dataset data;
  GroundTruth truth;
};

/// Full pipeline: centers, blobs for both classes, disturbance, rare
/// injection. Rows are ordered majority first, then minority. Deterministic
/// in spec.seed.
Generated generate_imbalanced(const GenSpec& spec);

}  // namespace skewbench

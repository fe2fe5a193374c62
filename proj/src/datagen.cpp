#include "skewbench/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace skewbench {

namespace {

constexpr double kFractionTolerance = 1e-9;

std::size_t round_count(double x) { return static_cast<std::size_t>(std::llround(x)); }

/// Floor that treats values within rounding noise of an integer as that integer.
std::size_t stable_floor(double x) { return static_cast<std::size_t>(std::floor(x + 1e-9)); }

Point random_direction(std::size_t dims, Rng& rng) {
  Point dir(dims);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (auto& v : dir) {
      v = rng.normal();
      norm += v * v;
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  for (auto& v : dir) v /= norm;
  return dir;
}

/// Marks every minority point Safe and every other point Majority if the
/// dataset carries no tags yet.
void ensure_kinds(Dataset& ds, int minority_label) {
  if (ds.has_kinds()) return;
  ds.kinds.resize(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    ds.kinds[i] = ds.labels[i] == minority_label ? ExampleKind::Safe : ExampleKind::Majority;
  }
}

/// Picks `count` safe minority points, spread over sub-clusters in proportion
/// to their safe sizes and chosen uniformly without replacement in each.
std::vector<std::size_t> choose_safe_points(const Dataset& ds, const GroundTruth& gt,
                                            std::size_t count, Rng& rng) {
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.labels[i] == gt.minority_label && ds.kinds[i] == ExampleKind::Safe) {
      groups[gt.subcluster.at(i)].push_back(i);
    }
  }
  std::size_t eligible = 0;
  std::vector<double> weights;
  for (const auto& [id, members] : groups) {
    eligible += members.size();
    weights.push_back(static_cast<double>(members.size()));
  }
  if (count > eligible) {
    throw Error("not enough safe minority points to relocate (" + std::to_string(count) +
                " requested, " + std::to_string(eligible) + " available)");
  }
  if (count == 0) return {};

  const auto quota = apportion(count, weights);
  std::vector<std::size_t> chosen;
  chosen.reserve(count);
  std::size_t g = 0;
  for (auto& [id, members] : groups) {
    const std::size_t take = std::min(quota[g++], members.size());
    for (std::size_t t = 0; t < take; ++t) {
      std::swap(members[t], members[t + rng.index(members.size() - t)]);
      chosen.push_back(members[t]);
    }
  }
  return chosen;
}

}  // namespace

void GenSpec::validate() const {
  if (n_samples < 2) throw Error("gen: n_samples must be at least 2");
  if (class_ratio.majority_parts < 1 || class_ratio.minority_parts < 1) {
    throw Error("gen: class ratio parts must be positive integers");
  }
  if (dims < 1) throw Error("gen: dims must be at least 1");
  if (minority_subclusters < 1 || majority_subclusters < 1) {
    throw Error("gen: sub-cluster counts must be at least 1");
  }
  if (!(sub_sigma > 0.0)) throw Error("gen: sub_sigma must be positive");
  if (!(majority_sigma >= 0.0)) throw Error("gen: majority_sigma must be nonnegative");
  if (!(center_box.hi > center_box.lo)) throw Error("gen: center box is degenerate (hi <= lo)");
  if (!(min_center_separation >= 0.0)) throw Error("gen: min_center_separation must be >= 0");
  auto in_unit = [](double f) { return f >= 0.0 && f <= 1.0; };
  if (!in_unit(disturbance_ratio)) throw Error("gen: disturbance_ratio must lie in [0,1]");
  if (!in_unit(rare_fraction)) throw Error("gen: rare_fraction must lie in [0,1]");
  if (safe_fraction) {
    if (!in_unit(*safe_fraction)) throw Error("gen: safe_fraction must lie in [0,1]");
    const double total = *safe_fraction + disturbance_ratio + rare_fraction;
    if (std::abs(total - 1.0) > kFractionTolerance) {
      throw Error("gen: safe_fraction + disturbance_ratio + rare_fraction must equal 1 (got " +
                  std::to_string(total) + ")");
    }
  } else if (disturbance_ratio + rare_fraction > 1.0 + kFractionTolerance) {
    throw Error("gen: disturbance_ratio + rare_fraction must not exceed 1");
  }
  const auto [majority, minority] = class_counts();
  if (minority < minority_subclusters) {
    throw Error("gen: minority count " + std::to_string(minority) +
                " is smaller than minority_subclusters");
  }
  if (majority < majority_subclusters) {
    throw Error("gen: majority count is smaller than majority_subclusters");
  }
}

std::pair<std::size_t, std::size_t> GenSpec::class_counts() const {
  const double parts = class_ratio.majority_parts + class_ratio.minority_parts;
  const std::size_t minority =
      round_count(static_cast<double>(n_samples) * class_ratio.minority_parts / parts);
  return {n_samples - minority, minority};
}

std::vector<std::size_t> even_split(std::size_t total, std::size_t parts) {
  std::vector<std::size_t> out(parts, total / parts);
  for (std::size_t j = 0; j < total % parts; ++j) ++out[j];
  return out;
}

std::vector<std::size_t> apportion(std::size_t total, std::span<const double> weights) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::size_t> out(weights.size(), 0);
  if (weights.empty() || sum <= 0.0) return out;
  std::vector<double> remainder(weights.size());
  std::size_t assigned = 0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const double quota = static_cast<double>(total) * weights[j] / sum;
    out[j] = stable_floor(quota);
    remainder[j] = quota - static_cast<double>(out[j]);
    assigned += out[j];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t t = 0; assigned < total; ++t, ++assigned) ++out[order[t % order.size()]];
  return out;
}

Composition composition_counts(std::size_t minority, double disturbance_ratio,
                               double rare_fraction) {
  const double safe = std::max(0.0, 1.0 - disturbance_ratio - rare_fraction);
  const double weights[] = {safe, disturbance_ratio, rare_fraction};
  const auto seats = apportion(minority, weights);
  return {seats[0], seats[1], seats[2]};
}

PointMatrix sample_centers(std::size_t count, std::size_t dims, const CenterBox& box,
                           double min_sep, Rng& rng, const PointMatrix* avoid) {
  if (count < 1) throw Error("sample_centers: count must be at least 1");
  if (!(box.hi > box.lo)) throw Error("sample_centers: degenerate box");
  const double min_sq = min_sep * min_sep;
  PointMatrix centers(dims);
  Point candidate(dims);
  std::size_t attempts = 0;
  auto far_enough = [&](const PointMatrix& others) {
    for (std::size_t i = 0; i < others.rows(); ++i) {
      if (squared_euclidean(others.row(i), candidate) < min_sq) return false;
    }
    return true;
  };
  while (centers.rows() < count) {
    if (attempts++ >= kMaxPlacementAttempts) throw Error("center packing infeasible");
    for (auto& v : candidate) v = rng.uniform(box.lo, box.hi);
    if (far_enough(centers) && (avoid == nullptr || far_enough(*avoid))) {
      centers.append(candidate);
    }
  }
  return centers;
}

Blobs generate_blobs(const PointMatrix& centers, std::span<const std::size_t> counts,
                     double sigma, Rng& rng) {
  if (counts.size() != centers.rows()) throw Error("generate_blobs: counts and centers differ");
  if (!(sigma > 0.0)) throw Error("generate_blobs: sigma must be positive");
  Blobs out{PointMatrix(centers.dims()), {}};
  out.points.reserve(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  Point p(centers.dims());
  for (std::size_t j = 0; j < centers.rows(); ++j) {
    const auto c = centers.row(j);
    for (std::size_t i = 0; i < counts[j]; ++i) {
      for (std::size_t k = 0; k < p.size(); ++k) p[k] = c[k] + sigma * rng.normal();
      out.points.append(p);
      out.assignment.push_back(static_cast<int>(j));
    }
  }
  return out;
}

std::size_t apply_disturbance(Dataset& ds, const GroundTruth& gt, std::size_t count,
                              double sub_sigma, Rng& rng) {
  ensure_kinds(ds, gt.minority_label);
  const auto chosen = choose_safe_points(ds, gt, count, rng);
  const double inner = 2.0 * sub_sigma;
  const double outer = 2.0 * inner;
  const double d = static_cast<double>(ds.dims());
  const double inner_pow = std::pow(inner, d);
  const double outer_pow = std::pow(outer, d);
  for (std::size_t i : chosen) {
    const auto center = gt.minority_centers.row(static_cast<std::size_t>(gt.subcluster[i]));
    const Point dir = random_direction(ds.dims(), rng);
    // Inverse CDF of the radius for a volume-uniform draw from the shell.
    double r = std::pow(inner_pow + rng.uniform() * (outer_pow - inner_pow), 1.0 / d);
    r = std::clamp(r, inner, outer);
    auto row = ds.points.row(i);
    for (std::size_t k = 0; k < row.size(); ++k) row[k] = center[k] + r * dir[k];
    ds.kinds[i] = ExampleKind::Borderline;
  }
  return chosen.size();
}

std::size_t apply_disturbance(Dataset& ds, const GroundTruth& gt, double ratio,
                              double sub_sigma, Rng& rng) {
  if (ratio < 0.0 || ratio > 1.0) throw Error("apply_disturbance: ratio must lie in [0,1]");
  const auto minority = static_cast<std::size_t>(
      std::count(ds.labels.begin(), ds.labels.end(), gt.minority_label));
  return apply_disturbance(ds, gt, round_count(ratio * static_cast<double>(minority)), sub_sigma,
                           rng);
}

std::size_t inject_rare(Dataset& ds, const GroundTruth& gt, std::size_t count, double sub_sigma,
                        Rng& rng) {
  ensure_kinds(ds, gt.minority_label);
  if (count == 0) return 0;
  if (gt.majority_centers.rows() == 0) throw Error("inject_rare: no majority centers");
  auto chosen = choose_safe_points(ds, gt, count, rng);

  const std::size_t dims = ds.dims();
  const double ball = 2.0 * sub_sigma;
  const double exclusion_sq = 9.0 * sub_sigma * sub_sigma;
  const double jitter = 0.1 * sub_sigma;
  auto outside_minority = [&](PointView p) {
    for (std::size_t j = 0; j < gt.minority_centers.rows(); ++j) {
      if (squared_euclidean(gt.minority_centers.row(j), p) <= exclusion_sq) return false;
    }
    return true;
  };

  Point locus(dims);
  std::vector<Point> placed;
  std::size_t next = 0;
  while (next < chosen.size()) {
    const std::size_t group = (chosen.size() - next >= 2 && rng.bernoulli(0.5)) ? 2 : 1;
    bool ok = false;
    for (std::size_t attempt = 0; attempt < kMaxPlacementAttempts && !ok; ++attempt) {
      const auto center = gt.majority_centers.row(rng.index(gt.majority_centers.rows()));
      const Point dir = random_direction(dims, rng);
      const double r = ball * std::pow(rng.uniform(), 1.0 / static_cast<double>(dims));
      for (std::size_t k = 0; k < dims; ++k) locus[k] = center[k] + r * dir[k];
      placed.assign(group, locus);
      if (group == 2) {
        for (auto& p : placed) {
          for (auto& v : p) v += jitter * rng.normal();
        }
      }
      ok = std::all_of(placed.begin(), placed.end(),
                       [&](const Point& p) { return outside_minority(p); });
    }
    if (!ok) throw Error("rare placement infeasible: majority territory too close to minority centers");
    for (const auto& p : placed) {
      const std::size_t i = chosen[next++];
      std::copy(p.begin(), p.end(), ds.points.row(i).begin());
      ds.kinds[i] = ExampleKind::Rare;
    }
  }
  return chosen.size();
}

std::size_t inject_rare(Dataset& ds, const GroundTruth& gt, double fraction, double sub_sigma,
                        Rng& rng) {
  if (fraction < 0.0 || fraction > 1.0) throw Error("inject_rare: fraction must lie in [0,1]");
  const auto minority = static_cast<std::size_t>(
      std::count(ds.labels.begin(), ds.labels.end(), gt.minority_label));
  return inject_rare(ds, gt, round_count(fraction * static_cast<double>(minority)), sub_sigma,
                     rng);
}

Generated generate_imbalanced(const GenSpec& spec) {
  spec.validate();
  const Rng root(spec.seed);
  const auto [majority_n, minority_n] = spec.class_counts();

  Generated out;
  GroundTruth& gt = out.truth;
  if (spec.majority_subclusters == 1) {
    gt.majority_centers = PointMatrix(spec.dims, Point(spec.dims, spec.center_box.middle()));
  } else {
    Rng rng = root.child("majority-centers");
    gt.majority_centers = sample_centers(spec.majority_subclusters, spec.dims, spec.center_box,
                                         spec.min_center_separation, rng);
  }
  {
    Rng rng = root.child("minority-centers");
    gt.minority_centers = sample_centers(spec.minority_subclusters, spec.dims, spec.center_box,
                                         spec.min_center_separation, rng, &gt.majority_centers);
  }

  Rng majority_rng = root.child("majority-blobs");
  const auto majority_counts = even_split(majority_n, spec.majority_subclusters);
  const Blobs majority = generate_blobs(gt.majority_centers, majority_counts,
                                        spec.effective_majority_sigma(), majority_rng);
  Rng minority_rng = root.child("minority-blobs");
  const auto minority_counts = even_split(minority_n, spec.minority_subclusters);
  const Blobs minority =
      generate_blobs(gt.minority_centers, minority_counts, spec.sub_sigma, minority_rng);

  Dataset& ds = out.data;
  ds.points = PointMatrix(spec.dims);
  ds.points.reserve(spec.n_samples);
  for (std::size_t i = 0; i < majority.points.rows(); ++i) {
    ds.points.append(majority.points.row(i));
    ds.labels.push_back(gt.majority_label);
    ds.kinds.push_back(ExampleKind::Majority);
    gt.subcluster.push_back(majority.assignment[i]);
  }
  for (std::size_t i = 0; i < minority.points.rows(); ++i) {
    ds.points.append(minority.points.row(i));
    ds.labels.push_back(gt.minority_label);
    ds.kinds.push_back(ExampleKind::Safe);
    gt.subcluster.push_back(minority.assignment[i]);
  }

  const Composition comp =
      composition_counts(minority_n, spec.disturbance_ratio, spec.rare_fraction);
  Rng disturb_rng = root.child("disturbance");
  apply_disturbance(ds, gt, comp.borderline, spec.sub_sigma, disturb_rng);
  Rng rare_rng = root.child("rare");
  inject_rare(ds, gt, comp.rare, spec.sub_sigma, rare_rng);
  return out;
}

}  // namespace skewbench

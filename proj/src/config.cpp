#include "skewbench/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

namespace skewbench {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> items;
  while (true) {
    const auto comma = value.find(',');
    const auto item = trim(value.substr(0, comma));
    if (!item.empty()) items.push_back(item);
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return items;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
  throw ConfigError(std::string(key) + ": invalid value '" + std::string(value) + "' (expected " +
                    std::string(want) + ")");
}

template <class T>
T parse_integer(std::string_view key, std::string_view value) {
  T v{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    bad_value(key, value, "a nonnegative integer");
  }
  return v;
}

double parse_real(std::string_view key, std::string_view value) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(v)) {
    bad_value(key, value, "a real number");
  }
  return v;
}

/// "minority:majority", e.g. 1:5.
ClassRatio parse_ratio(std::string_view key, std::string_view value) {
  const auto colon = value.find(':');
  if (colon == std::string_view::npos) bad_value(key, value, "minority:majority, e.g. 1:5");
  const int minority = parse_integer<int>(key, trim(value.substr(0, colon)));
  const int majority = parse_integer<int>(key, trim(value.substr(colon + 1)));
  if (minority < 1 || majority < 1) bad_value(key, value, "positive parts");
  return {majority, minority};
}

template <class T, class F>
std::vector<T> parse_list(std::string_view key, std::string_view value, F parse_one) {
  std::vector<T> out;
  for (auto item : split_list(value)) out.push_back(parse_one(key, item));
  if (out.empty()) bad_value(key, value, "a nonempty comma-separated list");
  return out;
}

}  // namespace

void RunConfig::set(std::string_view key, std::string_view value) {
  value = trim(value);
  auto size = [&] { return parse_integer<std::size_t>(key, value); };
  auto real = [&] { return parse_real(key, value); };

  if (key == "gen.n_samples") gen.n_samples = size();
  else if (key == "gen.ratio") gen.class_ratio = parse_ratio(key, value);
  else if (key == "gen.dims") gen.dims = size();
  else if (key == "gen.minority_subclusters") gen.minority_subclusters = size();
  else if (key == "gen.majority_subclusters") gen.majority_subclusters = size();
  else if (key == "gen.sub_sigma") gen.sub_sigma = real();
  else if (key == "gen.majority_sigma") gen.majority_sigma = real();
  else if (key == "gen.box_lo") gen.center_box.lo = real();
  else if (key == "gen.box_hi") gen.center_box.hi = real();
  else if (key == "gen.min_separation") gen.min_center_separation = real();
  else if (key == "gen.disturbance") gen.disturbance_ratio = real();
  else if (key == "gen.rare") gen.rare_fraction = real();
  else if (key == "gen.safe") gen.safe_fraction = real();
  else if (key == "gen.seed") gen.seed = parse_integer<std::uint64_t>(key, value);
  else if (key == "exp.subclusters") exp.grid.subclusters = parse_list<std::size_t>(key, value, parse_integer<std::size_t>);
  else if (key == "exp.sizes") exp.grid.sizes = parse_list<std::size_t>(key, value, parse_integer<std::size_t>);
  else if (key == "exp.ratios") exp.grid.ratios = parse_list<ClassRatio>(key, value, parse_ratio);
  else if (key == "exp.disturbances") exp.grid.disturbances = parse_list<double>(key, value, parse_real);
  else if (key == "exp.methods") {
    method_names.clear();
    for (auto name : split_list(value)) {
      method(name);
      method_names.emplace_back(name);
    }
    if (method_names.empty()) bad_value(key, value, "a nonempty list");
  } else if (key == "exp.classifiers") {
    classifier_names.clear();
    for (auto name : split_list(value)) {
      classifier(name);
      classifier_names.emplace_back(name);
    }
    if (classifier_names.empty()) bad_value(key, value, "a nonempty list");
  } else if (key == "exp.folds") exp.folds = size();
  else if (key == "exp.repeats") exp.repeats = size();
  else if (key == "exp.seed") exp.seed = parse_integer<std::uint64_t>(key, value);
  else if (key == "co.clusters") {
    if (value == "truth") co.source = ClusterSource::GroundTruth;
    else if (value == "meanshift") co.source = ClusterSource::MeanShift;
    else bad_value(key, value, "truth or meanshift");
  } else if (key == "smote.k") smote.k = size();
  else if (key == "smote.amount") smote.amount_pct = parse_integer<int>(key, value);
  else if (key == "ncr.k") ncr.k = size();
  else if (key == "sparsity.alpha") sparsity.alpha = real();
  else if (key == "sparsity.scope") {
    if (value == "minority") sparsity.scope = SparsityScope::MinorityOnly;
    else if (value == "both") sparsity.scope = SparsityScope::BothClasses;
    else bad_value(key, value, "minority or both");
  } else if (key == "knn.k") knn.k = size();
  else if (key == "tree.max_depth") tree.max_depth = size();
  else if (key == "tree.min_leaf") tree.min_leaf = size();
  else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

ResampleMethod RunConfig::method(std::string_view name) const {
  if (name == "base") return Base{};
  if (name == "ro") return RandomOversampling{};
  if (name == "co") return co;
  if (name == "smote") return smote;
  if (name == "ncr") return ncr;
  if (name == "sparsity") return sparsity;
  throw ConfigError("unknown method '" + std::string(name) + "' (valid: " +
                    std::string(kMethodNames) + ")");
}

ClassifierSpec RunConfig::classifier(std::string_view name) const {
  if (name == "knn") return knn;
  if (name == "tree") return tree;
  throw ConfigError("unknown classifier '" + std::string(name) + "' (valid: knn, tree)");
}

ExperimentSpec RunConfig::experiment() const {
  ExperimentSpec spec = exp;
  spec.base = gen;
  spec.methods.clear();
  for (const auto& name : method_names) spec.methods.push_back(method(name));
  spec.classifiers.clear();
  for (const auto& name : classifier_names) spec.classifiers.push_back(classifier(name));
  return spec;
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      base.set(trim(view.substr(0, eq)), view.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  return parse_config(in, std::move(base));
}

std::string config_help() {
  const RunConfig d;
  std::ostringstream out;
  out << "Config keys (key = value, '#' comments):\n"
      << "  gen.n_samples            total points                    [" << d.gen.n_samples << "]\n"
      << "  gen.ratio                minority:majority parts         [1:5]\n"
      << "  gen.dims                 feature dimension               [" << d.gen.dims << "]\n"
      << "  gen.minority_subclusters minority sub-clusters           [" << d.gen.minority_subclusters << "]\n"
      << "  gen.majority_subclusters majority blobs                  [" << d.gen.majority_subclusters << "]\n"
      << "  gen.sub_sigma            minority blob std-dev           [" << d.gen.sub_sigma << "]\n"
      << "  gen.majority_sigma       majority blob std-dev, 0=side/4 [" << d.gen.majority_sigma << "]\n"
      << "  gen.box_lo, gen.box_hi   center box bounds               [" << d.gen.center_box.lo << ", " << d.gen.center_box.hi << "]\n"
      << "  gen.min_separation       min distance between centers    [" << d.gen.min_center_separation << "]\n"
      << "  gen.disturbance          borderline fraction             [0]\n"
      << "  gen.rare                 rare fraction                   [0]\n"
      << "  gen.safe                 safe fraction (must sum to 1)   [unset]\n"
      << "  gen.seed                 generator seed                  [" << d.gen.seed << "]\n"
      << "  exp.subclusters          grid, comma list                [3]\n"
      << "  exp.sizes                grid, comma list                [400]\n"
      << "  exp.ratios               grid, comma list of m:M         [1:5]\n"
      << "  exp.disturbances         grid, comma list                [0]\n"
      << "  exp.methods              " << kMethodNames << "  [base]\n"
      << "  exp.classifiers          knn, tree                       [knn]\n"
      << "  exp.folds                stratified folds                [" << d.exp.folds << "]\n"
      << "  exp.repeats              repeats per cell                [" << d.exp.repeats << "]\n"
      << "  exp.seed                 master seed                     [" << d.exp.seed << "]\n"
      << "  co.clusters              truth | meanshift               [truth]\n"
      << "  smote.k, smote.amount    neighbours, percent (x100)      [" << d.smote.k << ", " << d.smote.amount_pct << "]\n"
      << "  ncr.k                    cleaning neighbours             [" << d.ncr.k << "]\n"
      << "  sparsity.alpha           spread factor >= 1              [" << d.sparsity.alpha << "]\n"
      << "  sparsity.scope           minority | both                 [minority]\n"
      << "  knn.k                    classifier neighbours           [" << d.knn.k << "]\n"
      << "  tree.max_depth           tree depth limit                [" << d.tree.max_depth << "]\n"
      << "  tree.min_leaf            rows per leaf                   [" << d.tree.min_leaf << "]\n";
  return out.str();
}

}  // namespace skewbench

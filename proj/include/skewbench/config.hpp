#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "skewbench/datagen.hpp"
#include "skewbench/eval.hpp"
#include "skewbench/resample.hpp"

namespace skewbench {

/// Invalid configuration or usage. The CLI maps it to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Flat `key = value` settings for generation, resampling and experiments.
struct RunConfig {
  GenSpec gen;
  ExperimentSpec exp;
  ClusterOversampling co;
  Smote smote;
  Ncr ncr;
  Sparsity sparsity;
  ClassifierSpec knn{ClassifierKind::Knn};
  ClassifierSpec tree{ClassifierKind::Tree};
  std::vector<std::string> method_names{"base"};
  std::vector<std::string> classifier_names{"knn"};

  /// Applies one setting; throws ConfigError for unknown keys or bad values.
  void set(std::string_view key, std::string_view value);

  /// Method with the configured parameters; throws ConfigError listing the
  /// valid names when `name` is unknown.
  ResampleMethod method(std::string_view name) const;
  ClassifierSpec classifier(std::string_view name) const;

  /// Experiment spec with methods, classifiers and base generator filled in.
  ExperimentSpec experiment() const;
};

/// Reads `key = value` lines; `#` starts a comment, blank lines are ignored.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Key reference with defaults, for --help.
std::string config_help();

}  // namespace skewbench

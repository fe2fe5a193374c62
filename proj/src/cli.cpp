#include "skewbench/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "skewbench/config.hpp"
#include "skewbench/csv.hpp"
#include "skewbench/datagen.hpp"
#include "skewbench/eval.hpp"
#include "skewbench/plot.hpp"
#include "skewbench/report.hpp"
#include "skewbench/resample.hpp"

namespace skewbench {

namespace fs = std::filesystem;

namespace {

std::string one_decimal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out;
  std::vector<std::string> settings;
};

RunConfig build_config(const GlobalOptions& g) {
  RunConfig cfg = g.config.empty() ? RunConfig{} : load_config(g.config);
  for (const auto& kv : g.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (g.seed) {
    cfg.gen.seed = *g.seed;
    cfg.exp.seed = *g.seed;
  }
  return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

std::string require_out(const GlobalOptions& g, const char* what) {
  if (g.out.empty()) throw ConfigError(std::string("--out is required (") + what + ")");
  return g.out;
}

int cmd_generate(const GlobalOptions& g, std::ostream& out) {
  const RunConfig cfg = build_config(g);
  try {
    cfg.gen.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  const std::string path = require_out(g, "dataset CSV path");
  const Generated gen = generate_imbalanced(cfg.gen);
  write_dataset_csv(path, gen.data);
  write_truth_csv(truth_path_for(path), gen.truth);
  out << characteristics(gen.data) << count_line(gen.data) << '\n';
  return kExitOk;
}

struct ResampleArgs {
  std::string input;
  std::string method;
  std::string truth;
};

int cmd_resample(const GlobalOptions& g, const ResampleArgs& a, std::ostream& out) {
  const RunConfig cfg = build_config(g);
  ResampleMethod method = cfg.method(a.method);
  validate_method(method);
  const std::string path = require_out(g, "resampled CSV path");

  const Dataset ds = read_dataset_csv(a.input);
  ds.validate();
  std::vector<int> ids;
  if (!a.truth.empty()) ids = assign_to_truth(ds, read_truth_csv(a.truth));
  if (auto* co = std::get_if<ClusterOversampling>(&method); co && a.truth.empty()) {
    co->source = ClusterSource::MeanShift;
  }
  Rng rng = Rng(g.seed.value_or(cfg.gen.seed)).child("resample");
  const Dataset result = apply_method(
      ds, method, rng, ids.empty() ? std::nullopt : std::optional<ClusterIds>(ids));
  write_dataset_csv(path, result);
  out << "Before " << a.method << ":\n" << characteristics(ds) << '\n';
  out << "After " << a.method << ":\n" << characteristics(result);
  return kExitOk;
}

struct EvalArgs {
  std::string input;
  std::string truth;
  std::string methods = "base";
  std::string classifiers = "knn";
  std::size_t folds = 5;
  std::size_t repeats = 1;
};

int cmd_eval(const GlobalOptions& g, const EvalArgs& a, std::ostream& out) {
  RunConfig cfg = build_config(g);
  cfg.set("exp.methods", a.methods);
  cfg.set("exp.classifiers", a.classifiers);
  const ExperimentSpec spec = cfg.experiment();
  if (a.folds < 2 || a.repeats < 1) throw ConfigError("folds must be >= 2 and repeats >= 1");

  const Dataset ds = read_dataset_csv(a.input);
  ds.validate();
  std::vector<int> ids;
  if (!a.truth.empty()) ids = assign_to_truth(ds, read_truth_csv(a.truth));
  auto methods = spec.methods;
  for (auto& m : methods) {
    if (auto* co = std::get_if<ClusterOversampling>(&m); co && ids.empty()) {
      co->source = ClusterSource::MeanShift;
    }
  }

  const Rng root(g.seed.value_or(cfg.exp.seed));
  std::vector<CrossValidation> runs;
  for (std::size_t r = 0; r < a.repeats; ++r) {
    runs.push_back(cross_validate(ds, ids.empty() ? std::nullopt : std::optional<ClusterIds>(ids),
                                  methods, spec.classifiers, a.folds, root.child("repeat", r)));
  }

  ExperimentReport report;
  const ClassSummary s = summarize(ds);
  Cell cell{0, 0, ds.size(),
            {static_cast<int>(s.majority_count()), static_cast<int>(s.minority_count())}, 0.0};
  for (std::size_t m = 0; m < methods.size(); ++m) {
    for (std::size_t c = 0; c < spec.classifiers.size(); ++c) {
      ReportRow row;
      row.cell = cell;
      row.method = method_name(methods[m]);
      row.classifier = classifier_name(spec.classifiers[c]);
      std::vector<Metrics> samples;
      for (const auto& cv : runs) {
        for (std::size_t f = 0; f < a.folds; ++f) samples.push_back(cv.at(m, c, f));
      }
      row.runs = samples.size();
      const MetricStats stats = aggregate(samples);
      row.mean = stats.mean;
      row.stddev = stats.stddev;
      report.rows.push_back(row);
    }
  }

  char line[160];
  std::snprintf(line, sizeof line, "%-9s %-6s %11s %11s %9s %7s %7s\n", "method", "clf",
                "sensitivity", "specificity", "accuracy", "gmean", "auc");
  out << line;
  for (const auto& row : report.rows) {
    std::snprintf(line, sizeof line, "%-9s %-6s %11.4f %11.4f %9.4f %7.4f %7.4f\n",
                  row.method.c_str(), row.classifier.c_str(), row.mean.sensitivity,
                  row.mean.specificity, row.mean.accuracy, row.mean.gmean, row.mean.auc);
    out << line;
  }
  if (!g.out.empty()) {
    std::ostringstream csv;
    write_report_csv(csv, report);
    write_text(g.out, csv.str());
  }
  return kExitOk;
}

int cmd_experiment(const GlobalOptions& g, std::ostream& out, std::ostream& err) {
  if (g.config.empty()) throw ConfigError("experiment needs --config");
  const RunConfig cfg = build_config(g);
  const ExperimentSpec spec = cfg.experiment();
  try {
    spec.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  const fs::path dir = require_out(g, "output directory");
  fs::create_directories(dir);

  const ExperimentReport report = run_experiment(spec, [&](std::size_t done, std::size_t total) {
    err << "[" << done << "/" << total << "] work units done\n";
  });
  std::ostringstream csv, pivot;
  write_report_csv(csv, report);
  write_pivot(pivot, report);
  write_text(dir / "report.csv", csv.str());
  write_text(dir / "pivot.txt", pivot.str());
  out << "wrote " << report.rows.size() << " rows to " << (dir / "report.csv").string() << '\n';
  if (report.error_count > 0) {
    err << "warning: " << report.error_count << " cell(s) failed; see the error column\n";
  }
  return kExitOk;
}

struct PlotArgs {
  std::string input;
  bool show_centers = false;
  bool show_kinds = false;
};

int cmd_plot(const GlobalOptions& g, const PlotArgs& a, std::ostream& out) {
  const std::string path = require_out(g, "SVG path");
  const Dataset ds = read_dataset_csv(a.input);
  write_text(path, render_svg(ds, {a.show_centers, a.show_kinds}));
  out << "wrote " << path << '\n';
  return kExitOk;
}

}  // namespace

std::string characteristics(const Dataset& ds) {
  const ClassSummary s = summarize(ds);
  std::ostringstream out;
  out << "Number of samples: " << ds.size() << '\n'
      << "Number of features: " << ds.dims() << '\n'
      << "Majority class label: " << s.majority_label << '\n'
      << "Number of majority class samples: " << s.majority_count() << '\n'
      << "Minority class label: " << s.minority_label << '\n'
      << "Number of Minority class sample: " << s.minority_count() << '\n'
      << "Imbalance Ratio : " << one_decimal(s.imbalance_ratio) << '\n';
  return out.str();
}

std::string count_line(const Dataset& ds) {
  const ClassSummary s = summarize(ds);
  return std::to_string(s.majority_count()) + " / " + std::to_string(s.minority_count()) +
         ", IR " + one_decimal(s.imbalance_ratio);
}

std::string truth_path_for(const std::string& dataset_path) {
  fs::path p(dataset_path);
  const std::string stem = p.has_extension() ? p.stem().string() : p.filename().string();
  return (p.parent_path() / (stem + ".truth.csv")).string();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"skewbench: synthetic imbalanced data, resampling and evaluation"};
  app.require_subcommand(1);
  app.footer(config_help() +
             "\nEnvironment: SKEWBENCH_THREADS caps worker threads (0 = all cores).\n"
             "Exit codes: 0 success, 1 runtime/data error, 2 usage/config error.");

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Master seed (overrides gen.seed and exp.seed)");
  app.add_option("--config", g.config, "key = value config file");
  app.add_option("--out", g.out, "Output file or directory");
  app.add_option("--set", g.settings, "Config override key=value (repeatable)");

  auto* generate = app.add_subcommand("generate", "Generate a synthetic imbalanced dataset");

  ResampleArgs ra;
  auto* resample = app.add_subcommand("resample", "Apply a resampling method to a dataset CSV");
  resample->add_option("--in", ra.input, "Input dataset CSV")->required();
  resample->add_option("--method", ra.method, std::string("One of: ") + std::string(kMethodNames))
      ->required();
  resample->add_option("--truth", ra.truth, "Ground-truth sidecar for sub-clusters");

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Cross-validate classifiers on a dataset CSV");
  eval->add_option("--in", ea.input, "Input dataset CSV")->required();
  eval->add_option("--truth", ea.truth, "Ground-truth sidecar for sub-clusters");
  eval->add_option("--methods", ea.methods, "Comma list of methods")->capture_default_str();
  eval->add_option("--classifiers", ea.classifiers, "Comma list: knn, tree")->capture_default_str();
  eval->add_option("--folds", ea.folds, "Stratified folds")->capture_default_str();
  eval->add_option("--repeats", ea.repeats, "Repeats")->capture_default_str();

  auto* experiment = app.add_subcommand("experiment", "Run an experiment grid from --config");

  PlotArgs pa;
  auto* plot = app.add_subcommand("plot", "Render a 2-D dataset CSV as SVG");
  plot->add_option("--in", pa.input, "Input dataset CSV")->required();
  plot->add_flag("--show-centers", pa.show_centers, "Mark mean-shift minority centers");
  plot->add_flag("--show-kinds", pa.show_kinds, "Ring borderline and rare points");

  for (auto* sub : {generate, resample, eval, experiment, plot}) sub->fallthrough();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(g, out);
    if (resample->parsed()) return cmd_resample(g, ra, out);
    if (eval->parsed()) return cmd_eval(g, ea, out);
    if (experiment->parsed()) return cmd_experiment(g, out, err);
    if (plot->parsed()) return cmd_plot(g, pa, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace skewbench

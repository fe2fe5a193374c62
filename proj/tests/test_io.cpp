#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "skewbench/config.hpp"
#include "skewbench/csv.hpp"
#include "skewbench/datagen.hpp"
#include "skewbench/report.hpp"

using namespace skewbench;

namespace {

Dataset round_trip(const Dataset& ds) {
  std::stringstream buf;
  write_dataset_csv(buf, ds);
  return read_dataset_csv(buf);
}

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

ExperimentReport fake_report() {
  ExperimentReport r;
  GeneratorGrid grid;
  grid.subclusters = {2, 3, 4, 5, 6};
  grid.sizes = {600, 400, 200};
  for (const auto& cell : expand_grid(grid)) {
    ReportRow row;
    row.cell = cell;
    row.method = "base";
    row.classifier = "knn";
    row.runs = 50;
    row.mean.auc = 1.0 - 0.01 * static_cast<double>(cell.index);
    r.rows.push_back(row);
  }
  return r;
}

}  // namespace

TEST_CASE("dataset CSV round trip is exact") {
  Rng rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    auto ds = oracle::random_dataset(rng, 1 + rng.index(50), 1 + rng.index(4));
    for (std::size_t i = 0; i < ds.size(); ++i) {
      ds.points(i, 0) *= std::pow(10.0, static_cast<double>(rng.index(40)) - 20.0);
    }
    if (trial % 2) {
      for (int l : ds.labels) ds.kinds.push_back(l ? ExampleKind::Borderline : ExampleKind::Majority);
    }
    CHECK(round_trip(ds) == ds);
  }
}

TEST_CASE("extreme doubles survive the text format") {
  Dataset ds;
  ds.points = PointMatrix(3, {std::numeric_limits<double>::min(), std::numeric_limits<double>::max(),
                              -0.1, 1.0 / 3.0, 5e-324, 123456789.123456789});
  ds.labels = {0, 1};
  CHECK(round_trip(ds) == ds);
}

TEST_CASE("dataset CSV header and kinds") {
  GenSpec s;
  s.n_samples = 40;
  s.disturbance_ratio = 0.5;
  const auto g = generate_imbalanced(s);
  std::stringstream buf;
  write_dataset_csv(buf, g.data);
  std::string header;
  std::getline(buf, header);
  CHECK(header == "f0,f1,label,kind");
  std::string first;
  std::getline(buf, first);
  CHECK(first.substr(first.size() - 11) == ",0,majority");
}

TEST_CASE("malformed rows name their line") {
  std::istringstream bad_value("f0,f1,label\n1,2,0\n3,x,1\n");
  CHECK_THROWS_WITH_AS(read_dataset_csv(bad_value), doctest::Contains("line 3"), Error);
  std::istringstream short_row("f0,f1,label\n1,2,0\n3,4,1\n5,1\n");
  CHECK_THROWS_WITH_AS(read_dataset_csv(short_row), doctest::Contains("line 4"), Error);
  std::istringstream negative("f0,label\n1,-1\n");
  CHECK_THROWS_WITH_AS(read_dataset_csv(negative), doctest::Contains("line 2"), Error);
  std::istringstream bad_kind("f0,label,kind\n1,0,noise\n");
  CHECK_THROWS_WITH_AS(read_dataset_csv(bad_kind), doctest::Contains("line 2"), Error);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_dataset_csv(empty), Error);
}

TEST_CASE("truth sidecar round trip and assignment") {
  GenSpec s;
  s.n_samples = 300;
  s.minority_subclusters = 4;
  s.majority_subclusters = 2;
  const auto g = generate_imbalanced(s);
  std::stringstream buf;
  write_truth_csv(buf, g.truth);
  std::string header;
  std::getline(buf, header);
  CHECK(header == "center_x0,center_x1,label,subcluster");
  buf.seekg(0);
  const auto back = read_truth_csv(buf);
  CHECK(back.majority_centers == g.truth.majority_centers);
  CHECK(back.minority_centers == g.truth.minority_centers);
  CHECK(back.majority_label == 0);
  CHECK(back.minority_label == 1);
  // Without disturbance every point sits nearest its own center in practice.
  const auto ids = assign_to_truth(g.data, back);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) agree += ids[i] == g.truth.subcluster[i];
  CHECK(static_cast<double>(agree) / static_cast<double>(ids.size()) > 0.9);
}

TEST_CASE("split_csv_line") {
  CHECK(split_csv_line("a,b,,c") == std::vector<std::string>{"a", "b", "", "c"});
  CHECK(split_csv_line("x") == std::vector<std::string>{"x"});
}

TEST_CASE("config parsing") {
  std::istringstream in(
      "# table grid\n"
      "gen.ratio = 1:7\n"
      "gen.n_samples=800   # trailing comment\n"
      "\n"
      "exp.subclusters = 2,3,4\n"
      "exp.sizes = 600, 400\n"
      "exp.methods = base,ro,ncr\n"
      "exp.classifiers = knn,tree\n"
      "smote.k = 4\n"
      "sparsity.scope = both\n");
  const auto cfg = parse_config(in);
  CHECK(cfg.gen.n_samples == 800);
  CHECK(cfg.gen.class_ratio.majority_parts == 7);
  CHECK(cfg.gen.class_ratio.minority_parts == 1);
  CHECK(cfg.smote.k == 4);
  CHECK(cfg.sparsity.scope == SparsityScope::BothClasses);
  const auto exp = cfg.experiment();
  CHECK(exp.grid.subclusters == std::vector<std::size_t>{2, 3, 4});
  CHECK(exp.grid.sizes == std::vector<std::size_t>{600, 400});
  CHECK(exp.methods.size() == 3);
  CHECK(exp.classifiers.size() == 2);
}

TEST_CASE("config errors") {
  std::istringstream unknown("gen.colour = red\n");
  CHECK_THROWS_AS(parse_config(unknown), ConfigError);
  std::istringstream no_equals("gen.n_samples 10\n");
  CHECK_THROWS_WITH_AS(parse_config(no_equals), doctest::Contains("line 1"), ConfigError);
  std::istringstream bad_number("gen.seed = 1\ngen.n_samples = many\n");
  CHECK_THROWS_WITH_AS(parse_config(bad_number), doctest::Contains("line 2"), ConfigError);
  RunConfig cfg;
  CHECK_THROWS_WITH_AS(cfg.method("adasyn"), doctest::Contains("smote"), ConfigError);
  CHECK_THROWS_AS(cfg.classifier("svm"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/skewbench.cfg"), ConfigError);
}

TEST_CASE("config help lists every section") {
  const auto help = config_help();
  for (auto key : {"gen.n_samples", "exp.repeats", "smote.amount", "ncr.k", "sparsity.alpha", "tree.max_depth"}) {
    CHECK(help.find(key) != std::string::npos);
  }
}

TEST_CASE("report CSV schema") {
  const auto r = fake_report();
  std::ostringstream out;
  write_report_csv(out, r);
  const auto text = out.str();
  CHECK(count_lines(text) == 16);
  CHECK(text.substr(0, text.find('\n')) ==
        "cell,subclusters,n_samples,ratio,disturbance,method,classifier,runs,"
        "sensitivity_mean,sensitivity_std,specificity_mean,specificity_std,accuracy_mean,"
        "accuracy_std,gmean_mean,gmean_std,auc_mean,auc_std,error");
  CHECK(text.find("\n0,2,600,1:5,0.000000,base,knn,50,") != std::string::npos);
}

TEST_CASE("failed rows carry nan and the message") {
  ExperimentReport r;
  ReportRow row;
  row.method = "co";
  row.classifier = "tree";
  row.mean.auc = std::nan("");
  row.error = "center packing infeasible, twice";
  r.rows.push_back(row);
  std::ostringstream out;
  write_report_csv(out, r);
  CHECK(out.str().find(",nan,") != std::string::npos);
  CHECK(out.str().find("center packing infeasible; twice\n") != std::string::npos);
}

TEST_CASE("pivot mirrors the sub-cluster by size layout") {
  std::ostringstream out;
  write_pivot(out, fake_report());
  const auto text = out.str();
  const auto block = text.find("# metric=auc method=base classifier=knn ratio=1:5 disturbance=0.000000\n");
  REQUIRE(block != std::string::npos);
  std::istringstream lines(text.substr(block));
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  CHECK(line == "subclusters        600       400       200");
  std::getline(lines, line);
  CHECK(line == "2                1.000     0.990     0.980");
  for (int i = 0; i < 4; ++i) std::getline(lines, line);
  CHECK(line == "6                0.880     0.870     0.860");
}

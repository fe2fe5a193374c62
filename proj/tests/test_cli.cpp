#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "cli_harness.hpp"
#include "skewbench/clustering.hpp"
#include "skewbench/csv.hpp"

using namespace skewbench;
using harness::count_of;
using harness::run;
using harness::slurp;

namespace fs = std::filesystem;

namespace {

const char* kSmokeConfig =
    "gen.ratio = 1:4\n"
    "exp.subclusters = 2\n"
    "exp.sizes = 150\n"
    "exp.methods = base,ro,ncr\n"
    "exp.classifiers = knn,tree\n"
    "exp.folds = 3\n"
    "exp.repeats = 1\n";

std::string data_316(const fs::path& dir) {
  const auto path = (dir / "data.csv").string();
  REQUIRE(run({"--seed", "4", "--set", "gen.ratio=21:79", "--set", "gen.disturbance=0.3", "--out",
               path, "generate"})
              .code == 0);
  return path;
}

}  // namespace

TEST_CASE("generate prints the class characteristics summary") {
  const auto dir = harness::scratch("cli-gen");
  const auto r = run({"--set", "gen.ratio=21:79", "--out", (dir / "d.csv").string(), "generate"});
  CHECK(r.code == 0);
  CHECK(r.out.find("316 / 84, IR 3.8\n") != std::string::npos);
  CHECK(r.out.find("Number of samples: 400\n") != std::string::npos);
  CHECK(r.out.find("Minority class label: 1\n") != std::string::npos);
  CHECK(r.out.find("Imbalance Ratio : 3.8\n") != std::string::npos);
  CHECK(fs::exists(dir / "d.truth.csv"));
}

TEST_CASE("generate is byte-deterministic") {
  const auto dir = harness::scratch("cli-gen-det");
  for (auto name : {"a.csv", "b.csv"}) {
    REQUIRE(run({"--seed", "11", "--set", "gen.rare=0.2", "--set", "gen.disturbance=0.5", "--out",
                 (dir / name).string(), "generate"})
                .code == 0);
  }
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(slurp(dir / "a.truth.csv") == slurp(dir / "b.truth.csv"));
}

TEST_CASE("generate rejects fractions that overflow") {
  const auto dir = harness::scratch("cli-gen-bad");
  const auto r = run({"--set", "gen.safe=0.5", "--set", "gen.disturbance=0.5", "--set",
                      "gen.rare=0.2", "--out", (dir / "x.csv").string(), "generate"});
  CHECK(r.code == 2);
  CHECK(r.err.find("must equal 1") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--set", "gen.nope=1", "--out", "/tmp/x.csv", "generate"}).code == 2);
  CHECK(run({"generate"}).code == 2);
  CHECK(run({"--config", "/nonexistent.cfg", "--out", "/tmp/x", "experiment"}).code == 2);
}

TEST_CASE("resample NCR keeps the minority count") {
  const auto dir = harness::scratch("cli-ncr");
  const auto in = data_316(dir);
  const auto r = run({"--out", (dir / "ncr.csv").string(), "resample", "--in", in, "--method", "ncr"});
  REQUIRE(r.code == 0);
  const auto after = r.out.substr(r.out.find("After ncr:"));
  CHECK(after.find("Number of Minority class sample: 84\n") != std::string::npos);
  CHECK(summarize(read_dataset_csv(fs::path(dir / "ncr.csv"))).minority_count() == 84);
}

TEST_CASE("resample RO and CO print the balanced block") {
  const auto dir = harness::scratch("cli-ro");
  const auto in = data_316(dir);
  for (auto method : {"ro", "co"}) {
    const auto r = run({"--seed", "2", "--out", (dir / "o.csv").string(), "resample", "--in", in,
                        "--method", method, "--truth", (dir / "data.truth.csv").string()});
    REQUIRE(r.code == 0);
    const auto after = r.out.substr(r.out.find("After"));
    CHECK(after.find("Number of samples: 632\n") != std::string::npos);
    CHECK(after.find("Majority class label: 1\n") != std::string::npos);
    CHECK(after.find("Minority class label: 0\n") != std::string::npos);
    CHECK(after.find("Imbalance Ratio : 1.0\n") != std::string::npos);
  }
}

TEST_CASE("RO on a balanced file reproduces it") {
  const auto dir = harness::scratch("cli-ro-bal");
  REQUIRE(run({"--set", "gen.ratio=1:1", "--out", (dir / "bal.csv").string(), "generate"}).code == 0);
  REQUIRE(run({"--out", (dir / "ro.csv").string(), "resample", "--in", (dir / "bal.csv").string(),
               "--method", "ro"})
              .code == 0);
  CHECK(slurp(dir / "bal.csv") == slurp(dir / "ro.csv"));
}

TEST_CASE("unknown method lists the valid ones") {
  const auto dir = harness::scratch("cli-unknown");
  const auto in = data_316(dir);
  const auto r = run({"--out", (dir / "o.csv").string(), "resample", "--in", in, "--method", "adasyn"});
  CHECK(r.code == 2);
  CHECK(r.err.find("base, ro, co, smote, ncr, sparsity") != std::string::npos);
}

TEST_CASE("malformed input names the line and exits 1") {
  const auto dir = harness::scratch("cli-malformed");
  harness::spit(dir / "bad.csv", "f0,f1,label\n0,0,0\n1,1,1\n2,oops,0\n");
  const auto r = run({"--out", (dir / "o.csv").string(), "resample", "--in",
                      (dir / "bad.csv").string(), "--method", "ro"});
  CHECK(r.code == 1);
  CHECK(r.err.find("line 4") != std::string::npos);
}

TEST_CASE("eval prints one line per method and classifier") {
  const auto dir = harness::scratch("cli-eval");
  const auto in = data_316(dir);
  const auto r = run({"--seed", "3", "--out", (dir / "eval.csv").string(), "eval", "--in", in,
                      "--truth", (dir / "data.truth.csv").string(), "--methods", "base,co,ncr",
                      "--classifiers", "knn,tree"});
  REQUIRE(r.code == 0);
  CHECK(count_of(r.out, "\n") == 7);
  CHECK(count_of(slurp(dir / "eval.csv"), "\n") == 7);
}

TEST_CASE("experiment smoke run writes report and pivot") {
  const auto dir = harness::scratch("cli-exp");
  harness::spit(dir / "smoke.cfg", kSmokeConfig);
  const auto r = run({"--config", (dir / "smoke.cfg").string(), "--out", (dir / "out").string(),
                      "experiment"});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("[1/1] work units done") != std::string::npos);
  const auto report = slurp(dir / "out" / "report.csv");
  CHECK(count_of(report, "\n") == 1 + 3 * 2);
  CHECK(report.rfind("cell,subclusters,n_samples,ratio,disturbance,method,classifier,runs,", 0) == 0);
  CHECK(fs::exists(dir / "out" / "pivot.txt"));
}

TEST_CASE("experiment seed changes values but not schema") {
  const auto dir = harness::scratch("cli-exp-seed");
  harness::spit(dir / "smoke.cfg", kSmokeConfig);
  const auto cfg = (dir / "smoke.cfg").string();
  REQUIRE(run({"--seed", "1", "--config", cfg, "--out", (dir / "a").string(), "experiment"}).code == 0);
  REQUIRE(run({"--seed", "2", "--config", cfg, "--out", (dir / "b").string(), "experiment"}).code == 0);
  const auto a = slurp(dir / "a" / "report.csv");
  const auto b = slurp(dir / "b" / "report.csv");
  CHECK(a != b);
  CHECK(a.substr(0, a.find('\n')) == b.substr(0, b.find('\n')));
  CHECK(count_of(a, "\n") == count_of(b, "\n"));
  CHECK(count_of(a, ",") == count_of(b, ","));
}

TEST_CASE("experiment failures are warnings, not crashes") {
  const auto dir = harness::scratch("cli-exp-fail");
  harness::spit(dir / "fail.cfg", std::string(kSmokeConfig) + "gen.min_separation = 40\n");
  const auto r = run({"--config", (dir / "fail.cfg").string(), "--out", (dir / "o").string(), "experiment"});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning: 1 cell(s) failed") != std::string::npos);
}

TEST_CASE("plot crosses match mean-shift centers") {
  const auto dir = harness::scratch("cli-plot");
  const auto csv = (dir / "five.csv").string();
  REQUIRE(run({"--seed", "6", "--set", "gen.minority_subclusters=5", "--set", "gen.n_samples=600",
               "--set", "gen.ratio=1:2", "--set", "gen.min_separation=8", "--set", "gen.box_lo=-25",
               "--set", "gen.box_hi=25", "--out", csv, "generate"})
              .code == 0);
  REQUIRE(run({"--out", (dir / "a.svg").string(), "plot", "--in", csv, "--show-centers", "--show-kinds"}).code == 0);
  const auto svg = slurp(dir / "a.svg");
  const auto ds = read_dataset_csv(fs::path(csv));
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.labels[i] == 1) rows.push_back(i);
  }
  const auto expected = discover_clusters(ds.subset(rows).points).cluster_count();
  CHECK(count_of(svg, "<path ") == expected);
  CHECK(svg.find("width=\"800\" height=\"600\"") != std::string::npos);
  CHECK(count_of(svg, "<polygon ") == rows.size());
  CHECK(svg.find("#4477AA") != std::string::npos);
  CHECK(svg.find("#EE6677") != std::string::npos);
  CHECK(svg.rfind("<circle") < svg.find("<polygon"));

  REQUIRE(run({"--out", (dir / "b.svg").string(), "plot", "--in", csv, "--show-centers", "--show-kinds"}).code == 0);
  CHECK(slurp(dir / "b.svg") == svg);
  REQUIRE(run({"--out", (dir / "c.svg").string(), "plot", "--in", csv}).code == 0);
  CHECK(count_of(slurp(dir / "c.svg"), "<path ") == 0);
}

TEST_CASE("plot errors") {
  const auto dir = harness::scratch("cli-plot-bad");
  harness::spit(dir / "empty.csv", "f0,f1,label\n");
  auto r = run({"--out", (dir / "e.svg").string(), "plot", "--in", (dir / "empty.csv").string()});
  CHECK(r.code == 1);
  harness::spit(dir / "3d.csv", "f0,f1,f2,label\n0,0,0,0\n1,1,1,1\n");
  r = run({"--out", (dir / "e.svg").string(), "plot", "--in", (dir / "3d.csv").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("plotting requires 2-D data") != std::string::npos);
}

TEST_CASE("experiment output is identical for 1 and 4 threads") {
  const auto dir = harness::scratch("cli-threads");
  harness::spit(dir / "grid.cfg", std::string(kSmokeConfig) + "exp.subclusters = 2,3\nexp.repeats = 2\n");
  const auto cfg = (dir / "grid.cfg").string();
  {
    harness::ThreadsEnv env("1");
    REQUIRE(run({"--config", cfg, "--out", (dir / "t1").string(), "experiment"}).code == 0);
  }
  {
    harness::ThreadsEnv env("4");
    REQUIRE(run({"--config", cfg, "--out", (dir / "t4").string(), "experiment"}).code == 0);
  }
  CHECK(slurp(dir / "t1" / "report.csv") == slurp(dir / "t4" / "report.csv"));
  CHECK(slurp(dir / "t1" / "pivot.txt") == slurp(dir / "t4" / "pivot.txt"));
}

TEST_CASE("the installed binary maps errors to exit codes") {
  const char* bin = std::getenv("SKEWBENCH_CLI");
  if (bin == nullptr) return;
  const auto dir = harness::scratch("cli-binary");
  const std::string base = std::string("\"") + bin + "\"";
  const auto status = [](const std::string& cmd) {
    const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status(base + " --out " + (dir / "d.csv").string() + " generate") == 0);
  CHECK(status(base + " --out " + (dir / "o.csv").string() + " resample --in " +
               (dir / "d.csv").string() + " --method nope") == 2);
  CHECK(status(base + " --out " + (dir / "o.csv").string() + " resample --in " +
               (dir / "missing.csv").string() + " --method ro") == 1);
}

#include "skewbench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <tuple>

namespace skewbench {

namespace {

std::string fixed(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string three_decimals(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string ratio_text(const ClassRatio& r) {
  return std::to_string(r.minority_parts) + ":" + std::to_string(r.majority_parts);
}

std::string sanitize(std::string text) {
  std::replace(text.begin(), text.end(), ',', ';');
  std::replace(text.begin(), text.end(), '\n', ' ');
  return text;
}

template <class T>
void push_unique(std::vector<T>& v, const T& x) {
  if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
}

}  // namespace

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
  out << "cell,subclusters,n_samples,ratio,disturbance,method,classifier,runs";
  for (auto name : kMetricNames) out << ',' << name << "_mean," << name << "_std";
  out << ",error\n";
  for (const auto& row : report.rows) {
    out << row.cell.index << ',' << row.cell.subclusters << ',' << row.cell.n_samples << ','
        << ratio_text(row.cell.ratio) << ',' << fixed(row.cell.disturbance) << ',' << row.method
        << ',' << row.classifier << ',' << row.runs;
    for (auto name : kMetricNames) {
      out << ',' << fixed(metric_value(row.mean, name)) << ','
          << fixed(metric_value(row.stddev, name));
    }
    out << ',' << sanitize(row.error) << '\n';
  }
}

void write_pivot(std::ostream& out, const ExperimentReport& report) {
  std::vector<std::string> methods, classifiers, slices;
  std::vector<std::size_t> subclusters, sizes;
  using Key = std::tuple<std::string, std::string, std::string, std::size_t, std::size_t>;
  std::map<Key, const ReportRow*> lookup;
  for (const auto& row : report.rows) {
    const std::string slice =
        "ratio=" + ratio_text(row.cell.ratio) + " disturbance=" + fixed(row.cell.disturbance);
    push_unique(methods, row.method);
    push_unique(classifiers, row.classifier);
    push_unique(slices, slice);
    push_unique(subclusters, row.cell.subclusters);
    push_unique(sizes, row.cell.n_samples);
    lookup[{row.method, row.classifier, slice, row.cell.subclusters, row.cell.n_samples}] = &row;
  }

  char cell[32];
  for (auto metric : kMetricNames) {
    for (const auto& method : methods) {
      for (const auto& classifier : classifiers) {
        for (const auto& slice : slices) {
          out << "# metric=" << metric << " method=" << method << " classifier=" << classifier
              << ' ' << slice << '\n';
          std::snprintf(cell, sizeof cell, "%-12s", "subclusters");
          out << cell;
          for (auto n : sizes) {
            std::snprintf(cell, sizeof cell, "%10zu", n);
            out << cell;
          }
          out << '\n';
          for (auto sub : subclusters) {
            std::snprintf(cell, sizeof cell, "%-12zu", sub);
            out << cell;
            for (auto n : sizes) {
              const auto it = lookup.find({method, classifier, slice, sub, n});
              const std::string v =
                  it == lookup.end() ? "-" : it->second->error.empty()
                                                 ? three_decimals(metric_value(it->second->mean, metric))
                                                 : "error";
              std::snprintf(cell, sizeof cell, "%10s", v.c_str());
              out << cell;
            }
            out << '\n';
          }
          out << '\n';
        }
      }
    }
  }
}

}  // namespace skewbench

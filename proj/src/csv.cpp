#include "skewbench/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "skewbench/clustering.hpp"

namespace skewbench {

namespace {

[[noreturn]] void fail_line(std::size_t line, const std::string& what) {
  throw Error("line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& text, std::size_t line) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) fail_line(line, "invalid number '" + text + "'");
  if (!std::isfinite(v)) fail_line(line, "non-finite value '" + text + "'");
  return v;
}

int parse_label(const std::string& text, std::size_t line) {
  int v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || v < 0) {
    fail_line(line, "invalid label '" + text + "' (expected a nonnegative integer)");
  }
  return v;
}

bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

void write_dataset_csv(std::ostream& out, const Dataset& ds) {
  ds.validate();
  for (std::size_t j = 0; j < ds.dims(); ++j) out << 'f' << j << ',';
  out << "label";
  if (ds.has_kinds()) out << ",kind";
  out << '\n';
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = 0; j < ds.dims(); ++j) out << format_double(ds.points(i, j)) << ',';
    out << ds.labels[i];
    if (ds.has_kinds()) out << ',' << to_string(ds.kinds[i]);
    out << '\n';
  }
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& ds) {
  auto out = open_out(path);
  write_dataset_csv(out, ds);
  if (!out) throw Error("write failed: " + path.string());
}

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!read_line(in, line)) throw Error("line 1: missing header");
  const auto header = split_csv_line(line);
  std::size_t dims = 0;
  while (dims < header.size() && header[dims] == "f" + std::to_string(dims)) ++dims;
  if (dims == 0 || dims >= header.size() || header[dims] != "label") {
    fail_line(1, "header must be f0,...,f{d-1},label[,kind]");
  }
  const bool with_kinds = header.size() == dims + 2;
  if (header.size() > dims + 2 || (with_kinds && header[dims + 1] != "kind")) {
    fail_line(1, "header must be f0,...,f{d-1},label[,kind]");
  }

  Dataset ds;
  ds.points = PointMatrix(dims);
  Point row(dims);
  std::size_t line_no = 1;
  while (read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      fail_line(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
    }
    for (std::size_t j = 0; j < dims; ++j) row[j] = parse_double(fields[j], line_no);
    ds.points.append(row);
    ds.labels.push_back(parse_label(fields[dims], line_no));
    if (with_kinds) {
      const auto kind = parse_kind(fields[dims + 1]);
      if (!kind) fail_line(line_no, "unknown kind '" + fields[dims + 1] + "'");
      ds.kinds.push_back(*kind);
    }
  }
  return ds;
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_dataset_csv(in);
}

void write_truth_csv(std::ostream& out, const GroundTruth& gt) {
  const std::size_t dims = std::max(gt.minority_centers.dims(), gt.majority_centers.dims());
  for (std::size_t j = 0; j < dims; ++j) out << "center_x" << j << ',';
  out << "label,subcluster\n";
  auto emit = [&](const PointMatrix& centers, int label) {
    for (std::size_t i = 0; i < centers.rows(); ++i) {
      for (std::size_t j = 0; j < dims; ++j) out << format_double(centers(i, j)) << ',';
      out << label << ',' << i << '\n';
    }
  };
  emit(gt.majority_centers, gt.majority_label);
  emit(gt.minority_centers, gt.minority_label);
}

void write_truth_csv(const std::filesystem::path& path, const GroundTruth& gt) {
  auto out = open_out(path);
  write_truth_csv(out, gt);
  if (!out) throw Error("write failed: " + path.string());
}

GroundTruth read_truth_csv(std::istream& in) {
  std::string line;
  if (!read_line(in, line)) throw Error("line 1: missing header");
  const auto header = split_csv_line(line);
  std::size_t dims = 0;
  while (dims < header.size() && header[dims] == "center_x" + std::to_string(dims)) ++dims;
  if (dims == 0 || header.size() != dims + 2 || header[dims] != "label" ||
      header[dims + 1] != "subcluster") {
    fail_line(1, "header must be center_x0,...,center_x{d-1},label,subcluster");
  }
  GroundTruth gt;
  gt.minority_centers = PointMatrix(dims);
  gt.majority_centers = PointMatrix(dims);
  std::vector<std::pair<int, Point>> rows;
  std::size_t line_no = 1;
  while (read_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != dims + 2) fail_line(line_no, "wrong field count");
    Point c(dims);
    for (std::size_t j = 0; j < dims; ++j) c[j] = parse_double(fields[j], line_no);
    rows.emplace_back(parse_label(fields[dims], line_no), std::move(c));
  }
  if (rows.empty()) throw Error("ground truth file has no centers");
  // The first label listed belongs to the majority class.
  gt.majority_label = rows.front().first;
  bool minority_seen = false;
  for (auto& [label, c] : rows) {
    if (label == gt.majority_label) {
      gt.majority_centers.append(c);
    } else {
      if (minority_seen && label != gt.minority_label) {
        throw Error("ground truth file lists more than two labels");
      }
      gt.minority_label = label;
      minority_seen = true;
      gt.minority_centers.append(c);
    }
  }
  return gt;
}

GroundTruth read_truth_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_truth_csv(in);
}

std::vector<int> assign_to_truth(const Dataset& ds, const GroundTruth& gt) {
  std::vector<int> ids(ds.size(), 0);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const PointMatrix* centers = nullptr;
    if (ds.labels[i] == gt.minority_label) centers = &gt.minority_centers;
    if (ds.labels[i] == gt.majority_label) centers = &gt.majority_centers;
    if (centers == nullptr || centers->rows() == 0) continue;
    if (centers->dims() != ds.dims()) throw Error("ground truth dimension differs from dataset");
    ids[i] = static_cast<int>(nearest_center(*centers, ds.points.row(i)));
  }
  return ids;
}

}  // namespace skewbench

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "skewbench/core.hpp"
#include "skewbench/datagen.hpp"

namespace skewbench {

/// Shortest text that reads back to the same double: "%.17g".
std::string format_double(double v);

/// Dataset CSV: header `f0,...,f{d-1},label[,kind]`, one row per point,
/// '\n' line ends, no quoting.
void write_dataset_csv(std::ostream& out, const Dataset& ds);
void write_dataset_csv(const std::filesystem::path& path, const Dataset& ds);

/// Throws Error naming the offending line number.
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv(const std::filesystem::path& path);

/// Ground-truth sidecar: header `center_x0,...,center_x{d-1},label,subcluster`,
/// majority centers first.
void write_truth_csv(std::ostream& out, const GroundTruth& gt);
void write_truth_csv(const std::filesystem::path& path, const GroundTruth& gt);
/// Centers only; `subcluster` is left empty.
GroundTruth read_truth_csv(std::istream& in);
GroundTruth read_truth_csv(const std::filesystem::path& path);

/// Sub-cluster id per row: the nearest center of the row's own class.
std::vector<int> assign_to_truth(const Dataset& ds, const GroundTruth& gt);

/// Splits one line on commas (no quoting).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace skewbench

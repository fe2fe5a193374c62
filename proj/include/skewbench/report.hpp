#pragma once

#include <iosfwd>

#include "skewbench/eval.hpp"

namespace skewbench {

/// One row per (cell, method, classifier) with mean and std of every metric.
/// Values use six decimals; failed cells carry `nan` and the error text.
void write_report_csv(std::ostream& out, const ExperimentReport& report);

/// Plain-text pivot tables, one block per metric x method x classifier x
/// (ratio, disturbance): sub-cluster rows against sample-size columns.
void write_pivot(std::ostream& out, const ExperimentReport& report);

}  // namespace skewbench

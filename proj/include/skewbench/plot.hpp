#pragma once

#include <string>

#include "skewbench/core.hpp"

namespace skewbench {

struct PlotOptions {
  bool show_centers = false;
  bool show_kinds = false;
};

/// 800x600 SVG scatter of a 2-D dataset. Majority points are #4477AA
/// circles; minority points are #EE6677 triangles drawn on top. With
/// show_centers, mean-shift centers of the minority class appear as black
/// cross <path> elements; with show_kinds, borderline points get a dashed ring
/// and rare points a double ring.
///
/// Throws Error("plotting requires 2-D data") for d != 2 and Error for an
/// empty dataset.
std::string render_svg(const Dataset& ds, const PlotOptions& options = {});

}  // namespace skewbench

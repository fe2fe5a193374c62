#include "skewbench/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "skewbench/clustering.hpp"

namespace skewbench {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMargin = 30.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

struct Frame {
  double x0, x1, y0, y1;

  double sx(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); }
  double sy(double y) const { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin); }
};

Frame frame_for(const Dataset& ds) {
  Frame f{ds.points(0, 0), ds.points(0, 0), ds.points(0, 1), ds.points(0, 1)};
  for (std::size_t i = 1; i < ds.size(); ++i) {
    f.x0 = std::min(f.x0, ds.points(i, 0));
    f.x1 = std::max(f.x1, ds.points(i, 0));
    f.y0 = std::min(f.y0, ds.points(i, 1));
    f.y1 = std::max(f.y1, ds.points(i, 1));
  }
  if (f.x1 - f.x0 <= 0.0) {
    f.x0 -= 1.0;
    f.x1 += 1.0;
  }
  if (f.y1 - f.y0 <= 0.0) {
    f.y0 -= 1.0;
    f.y1 += 1.0;
  }
  return f;
}

}  // namespace

std::string render_svg(const Dataset& ds, const PlotOptions& options) {
  if (ds.size() == 0) throw Error("cannot plot an empty dataset");
  if (ds.dims() != 2) throw Error("plotting requires 2-D data");
  ds.validate();

  const Frame f = frame_for(ds);
  int minority = ds.labels[0];
  try {
    minority = summarize(ds).minority_label;
  } catch (const Error&) {
    // Single class: everything is drawn as majority.
    minority = -1;
  }

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";

  svg << "<g id=\"majority\" fill=\"#4477AA\">\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.labels[i] == minority) continue;
    svg << "<circle cx=\"" << num(f.sx(ds.points(i, 0))) << "\" cy=\""
        << num(f.sy(ds.points(i, 1))) << "\" r=\"3\"/>\n";
  }
  svg << "</g>\n";

  svg << "<g id=\"minority\" fill=\"#EE6677\">\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.labels[i] != minority) continue;
    const double x = f.sx(ds.points(i, 0));
    const double y = f.sy(ds.points(i, 1));
    svg << "<polygon points=\"" << num(x) << ',' << num(y - 4) << ' ' << num(x - 4) << ','
        << num(y + 3) << ' ' << num(x + 4) << ',' << num(y + 3) << "\"/>\n";
  }
  svg << "</g>\n";

  if (options.show_kinds && ds.has_kinds()) {
    svg << "<g id=\"kinds\" fill=\"none\" stroke=\"black\" stroke-width=\"1\">\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const std::string cx = num(f.sx(ds.points(i, 0)));
      const std::string cy = num(f.sy(ds.points(i, 1)));
      if (ds.kinds[i] == ExampleKind::Borderline) {
        svg << "<circle cx=\"" << cx << "\" cy=\"" << cy
            << "\" r=\"7\" stroke-dasharray=\"2,2\"/>\n";
      } else if (ds.kinds[i] == ExampleKind::Rare) {
        svg << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"7\"/>\n";
        svg << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"9\"/>\n";
      }
    }
    svg << "</g>\n";
  }

  if (options.show_centers && minority >= 0) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (ds.labels[i] == minority) rows.push_back(i);
    }
    if (rows.size() >= 2) {
      const ClusterModel model = discover_clusters(ds.subset(rows).points);
      svg << "<g id=\"centers\" stroke=\"black\" stroke-width=\"2\">\n";
      for (std::size_t c = 0; c < model.centers.rows(); ++c) {
        const double x = f.sx(model.centers(c, 0));
        const double y = f.sy(model.centers(c, 1));
        svg << "<path d=\"M" << num(x - 6) << ' ' << num(y - 6) << " L" << num(x + 6) << ' '
            << num(y + 6) << " M" << num(x - 6) << ' ' << num(y + 6) << " L" << num(x + 6)
            << ' ' << num(y - 6) << "\"/>\n";
      }
      svg << "</g>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace skewbench

#pragma once

// SVG figures of planar coverings: each set is rasterised by membership over a
// square grid and written as one filled path of row runs.

#include <array>
#include <cstdio>
#include <sstream>
#include <string>

#include "ballcover/covering.hpp"
#include "ballcover/shape.hpp"

namespace ballcover {

inline constexpr std::size_t kPlotGrid = 512;

struct PlotOptions {
  std::size_t grid = kPlotGrid;
  double extent = 1.1;  // plotted window is [-extent, extent]^2
  double pixel = 1.0;   // SVG units per grid cell
};

inline std::string plot_svg(const Covering& cov, const PlotOptions& opt = {}) {
  if (cov.space.dim != 2) throw InvalidArgument("plot needs a planar covering (dim 2)");
  if (opt.grid == 0) throw InvalidArgument("plot grid must be positive");
  static constexpr std::array<const char*, 10> palette{
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
      "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

  const std::size_t n = opt.grid;
  const double cell = 2.0 * opt.extent / static_cast<double>(n);
  const double size = opt.pixel * static_cast<double>(n);
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(size) << "\" height=\""
      << num(size) << "\" viewBox=\"0 0 " << num(size) << ' ' << num(size) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (std::size_t i = 0; i < cov.sets.size(); ++i) {
    const int label = static_cast<int>(i) + cov.label_base();
    out << "<g id=\"set-" << label << "\" fill=\"" << palette[i % palette.size()]
        << "\" fill-opacity=\"0.35\" stroke=\"none\">\n<path d=\"";
    for (std::size_t row = 0; row < n; ++row) {
      const double y = opt.extent - (static_cast<double>(row) + 0.5) * cell;
      std::size_t col = 0;
      while (col < n) {
        auto inside = [&](std::size_t c) {
          const double x = -opt.extent + (static_cast<double>(c) + 0.5) * cell;
          return contains(cov.space, cov.sets[i], Vector{x, y});
        };
        if (!inside(col)) {
          ++col;
          continue;
        }
        const std::size_t start = col;
        while (col < n && inside(col)) ++col;
        out << 'M' << num(opt.pixel * start) << ' ' << num(opt.pixel * row) << 'h'
            << num(opt.pixel * (col - start)) << 'v' << num(opt.pixel) << 'h'
            << num(-opt.pixel * (col - start)) << 'z';
      }
    }
    out << "\"/>\n<title>set " << label << "</title>\n</g>\n";
  }

  const double mid = size / 2.0;
  out << "<circle id=\"ball\" cx=\"" << num(mid) << "\" cy=\"" << num(mid) << "\" r=\""
      << num(opt.pixel / cell) << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "<circle id=\"center\" cx=\"" << num(mid) << "\" cy=\"" << num(mid)
      << "\" r=\"4\" fill=\"black\"/>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace ballcover

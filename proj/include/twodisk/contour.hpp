#ifndef TWODISK_CONTOUR_HPP
#define TWODISK_CONTOUR_HPP

#include <array>
#include <fstream>
#include <string>
#include <vector>

#include "twodisk/geometry.hpp"

namespace twodisk {

// Regular sampling grid of a scalar field with a validity mask.
struct FieldGrid {
  double x0, y0, x1, y1;
  int nx, ny;  // samples per axis
  std::vector<double> values;  // row-major, ny rows of nx
  std::vector<char> masked;    // 1 = invalid (inside a disk or too close)

  double x_at(int i) const { return x0 + (x1 - x0) * i / (nx - 1); }
  double y_at(int j) const { return y0 + (y1 - y0) * j / (ny - 1); }
  double at(int i, int j) const { return values[j * nx + i]; }
  bool is_masked(int i, int j) const { return masked[j * nx + i] != 0; }
};

using Segment = std::array<Vec2, 2>;

// Marching squares on the unmasked cells: a cell contributes only if all four
// corners are valid.  The two ambiguous saddle cases are resolved with the
// cell-center average.
inline std::vector<Segment> contour_level(const FieldGrid& g, double level) {
  std::vector<Segment> segs;
  auto interp = [&](double xa, double ya, double va, double xb, double yb, double vb) {
    double t = (level - va) / (vb - va);
    return Vec2(xa + t * (xb - xa), ya + t * (yb - ya));
  };
  for (int j = 0; j + 1 < g.ny; ++j)
    for (int i = 0; i + 1 < g.nx; ++i) {
      if (g.is_masked(i, j) || g.is_masked(i + 1, j) || g.is_masked(i, j + 1) ||
          g.is_masked(i + 1, j + 1))
        continue;
      double v00 = g.at(i, j), v10 = g.at(i + 1, j);
      double v01 = g.at(i, j + 1), v11 = g.at(i + 1, j + 1);
      int c = (v00 > level) | ((v10 > level) << 1) | ((v11 > level) << 2) | ((v01 > level) << 3);
      if (c == 0 || c == 15) continue;
      double xl = g.x_at(i), xr = g.x_at(i + 1), yb = g.y_at(j), yt = g.y_at(j + 1);
      Vec2 bottom = interp(xl, yb, v00, xr, yb, v10);
      Vec2 right = interp(xr, yb, v10, xr, yt, v11);
      Vec2 top = interp(xl, yt, v01, xr, yt, v11);
      Vec2 left = interp(xl, yb, v00, xl, yt, v01);
      switch (c) {
        case 1: case 14: segs.push_back({left, bottom}); break;
        case 2: case 13: segs.push_back({bottom, right}); break;
        case 3: case 12: segs.push_back({left, right}); break;
        case 4: case 11: segs.push_back({right, top}); break;
        case 6: case 9:  segs.push_back({bottom, top}); break;
        case 7: case 8:  segs.push_back({left, top}); break;
        case 5: case 10: {
          double center = (v00 + v10 + v01 + v11) / 4;
          bool same = (center > level) == (c == 5 ? (v00 > level) : (v10 > level));
          if (c == 5) {
            if (same) { segs.push_back({left, top}); segs.push_back({bottom, right}); }
            else      { segs.push_back({left, bottom}); segs.push_back({right, top}); }
          } else {
            if (same) { segs.push_back({left, bottom}); segs.push_back({right, top}); }
            else      { segs.push_back({left, top}); segs.push_back({bottom, right}); }
          }
          break;
        }
      }
    }
  return segs;
}

// Static SVG 1.1 with the contour segments and the two circles.
inline void write_contour_svg(const std::string& path, const FieldGrid& g,
                              const std::vector<std::vector<Segment>>& levels,
                              const Disk& d1, const Disk& d2) {
  double w = g.x1 - g.x0, h = g.y1 - g.y0;
  double scale = 760.0 / std::max(w, h);
  auto X = [&](double x) { return 20.0 + (x - g.x0) * scale; };
  auto Y = [&](double y) { return 20.0 + (g.y1 - y) * scale; };  // SVG y points down
  std::ofstream out(path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << 40 + w * scale << "\" height=\"" << 40 + h * scale << "\">\n";
  for (const Disk* d : {&d1, &d2})
    out << "  <circle cx=\"" << X(d->center.x()) << "\" cy=\"" << Y(d->center.y())
        << "\" r=\"" << d->radius * scale
        << "\" fill=\"#e8e8e8\" stroke=\"#404040\" stroke-width=\"1.2\"/>\n";
  for (const auto& segs : levels) {
    if (segs.empty()) continue;
    out << "  <path fill=\"none\" stroke=\"#1060a0\" stroke-width=\"0.7\" d=\"";
    for (const auto& s : segs)
      out << "M" << X(s[0].x()) << " " << Y(s[0].y()) << "L" << X(s[1].x()) << " "
          << Y(s[1].y());
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace twodisk

#endif

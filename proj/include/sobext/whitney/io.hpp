#pragma once

#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "decomposition.hpp"

namespace sobext {

/// One line "level a_1 ... a_d" per cube.
template <int D>
void write_dump(std::ostream& out, const WhitneyDecomposition<D>& W) {
  for (const auto& q : W.cubes) {
    out << q.level;
    for (auto a : q.anchor) out << ' ' << a;
    out << '\n';
  }
}

struct SvgLayer {
  std::vector<Box<2>> boxes;
  std::string stroke = "#333";
  std::string fill = "none";
};

/// SVG of cube outlines with optional extra layers and polylines; y points up.
inline void write_svg(std::ostream& out, const Box<2>& window, const std::vector<SvgLayer>& layers,
                      const std::vector<std::vector<Point<2>>>& polylines = {}, int pixels = 800) {
  double sx = pixels / window.extent(0), sy = pixels / window.extent(1);
  auto X = [&](double x) { return (x - window.lo[0]) * sx; };
  auto Y = [&](double y) { return (window.hi[1] - y) * sy; };
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << pixels << "\" height=\"" << pixels
      << "\" viewBox=\"0 0 " << pixels << ' ' << pixels << "\">\n";
  for (const auto& L : layers) {
    out << "<g stroke=\"" << L.stroke << "\" fill=\"" << L.fill << "\" stroke-width=\"0.3\">\n";
    for (const auto& b : L.boxes)
      out << "<rect x=\"" << X(b.lo[0]) << "\" y=\"" << Y(b.hi[1]) << "\" width=\"" << b.extent(0) * sx
          << "\" height=\"" << b.extent(1) * sy << "\"/>\n";
    out << "</g>\n";
  }
  for (const auto& pl : polylines) {
    out << "<polyline fill=\"none\" stroke=\"#c00\" stroke-width=\"1.2\" points=\"";
    for (const auto& p : pl) out << X(p[0]) << ',' << Y(p[1]) << ' ';
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

inline void write_svg(std::ostream& out, const WhitneyDecomposition<2>& W,
                      const std::vector<std::vector<Point<2>>>& polylines = {}) {
  SvgLayer cubes, unres{{}, "#c60", "#fc8"};
  for (const auto& q : W.cubes) cubes.boxes.push_back(q.box());
  for (const auto& q : W.unresolved) unres.boxes.push_back(q.box());
  write_svg(out, W.window, {cubes, unres}, polylines);
}

}  // namespace sobext

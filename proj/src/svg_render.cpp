#include "qk/svg_render.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace qk::tiling {

namespace {

// locale-independent fixed formatting
std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 6);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string render_svg(const Patch& p, const SvgOptions& opt) {
  double minx = 0, miny = 0, maxx = 0, maxy = 0;
  bool first = true;
  std::vector<std::array<std::pair<double, double>, 3>> pts(p.tiles.size());
  for (std::size_t i = 0; i < p.tiles.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      auto e = lattice::embed(p.tiles[i].v[c]);
      double x = e.fx(), y = e.fy();
      pts[i][c] = {x, y};
      if (first) {
        minx = maxx = x;
        miny = maxy = y;
        first = false;
      }
      minx = std::min(minx, x);
      maxx = std::max(maxx, x);
      miny = std::min(miny, y);
      maxy = std::max(maxy, y);
    }
  }
  if (first) {  // empty patch
    minx = miny = -1;
    maxx = maxy = 1;
  }
  if (opt.overlay_star) {
    minx = std::min(minx, -1.0);
    miny = std::min(miny, -1.0);
    maxx = std::max(maxx, 1.0);
    maxy = std::max(maxy, 1.0);
  }
  minx -= opt.margin;
  miny -= opt.margin;
  maxx += opt.margin;
  maxy += opt.margin;

  const double s = opt.scale;
  auto X = [&](double x) { return (x - minx) * s; };
  auto Y = [&](double y) { return (maxy - y) * s; };  // flip: y up

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
     << fmt((maxx - minx) * s) << "\" height=\"" << fmt((maxy - miny) * s) << "\">\n";
  os << "<g stroke=\"" << opt.stroke << "\" stroke-width=\"" << fmt(opt.stroke_width * s)
     << "\" stroke-linejoin=\"round\">\n";
  for (std::size_t i = 0; i < p.tiles.size(); ++i) {
    const auto& fill = is_kite(p.tiles[i].kind) ? opt.kite_fill : opt.dart_fill;
    os << "<polygon fill=\"" << fill << "\" points=\"";
    for (int c = 0; c < 3; ++c) {
      if (c) os << " ";
      os << fmt(X(pts[i][c].first)) << "," << fmt(Y(pts[i][c].second));
    }
    os << "\"/>\n";
  }
  os << "</g>\n";

  if (opt.overlay_star) {
    os << "<g stroke=\"#a03232\" stroke-width=\"" << fmt(0.02 * s) << "\" fill=\"#a03232\">\n";
    for (int k = 0; k < 5; ++k) {
      auto v = lattice::star_vector(k, true);
      double x = v.fx(), y = v.fy();
      os << "<line x1=\"" << fmt(X(0)) << "\" y1=\"" << fmt(Y(0)) << "\" x2=\""
         << fmt(X(x)) << "\" y2=\"" << fmt(Y(y)) << "\"/>\n";
      os << "<circle cx=\"" << fmt(X(x)) << "\" cy=\"" << fmt(Y(y)) << "\" r=\""
         << fmt(0.035 * s) << "\"/>\n";
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace qk::tiling

#pragma once
// Deterministic SVG 1.1 output for patches: one polygon per half-tile,
// kites and darts distinguished by fill, optional star-vector overlay.

#include <string>

#include "qk/tiling.hpp"

namespace qk::tiling {

struct SvgOptions {
  double scale = 120.0;  // pixels per unit edge
  double margin = 0.25;  // in units
  std::string kite_fill = "#e8c468";
  std::string dart_fill = "#5b7fa6";
  std::string stroke = "#30302e";
  double stroke_width = 0.012;  // in units
  bool overlay_star = false;    // draw Y*_0..Y*_4 at the origin
};

std::string render_svg(const Patch& p, const SvgOptions& opt = {});

}  // namespace qk::tiling

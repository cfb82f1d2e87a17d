#pragma once

#include <string>

#include "lanetopo/arrangement.hpp"

namespace lanetopo {

struct RenderOptions {
  int size = 800;             // output square edge in px
  bool draw_points = true;    // intersection point markers
  bool fill_cycles = true;    // tint interior faces (needs extracted cycles)
  bool label_curves = true;   // curve id labels near the start of each lane
};

/// Standalone SVG document of the arrangement. Output is byte-deterministic:
/// fixed number formatting, colors keyed by index.
std::string render_svg(const Arrangement& arr, const RenderOptions& opts = {});

}  // namespace lanetopo

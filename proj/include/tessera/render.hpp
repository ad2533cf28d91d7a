#pragma once

#include <string>

#include "tessera/clip.hpp"
#include "tessera/grid_graph.hpp"
#include "tessera/tessellation.hpp"

namespace tessera {

struct RenderSpec {
    int cell_px = 40;  // pixels per unit cell, at least 4
};

// Standalone SVG: cells shaded white (cheapest weight) to black (dearest) by
// weight rank, optional black grid path through cell centers, optional red
// reference polyline, optional s/g dots with labels. Row 1 renders at the
// bottom. Output is byte-deterministic for identical inputs.
std::string render_svg(const Tessellation& t, const GridPath* grid, const Polyline* ref,
                       const RenderSpec& spec, const Query* query = nullptr);

}  // namespace tessera

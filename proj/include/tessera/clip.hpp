#pragma once

#include <map>
#include <string>
#include <vector>

#include "tessera/tessellation.hpp"

namespace tessera {

// Piecewise-linear path; points must lie inside the tessellation rectangle.
struct Polyline {
    std::vector<Point> points;
};

// Lengths a polyline spends inside each cell, plus the weighted total.
struct CostBreakdown {
    int m = 0;
    int n = 0;
    std::map<CellIndex, double> per_cell;  // only cells with positive length
    double total_cost = 0.0;               // sum of weight * length
    double total_length = 0.0;             // unweighted euclidean length

    double length_in(CellIndex c) const {
        auto it = per_cell.find(c);
        return it == per_cell.end() ? 0.0 : it->second;
    }
};

// Splits every segment at integer grid lines and attributes each piece to one
// cell. Pieces riding along a grid line (both endpoints within 1e-12 of the
// same line) go to the cheaper adjacent cell (lower index on ties); everything
// else goes to the cell containing the piece midpoint. Throws OutOfBounds if
// any point leaves the rectangle, ValidationError on fewer than 2 points.
CostBreakdown clip_lengths(const Tessellation& t, const Polyline& poly);

// Weighted cost of a polyline; equals clip_lengths(...).total_cost.
double path_cost(const Tessellation& t, const Polyline& poly);

// Cells visited by a polyline in traversal order (consecutive duplicates
// merged), using the same piece attribution as clip_lengths. Zero-length
// pieces do not appear.
std::vector<CellIndex> cell_traversal(const Tessellation& t, const Polyline& poly);

// cell_traversal with bookkeeping: where along the polyline each visit starts
// and ends. The parameter of segment i's local t in [0,1] is i + t.
struct TraversalStep {
    CellIndex cell;
    double param_begin = 0.0;
    double param_end = 0.0;
    double length = 0.0;
};
std::vector<TraversalStep> cell_traversal_steps(const Tessellation& t, const Polyline& poly);

// CSV rows "x,y,length,weight,contribution" sorted by (y,x), then one
// "total,,,,<cost>" row.
std::string breakdown_csv(const Tessellation& t, const CostBreakdown& b);

// {"points":[[x,y],...]} with shortest round-trip coordinates.
std::string polyline_json(const Polyline& poly);
Polyline load_polyline_json(const std::string& text);

}  // namespace tessera

#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "tessera/tessellation.hpp"

namespace tessera {

// True when a and b are distinct in-range cells with |dx| <= 1 and |dy| <= 1.
bool cells_adjacent(const Tessellation& t, CellIndex a, CellIndex b);

// Weight of the center-to-center edge between 8-neighbor cells:
// (alpha_a + alpha_b)/2 for axis moves, (alpha_a + alpha_b)*sqrt(2)/2 for
// diagonal moves. Throws NotAdjacent.
double edge_weight(const Tessellation& t, CellIndex a, CellIndex b);

// Path through cell centers with its weighted cost and the euclidean length
// it spends in each visited cell (1/2 per axis edge endpoint, sqrt(2)/2 per
// diagonal edge endpoint).
struct GridPath {
    std::vector<CellIndex> vertices;
    double cost = 0.0;
    std::map<CellIndex, double> per_cell;
};

// Deterministic Dijkstra on the 8-neighbor cell-center graph: the heap pops
// by (distance, x, y) and only strict improvements relax, so equal-cost
// instances always return the same path. Throws InvalidQuery.
GridPath grid_dijkstra(const Tessellation& t, const Query& q);

// sqrt(2)*min(dx,dy) + |dx-dy| for dx,dy >= 0.
double octile_cost(int dx, int dy);

// Recomputes cost and per_cell for an explicit vertex list. Cost sums the
// edge weights grouped by distinct value in ascending order, which keeps
// uniform-grid costs exact. Throws NotAPath for broken walks, Error if the
// cost fails to match the per-cell decomposition.
GridPath grid_path_breakdown(const Tessellation& t, std::span<const CellIndex> vertices);

// {"vertices":[[x,y],...],"cost":<g9>}.
std::string grid_path_json(const GridPath& p);
GridPath load_grid_path_json(const std::string& text);

// CSV rows "x,y,length,weight,contribution" for a grid path, plus total row.
std::string grid_path_csv(const Tessellation& t, const GridPath& p);

}  // namespace tessera

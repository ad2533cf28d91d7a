#pragma once

#include <cstdint>
#include <string>

#include "tessera/clip.hpp"
#include "tessera/tessellation.hpp"

namespace tessera {

struct SteinerConfig {
    int level = 5;                      // dyadic subdivision depth per unit edge
    std::size_t node_cap = 2'000'000;   // refuse graphs larger than this
};

// A reference shortest path: polyline through boundary points, its cost and
// the refinement level it was computed at.
struct RefSolution {
    Polyline polyline;
    double cost = 0.0;
    int level = 0;
};

// Shortest s-g path in the boundary-point graph at a fixed level: nodes are
// the lattice corners, the dyadic points i/2^level on every unit cell edge,
// and the two cell centers of the query; every pair of nodes on one cell's
// boundary is joined at cell-weight * distance, except pairs on the same side
// which ride the cheaper adjacent cell. Throws LevelTooLarge (level > 7 or
// node cap exceeded) and InvalidQuery.
RefSolution ref_shortest_path(const Tessellation& t, const Query& q, const SteinerConfig& cfg);

// Runs ref_shortest_path at levels 0,1,...,max_level and stops early once the
// cost improves by less than rel_tol relative; returns the last solution.
RefSolution converge(const Tessellation& t, const Query& q, int max_level = 5,
                     double rel_tol = 1e-4, std::size_t node_cap = 2'000'000);

// {"level":L,"cost":<g9>,"points":[[x,y],...]}.
std::string ref_solution_json(const RefSolution& s);

}  // namespace tessera

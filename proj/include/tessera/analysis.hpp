#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "tessera/clip.hpp"
#include "tessera/grid_graph.hpp"
#include "tessera/tessellation.hpp"

namespace tessera {

// Threshold at which max(1/a, sqrt(2)/(1-a)) is minimized; both branches
// equal sqrt(2)+1 there.
inline constexpr double kDefaultThreshold = 1.4142135623730951 - 1.0;

// Cells whose clip length meets a threshold a in [0, 1/2]. Membership uses
// length >= a - 1e-9 to absorb clip arithmetic noise.
struct LevelSet {
    double a = 0.0;
    int m = 0;
    int n = 0;
    std::vector<char> mask;            // row-major membership flags
    std::vector<CellIndex> members;    // sorted by (y,x)

    bool contains(CellIndex c) const {
        if (c.x < 1 || c.x > m || c.y < 1 || c.y > n) return false;
        return mask[static_cast<std::size_t>(c.y - 1) * m + (c.x - 1)] != 0;
    }
};

// Throws BadThreshold for a outside [0, 1/2].
LevelSet level_set(const CostBreakdown& b, double a);

// A diagonal hop between two level-set cells meeting at a lattice corner
// whose other two surrounding cells are not members.
struct Bridge {
    CellIndex from;
    CellIndex to;
    int corner_x = 0;  // lattice point shared by all four cells
    int corner_y = 0;
};

// The level-set subgraph (4-adjacency) split into connected components, plus
// the order in which a polyline visits them and the bridges that join
// consecutive visits.
struct ComponentDecomposition {
    std::vector<std::pair<CellIndex, CellIndex>> h_edges;  // 4-adjacent member pairs
    std::vector<std::vector<CellIndex>> component_cells;   // underlying components
    // One entry per visit, in traversal order; the same component may appear
    // more than once (consecutive duplicates are merged).
    struct Visit {
        int component = 0;   // index into component_cells
        CellIndex entry;     // first member cell of this visit
        CellIndex exit;      // last member cell of this visit
    };
    std::vector<Visit> visits;
    std::vector<Bridge> bridges;  // visits.size() - 1 entries

    const std::vector<CellIndex>& visit_cells(std::size_t i) const {
        return component_cells[visits[i].component];
    }
};

// Walks the polyline cell by cell, records the member components in entry
// order, and certifies one bridge per consecutive pair: a corner whose
// off-diagonal cells are non-members and where the polyline runs through at
// least three of the four surrounding closed squares in one stretch. The
// earliest qualifying stretch along the polyline wins; row-major corner order
// breaks ties. Throws BridgeNotFound when some pair has no such corner,
// ValidationError when an endpoint cell is not a member.
ComponentDecomposition decompose(const Tessellation& t, const LevelSet& ls,
                                 const Polyline& poly);

// Builds a grid path from the level-set decomposition of poly: axis-parallel
// BFS segments inside each visited component (neighbor order E,N,W,S), glued
// by the recorded diagonal bridges, then loop-erased. Verifies that every
// vertex is a member and every diagonal edge is a recorded bridge. Throws
// BridgeNotFound (propagated), InvalidQuery (poly does not run center to
// center), NoHVPath / Error on postcondition violations.
GridPath construct_lemma_path(const Tessellation& t, const Query& q, const Polyline& poly,
                              double a);

// max(1/a, sqrt(2)/(1-a)); +infinity at a=0. Throws BadThreshold outside
// [0, 1/2].
double certificate_bound(double a);

enum class CellCase { I, II, III, IV, V, Other };
const char* cell_case_name(CellCase c);

struct CellCert {
    CellCase kind = CellCase::Other;
    double grid_len = 0.0;  // length of the grid path inside the cell
    double clip_len = 0.0;  // length of the polyline inside the cell
    double ratio = 0.0;     // grid_len / clip_len
    bool ok = false;        // ratio <= certificate_bound(a) + 1e-6
};

// Classifies every cell visited by gp: through-cells with two axis edges are
// case I (straight) or II (turn), one axis + one diagonal edge is III, two
// diagonal edges are IV (straight) or V (turn); endpoint cells are "other".
std::map<CellIndex, CellCert> per_cell_certificate(const GridPath& gp,
                                                   const CostBreakdown& b, double a);

// Whether the cells with clip length >= 1/2 - slack form one 8-connected
// component.
bool check_v_half_connectivity(const CostBreakdown& b, double slack = 0.02);

}  // namespace tessera

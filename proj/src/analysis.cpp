#include "tessera/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <unordered_map>

#include "tessera/errors.hpp"
#include "tessera/numfmt.hpp"

namespace tessera {

namespace {

constexpr double kMemberTol = 1e-9;

std::string cell_str(CellIndex c) {
    return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

// Clips segment p->q to the closed box [xlo,xhi]x[ylo,yhi]. Touching the
// boundary counts, so a pass through a box corner yields a point interval.
std::optional<std::pair<double, double>> clip_to_box(Point p, Point q, double xlo, double xhi,
                                                     double ylo, double yhi) {
    constexpr double eps = 1e-12;
    const double d[2] = {q.x - p.x, q.y - p.y};
    const double lo[2] = {xlo, ylo}, hi[2] = {xhi, yhi}, s[2] = {p.x, p.y};
    double t0 = 0.0, t1 = 1.0;
    for (int axis = 0; axis < 2; ++axis) {
        if (d[axis] == 0.0) {
            if (s[axis] < lo[axis] - eps || s[axis] > hi[axis] + eps) return std::nullopt;
            continue;
        }
        double ta = (lo[axis] - s[axis]) / d[axis];
        double tb = (hi[axis] - s[axis]) / d[axis];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
    }
    if (t0 > t1 + eps) return std::nullopt;
    t1 = std::max(t0, t1);
    return std::make_pair(t0, t1);
}

// Earliest polyline parameter at which one continuous stretch inside the
// closed 2x2 block around lattice corner (cx,cy) touches at least three of
// the four closed unit squares; nullopt when no stretch does.
std::optional<double> three_square_stretch(const Polyline& poly, int cx, int cy) {
    const double X = cx, Y = cy;
    bool in_stretch = false;
    Point stretch_exit{};
    double stretch_param = 0.0;
    int touched_mask = 0;

    auto touches = [&](Point a, Point b) {
        int mask = 0;
        int bit = 0;
        for (int dy = -1; dy <= 0; ++dy)
            for (int dx = -1; dx <= 0; ++dx, ++bit)
                if (clip_to_box(a, b, X + dx, X + dx + 1, Y + dy, Y + dy + 1)) mask |= 1 << bit;
        return mask;
    };

    for (std::size_t i = 0; i + 1 < poly.points.size(); ++i) {
        const Point p = poly.points[i], q = poly.points[i + 1];
        auto clip = clip_to_box(p, q, X - 1, X + 1, Y - 1, Y + 1);
        if (!clip) {
            in_stretch = false;
            continue;
        }
        const auto [u0, u1] = *clip;
        const Point a{p.x + u0 * (q.x - p.x), p.y + u0 * (q.y - p.y)};
        const Point b{p.x + u1 * (q.x - p.x), p.y + u1 * (q.y - p.y)};
        // The stretch continues iff this piece picks up exactly where the
        // previous one left the block (shared polyline vertices compare equal,
        // so consecutive in-block segments always chain).
        const bool continues = in_stretch && std::abs(a.x - stretch_exit.x) <= 1e-9 &&
                               std::abs(a.y - stretch_exit.y) <= 1e-9;
        if (!continues) {
            touched_mask = 0;
            stretch_param = static_cast<double>(i) + u0;
        }
        touched_mask |= touches(a, b);
        int count = 0;
        for (int bitv = touched_mask; bitv; bitv >>= 1) count += bitv & 1;
        if (count >= 3) return stretch_param;
        in_stretch = true;
        stretch_exit = b;
    }
    return std::nullopt;
}

struct CompMap {
    int m = 0, n = 0;
    std::vector<int> id;  // row-major, -1 for non-members

    int at(CellIndex c) const {
        if (c.x < 1 || c.x > m || c.y < 1 || c.y > n) return -1;
        return id[static_cast<std::size_t>(c.y - 1) * m + (c.x - 1)];
    }
};

CompMap label_components(const LevelSet& ls, std::vector<std::vector<CellIndex>>& cells_out) {
    CompMap cm;
    cm.m = ls.m;
    cm.n = ls.n;
    cm.id.assign(static_cast<std::size_t>(ls.m) * ls.n, -1);
    for (const CellIndex& seed : ls.members) {
        const std::size_t si = static_cast<std::size_t>(seed.y - 1) * ls.m + (seed.x - 1);
        if (cm.id[si] != -1) continue;
        const int comp = static_cast<int>(cells_out.size());
        cells_out.emplace_back();
        std::deque<CellIndex> queue{seed};
        cm.id[si] = comp;
        while (!queue.empty()) {
            CellIndex c = queue.front();
            queue.pop_front();
            cells_out[comp].push_back(c);
            const CellIndex nbrs[4] = {{c.x + 1, c.y}, {c.x, c.y + 1}, {c.x - 1, c.y},
                                       {c.x, c.y - 1}};
            for (CellIndex nb : nbrs) {
                if (!ls.contains(nb)) continue;
                std::size_t ni = static_cast<std::size_t>(nb.y - 1) * ls.m + (nb.x - 1);
                if (cm.id[ni] == -1) {
                    cm.id[ni] = comp;
                    queue.push_back(nb);
                }
            }
        }
    }
    return cm;
}

// Axis-only BFS inside one component, neighbor order E,N,W,S.
std::vector<CellIndex> hv_path(const CompMap& cm, int comp, CellIndex from, CellIndex to) {
    if (cm.at(from) != comp || cm.at(to) != comp)
        throw NoHVPath("segment endpoint " + cell_str(from) + " or " + cell_str(to) +
                       " left its component");
    const std::size_t size = static_cast<std::size_t>(cm.m) * cm.n;
    std::vector<int> pred(size, -2);
    auto idx = [&](CellIndex c) {
        return static_cast<std::size_t>(c.y - 1) * cm.m + (c.x - 1);
    };
    std::deque<CellIndex> queue{from};
    pred[idx(from)] = -1;
    while (!queue.empty()) {
        CellIndex c = queue.front();
        queue.pop_front();
        if (c == to) break;
        const CellIndex nbrs[4] = {{c.x + 1, c.y}, {c.x, c.y + 1}, {c.x - 1, c.y},
                                   {c.x, c.y - 1}};
        for (CellIndex nb : nbrs) {
            if (cm.at(nb) != comp) continue;
            if (pred[idx(nb)] != -2) continue;
            pred[idx(nb)] = static_cast<int>(idx(c));
            queue.push_back(nb);
        }
    }
    if (pred[idx(to)] == -2)
        throw NoHVPath("no axis path from " + cell_str(from) + " to " + cell_str(to) +
                       " inside its component");
    std::vector<CellIndex> path;
    for (int cur = static_cast<int>(idx(to)); cur != -1; cur = pred[cur])
        path.push_back(CellIndex{cur % cm.m + 1, cur / cm.m + 1});
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

LevelSet level_set(const CostBreakdown& b, double a) {
    if (!(a >= 0.0 && a <= 0.5))
        throw BadThreshold("threshold " + fmt_g9(a) + " outside [0, 0.5]");
    LevelSet ls;
    ls.a = a;
    ls.m = b.m;
    ls.n = b.n;
    ls.mask.assign(static_cast<std::size_t>(b.m) * b.n, 0);
    if (a - kMemberTol <= 0.0) {
        std::fill(ls.mask.begin(), ls.mask.end(), 1);
    } else {
        for (const auto& [c, len] : b.per_cell)
            if (len >= a - kMemberTol)
                ls.mask[static_cast<std::size_t>(c.y - 1) * b.m + (c.x - 1)] = 1;
    }
    for (int y = 1; y <= b.n; ++y)
        for (int x = 1; x <= b.m; ++x)
            if (ls.mask[static_cast<std::size_t>(y - 1) * b.m + (x - 1)])
                ls.members.push_back(CellIndex{x, y});
    return ls;
}

ComponentDecomposition decompose(const Tessellation& t, const LevelSet& ls,
                                 const Polyline& poly) {
    ComponentDecomposition dec;
    const auto steps = cell_traversal_steps(t, poly);
    if (steps.empty()) throw ValidationError("polyline has no positive-length pieces");
    if (!ls.contains(steps.front().cell) || !ls.contains(steps.back().cell))
        throw ValidationError("polyline endpoint cells must be level-set members");

    for (const CellIndex& c : ls.members) {
        for (CellIndex nb : {CellIndex{c.x + 1, c.y}, CellIndex{c.x, c.y + 1}})
            if (ls.contains(nb)) dec.h_edges.emplace_back(c, nb);
    }
    const CompMap cm = label_components(ls, dec.component_cells);

    for (const TraversalStep& st : steps) {
        const int comp = cm.at(st.cell);
        if (comp < 0) continue;
        if (dec.visits.empty() || dec.visits.back().component != comp)
            dec.visits.push_back({comp, st.cell, st.cell});
        else
            dec.visits.back().exit = st.cell;
    }

    for (std::size_t i = 0; i + 1 < dec.visits.size(); ++i) {
        const int comp_a = dec.visits[i].component;
        const int comp_b = dec.visits[i + 1].component;
        bool found = false;
        double best_param = std::numeric_limits<double>::infinity();
        Bridge best{};
        for (int cy = 1; cy < ls.n; ++cy) {
            for (int cx = 1; cx < ls.m; ++cx) {
                const CellIndex sw{cx, cy}, se{cx + 1, cy}, nw{cx, cy + 1}, ne{cx + 1, cy + 1};
                const int csw = cm.at(sw), cse = cm.at(se), cnw = cm.at(nw), cne = cm.at(ne);
                // candidate diagonal pairs with the two off-diagonal cells
                // outside the level set
                const Bridge candidates[4] = {
                    {sw, ne, cx, cy}, {ne, sw, cx, cy}, {se, nw, cx, cy}, {nw, se, cx, cy}};
                const bool feasible[4] = {
                    csw == comp_a && cne == comp_b && cse < 0 && cnw < 0,
                    cne == comp_a && csw == comp_b && cse < 0 && cnw < 0,
                    cse == comp_a && cnw == comp_b && csw < 0 && cne < 0,
                    cnw == comp_a && cse == comp_b && csw < 0 && cne < 0};
                if (!(feasible[0] || feasible[1] || feasible[2] || feasible[3])) continue;
                const auto param = three_square_stretch(poly, cx, cy);
                if (!param || *param >= best_param) continue;
                for (int k = 0; k < 4; ++k) {
                    if (feasible[k]) {
                        best = candidates[k];
                        best_param = *param;
                        found = true;
                        break;
                    }
                }
            }
        }
        if (!found)
            throw BridgeNotFound("no qualifying corner between traversal components #" +
                                 std::to_string(i) + " and #" + std::to_string(i + 1));
        dec.bridges.push_back(best);
    }
    return dec;
}

GridPath construct_lemma_path(const Tessellation& t, const Query& q, const Polyline& poly,
                              double a) {
    validate_query(t, q);
    if (poly.points.size() < 2) throw ValidationError("polyline needs at least 2 points");
    const Point s = t.cell_center(q.start), g = t.cell_center(q.goal);
    const Point p0 = poly.points.front(), p1 = poly.points.back();
    if (std::abs(p0.x - s.x) > 1e-9 || std::abs(p0.y - s.y) > 1e-9 ||
        std::abs(p1.x - g.x) > 1e-9 || std::abs(p1.y - g.y) > 1e-9)
        throw InvalidQuery("polyline does not run from the start center to the goal center");

    const CostBreakdown b = clip_lengths(t, poly);
    const LevelSet ls = level_set(b, a);
    const ComponentDecomposition dec = decompose(t, ls, poly);
    CompMap cm;
    cm.m = ls.m;
    cm.n = ls.n;
    cm.id.assign(static_cast<std::size_t>(ls.m) * ls.n, -1);
    for (std::size_t ci = 0; ci < dec.component_cells.size(); ++ci)
        for (const CellIndex& c : dec.component_cells[ci])
            cm.id[static_cast<std::size_t>(c.y - 1) * ls.m + (c.x - 1)] = static_cast<int>(ci);

    std::vector<CellIndex> verts;
    for (std::size_t i = 0; i < dec.visits.size(); ++i) {
        const CellIndex arrive = i == 0 ? q.start : dec.bridges[i - 1].to;
        const CellIndex depart = i + 1 == dec.visits.size() ? q.goal : dec.bridges[i].from;
        const auto seg = hv_path(cm, dec.visits[i].component, arrive, depart);
        for (const CellIndex& c : seg) {
            if (!verts.empty() && verts.back() == c) continue;
            verts.push_back(c);
        }
    }

    // Loop erasure: cut the cycle whenever a cell repeats. Edges of the result
    // are a subset of the edges walked above, so the bridge bookkeeping below
    // stays valid.
    std::vector<CellIndex> simple;
    std::map<CellIndex, std::size_t> seen;
    for (const CellIndex& c : verts) {
        auto it = seen.find(c);
        if (it != seen.end()) {
            while (simple.size() > it->second + 1) {
                seen.erase(simple.back());
                simple.pop_back();
            }
        } else {
            seen.emplace(c, simple.size());
            simple.push_back(c);
        }
    }

    GridPath gp = grid_path_breakdown(t, simple);

    for (const CellIndex& c : gp.vertices)
        if (!ls.contains(c))
            throw Error("lemma path left the level set at " + cell_str(c));
    for (std::size_t i = 0; i + 1 < gp.vertices.size(); ++i) {
        const CellIndex u = gp.vertices[i], v = gp.vertices[i + 1];
        if (u.x == v.x || u.y == v.y) continue;
        const bool recorded =
            std::any_of(dec.bridges.begin(), dec.bridges.end(), [&](const Bridge& br) {
                return (br.from == u && br.to == v) || (br.from == v && br.to == u);
            });
        if (!recorded)
            throw Error("diagonal edge " + cell_str(u) + "->" + cell_str(v) +
                        " is not a recorded bridge");
        if (ls.contains(CellIndex{u.x, v.y}) || ls.contains(CellIndex{v.x, u.y}))
            throw Error("off-diagonal cell of bridge " + cell_str(u) + "->" + cell_str(v) +
                        " is a member");
    }
    return gp;
}

double certificate_bound(double a) {
    if (!(a >= 0.0 && a <= 0.5))
        throw BadThreshold("threshold " + fmt_g9(a) + " outside [0, 0.5]");
    const double sqrt2 = 1.4142135623730951;
    return std::max(1.0 / a, sqrt2 / (1.0 - a));
}

const char* cell_case_name(CellCase c) {
    switch (c) {
        case CellCase::I: return "i";
        case CellCase::II: return "ii";
        case CellCase::III: return "iii";
        case CellCase::IV: return "iv";
        case CellCase::V: return "v";
        default: return "other";
    }
}

std::map<CellIndex, CellCert> per_cell_certificate(const GridPath& gp, const CostBreakdown& b,
                                                   double a) {
    const double bound = certificate_bound(a);
    std::map<CellIndex, CellCert> out;
    const auto& vs = gp.vertices;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        CellCert cert;
        if (i == 0 || i + 1 == vs.size()) {
            cert.kind = CellCase::Other;
        } else {
            const int ax = vs[i].x - vs[i - 1].x, ay = vs[i].y - vs[i - 1].y;
            const int bx = vs[i + 1].x - vs[i].x, by = vs[i + 1].y - vs[i].y;
            const bool da = ax != 0 && ay != 0, db = bx != 0 && by != 0;
            if (!da && !db)
                cert.kind = (ax == bx && ay == by) ? CellCase::I : CellCase::II;
            else if (da != db)
                cert.kind = CellCase::III;
            else
                cert.kind = (ax == bx && ay == by) ? CellCase::IV : CellCase::V;
        }
        auto it = gp.per_cell.find(vs[i]);
        cert.grid_len = it == gp.per_cell.end() ? 0.0 : it->second;
        cert.clip_len = b.length_in(vs[i]);
        cert.ratio = cert.clip_len > 0.0 ? cert.grid_len / cert.clip_len
                                         : std::numeric_limits<double>::infinity();
        cert.ok = cert.ratio <= bound + 1e-6;
        out[vs[i]] = cert;
    }
    return out;
}

bool check_v_half_connectivity(const CostBreakdown& b, double slack) {
    const LevelSet ls = level_set(b, 0.5 - slack);
    if (ls.members.empty()) return true;
    std::vector<char> seen(static_cast<std::size_t>(ls.m) * ls.n, 0);
    std::deque<CellIndex> queue{ls.members.front()};
    seen[static_cast<std::size_t>(ls.members.front().y - 1) * ls.m + (ls.members.front().x - 1)] =
        1;
    std::size_t reached = 0;
    while (!queue.empty()) {
        CellIndex c = queue.front();
        queue.pop_front();
        ++reached;
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                CellIndex nb{c.x + dx, c.y + dy};
                if (!ls.contains(nb)) continue;
                std::size_t ni = static_cast<std::size_t>(nb.y - 1) * ls.m + (nb.x - 1);
                if (!seen[ni]) {
                    seen[ni] = 1;
                    queue.push_back(nb);
                }
            }
        }
    }
    return reached == ls.members.size();
}

}  // namespace tessera

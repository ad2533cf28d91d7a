#include "tessera/steiner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "tessera/errors.hpp"
#include "tessera/numfmt.hpp"

namespace tessera {

namespace {

// Flat node addressing for one refinement level: lattice corners first, then
// the interior dyadic points of every horizontal unit edge, then of every
// vertical unit edge, then the two query cell centers. Node coordinates are
// exact dyadic doubles, so the node set at level L is literally a subset of
// the set at level L+1.
struct BoundaryGraph {
    const Tessellation* tess = nullptr;
    int m = 0, n = 0;
    int level = 0;
    int q = 0;  // interior points per unit edge, 2^level - 1
    std::size_t corner_count = 0, h_count = 0, v_count = 0, node_count = 0;
    std::size_t s_id = 0, g_id = 0;
    std::vector<Point> coord;
    std::vector<std::vector<int32_t>> cell_nodes;  // boundary nodes per cell (row-major)
    // min adjacent weight across each grid line, used for edges riding a side
    std::vector<double> vline_min;  // (m+1) x n: line x=k at row y -> k*n + (y-1)
    std::vector<double> hline_min;  // m x (n+1): line y=k at column x -> k*m + (x-1)

    std::size_t cell_id(int cx, int cy) const {
        return static_cast<std::size_t>(cy - 1) * m + (cx - 1);
    }
};

BoundaryGraph build_graph(const Tessellation& t, const Query& qr, const SteinerConfig& cfg) {
    if (cfg.level < 0)
        throw ValidationError("refinement level must be non-negative");
    if (cfg.level > 7)
        throw LevelTooLarge("refinement level " + std::to_string(cfg.level) +
                            " exceeds the hard cap of 7");

    BoundaryGraph g;
    g.tess = &t;
    g.m = t.width();
    g.n = t.height();
    g.level = cfg.level;
    g.q = (1 << cfg.level) - 1;
    g.corner_count = static_cast<std::size_t>(g.m + 1) * (g.n + 1);
    g.h_count = static_cast<std::size_t>(g.m) * (g.n + 1);
    g.v_count = static_cast<std::size_t>(g.m + 1) * g.n;
    g.node_count = g.corner_count + static_cast<std::size_t>(g.q) * (g.h_count + g.v_count) + 2;
    if (g.node_count > cfg.node_cap)
        throw LevelTooLarge("level " + std::to_string(cfg.level) + " needs " +
                            std::to_string(g.node_count) + " nodes, cap is " +
                            std::to_string(cfg.node_cap));
    g.s_id = g.node_count - 2;
    g.g_id = g.node_count - 1;

    const double step = 1.0 / (1 << cfg.level);
    g.coord.resize(g.node_count);
    for (int iy = 0; iy <= g.n; ++iy)
        for (int ix = 0; ix <= g.m; ++ix)
            g.coord[static_cast<std::size_t>(iy) * (g.m + 1) + ix] =
                Point{static_cast<double>(ix), static_cast<double>(iy)};
    const std::size_t h_base = g.corner_count;
    for (int iy = 0; iy <= g.n; ++iy)
        for (int ix = 0; ix < g.m; ++ix) {
            const std::size_t eh = static_cast<std::size_t>(iy) * g.m + ix;
            for (int i = 1; i <= g.q; ++i)
                g.coord[h_base + eh * g.q + (i - 1)] = Point{ix + i * step, double(iy)};
        }
    const std::size_t v_base = h_base + g.h_count * g.q;
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix <= g.m; ++ix) {
            const std::size_t ev = static_cast<std::size_t>(iy) * (g.m + 1) + ix;
            for (int i = 1; i <= g.q; ++i)
                g.coord[v_base + ev * g.q + (i - 1)] = Point{double(ix), iy + i * step};
        }
    g.coord[g.s_id] = t.cell_center(qr.start);
    g.coord[g.g_id] = t.cell_center(qr.goal);

    g.cell_nodes.resize(static_cast<std::size_t>(g.m) * g.n);
    for (int cy = 1; cy <= g.n; ++cy) {
        for (int cx = 1; cx <= g.m; ++cx) {
            auto& nodes = g.cell_nodes[g.cell_id(cx, cy)];
            nodes.reserve(4 + 4 * g.q);
            for (int iy = cy - 1; iy <= cy; ++iy)
                for (int ix = cx - 1; ix <= cx; ++ix)
                    nodes.push_back(static_cast<int32_t>(
                        static_cast<std::size_t>(iy) * (g.m + 1) + ix));
            for (int iy : {cy - 1, cy}) {
                const std::size_t eh = static_cast<std::size_t>(iy) * g.m + (cx - 1);
                for (int i = 0; i < g.q; ++i)
                    nodes.push_back(static_cast<int32_t>(h_base + eh * g.q + i));
            }
            for (int ix : {cx - 1, cx}) {
                const std::size_t ev = static_cast<std::size_t>(cy - 1) * (g.m + 1) + ix;
                for (int i = 0; i < g.q; ++i)
                    nodes.push_back(static_cast<int32_t>(v_base + ev * g.q + i));
            }
        }
    }
    g.cell_nodes[g.cell_id(qr.start.x, qr.start.y)].push_back(static_cast<int32_t>(g.s_id));
    g.cell_nodes[g.cell_id(qr.goal.x, qr.goal.y)].push_back(static_cast<int32_t>(g.g_id));

    g.vline_min.resize(static_cast<std::size_t>(g.m + 1) * g.n);
    for (int k = 0; k <= g.m; ++k)
        for (int y = 1; y <= g.n; ++y) {
            double w = std::numeric_limits<double>::infinity();
            if (k >= 1) w = std::min(w, t.weight(k, y));
            if (k + 1 <= g.m) w = std::min(w, t.weight(k + 1, y));
            g.vline_min[static_cast<std::size_t>(k) * g.n + (y - 1)] = w;
        }
    g.hline_min.resize(static_cast<std::size_t>(g.n + 1) * g.m);
    for (int k = 0; k <= g.n; ++k)
        for (int x = 1; x <= g.m; ++x) {
            double w = std::numeric_limits<double>::infinity();
            if (k >= 1) w = std::min(w, t.weight(x, k));
            if (k + 1 <= g.n) w = std::min(w, t.weight(x, k + 1));
            g.hline_min[static_cast<std::size_t>(k) * g.m + (x - 1)] = w;
        }
    return g;
}

// Cells whose boundary (or interior, for the two center nodes) contains node u.
int incident_cells(const BoundaryGraph& g, std::size_t u, CellIndex out[4]) {
    int cnt = 0;
    auto push = [&](int cx, int cy) {
        if (cx >= 1 && cx <= g.m && cy >= 1 && cy <= g.n) out[cnt++] = CellIndex{cx, cy};
    };
    if (u == g.s_id || u == g.g_id) {
        const Point p = g.coord[u];
        push(static_cast<int>(p.x + 0.5), static_cast<int>(p.y + 0.5));
        return cnt;
    }
    if (u < g.corner_count) {
        const int ix = static_cast<int>(u % (g.m + 1));
        const int iy = static_cast<int>(u / (g.m + 1));
        push(ix, iy);
        push(ix + 1, iy);
        push(ix, iy + 1);
        push(ix + 1, iy + 1);
        return cnt;
    }
    const std::size_t h_base = g.corner_count;
    const std::size_t v_base = h_base + g.h_count * g.q;
    if (u < v_base) {
        const std::size_t eh = (u - h_base) / g.q;
        const int ix = static_cast<int>(eh % g.m);
        const int iy = static_cast<int>(eh / g.m);
        push(ix + 1, iy);
        push(ix + 1, iy + 1);
    } else {
        const std::size_t ev = (u - v_base) / g.q;
        const int ix = static_cast<int>(ev % (g.m + 1));
        const int iy = static_cast<int>(ev / (g.m + 1));
        push(ix, iy + 1);
        push(ix + 1, iy + 1);
    }
    return cnt;
}

}  // namespace

RefSolution ref_shortest_path(const Tessellation& t, const Query& qr,
                              const SteinerConfig& cfg) {
    validate_query(t, qr);
    const BoundaryGraph g = build_graph(t, qr, cfg);

    std::vector<double> dist(g.node_count, std::numeric_limits<double>::infinity());
    std::vector<int32_t> pred(g.node_count, -1);
    std::vector<char> done(g.node_count, 0);
    using Item = std::pair<double, int32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[g.s_id] = 0.0;
    pq.emplace(0.0, static_cast<int32_t>(g.s_id));

    CellIndex cells[4];
    while (!pq.empty()) {
        const auto [du, ui] = pq.top();
        pq.pop();
        const std::size_t u = static_cast<std::size_t>(ui);
        if (done[u]) continue;
        done[u] = 1;
        if (u == g.g_id) break;
        const Point pu = g.coord[u];
        const int ncells = incident_cells(g, u, cells);
        for (int ci = 0; ci < ncells; ++ci) {
            const CellIndex c = cells[ci];
            const double alpha = t.weight(c);
            const double x0 = c.x - 1, x1 = c.x, y0 = c.y - 1, y1 = c.y;
            for (int32_t vi : g.cell_nodes[g.cell_id(c.x, c.y)]) {
                const std::size_t v = static_cast<std::size_t>(vi);
                if (v == u || done[v]) continue;
                const Point pv = g.coord[v];
                double f = alpha;
                if (pu.x == x0 && pv.x == x0)
                    f = g.vline_min[static_cast<std::size_t>(c.x - 1) * g.n + (c.y - 1)];
                else if (pu.x == x1 && pv.x == x1)
                    f = g.vline_min[static_cast<std::size_t>(c.x) * g.n + (c.y - 1)];
                else if (pu.y == y0 && pv.y == y0)
                    f = g.hline_min[static_cast<std::size_t>(c.y - 1) * g.m + (c.x - 1)];
                else if (pu.y == y1 && pv.y == y1)
                    f = g.hline_min[static_cast<std::size_t>(c.y) * g.m + (c.x - 1)];
                const double dx = pv.x - pu.x, dy = pv.y - pu.y;
                const double cand = du + f * std::sqrt(dx * dx + dy * dy);
                if (cand < dist[v]) {
                    dist[v] = cand;
                    pred[v] = ui;
                    pq.emplace(cand, vi);
                }
            }
        }
    }

    RefSolution sol;
    sol.level = cfg.level;
    sol.cost = dist[g.g_id];
    std::vector<Point> rev;
    for (int32_t cur = static_cast<int32_t>(g.g_id); cur != -1; cur = pred[cur])
        rev.push_back(g.coord[static_cast<std::size_t>(cur)]);
    sol.polyline.points.assign(rev.rbegin(), rev.rend());
    return sol;
}

RefSolution converge(const Tessellation& t, const Query& qr, int max_level, double rel_tol,
                     std::size_t node_cap) {
    if (max_level < 0)
        throw ValidationError("max_level must be non-negative");
    if (max_level > 7)
        throw LevelTooLarge("max_level exceeds the hard cap of 7");
    if (!(rel_tol >= 0.0))
        throw ValidationError("rel_tol must be non-negative");

    RefSolution sol;
    double prev = std::numeric_limits<double>::infinity();
    for (int level = 0; level <= max_level; ++level) {
        sol = ref_shortest_path(t, qr, SteinerConfig{level, node_cap});
        if (level > 0 && prev - sol.cost <= rel_tol * std::max(std::abs(prev), 1e-30)) break;
        prev = sol.cost;
    }
    return sol;
}

std::string ref_solution_json(const RefSolution& s) {
    std::string out = "{\"level\":" + std::to_string(s.level) + ",\"cost\":" + fmt_g9(s.cost) +
                      ",\"points\":[";
    for (std::size_t i = 0; i < s.polyline.points.size(); ++i) {
        if (i) out += ",";
        out += "[" + fmt_exact(s.polyline.points[i].x) + "," +
               fmt_exact(s.polyline.points[i].y) + "]";
    }
    out += "]}";
    return out;
}

}  // namespace tessera

#include "tessera/grid_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "json.hpp"
#include "tessera/errors.hpp"
#include "tessera/numfmt.hpp"

namespace tessera {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;      // std::sqrt(2.0)
constexpr double kHalfSqrt2 = kSqrt2 / 2.0;

std::string cell_str(CellIndex c) {
    return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

// Grouped edge-weight summation: sums count*weight per distinct weight value
// in ascending order. On a uniform grid this reproduces k*w exactly, which a
// left-to-right fold does not.
double grouped_cost(std::vector<double>& edge_weights) {
    std::sort(edge_weights.begin(), edge_weights.end());
    double total = 0.0;
    std::size_t i = 0;
    while (i < edge_weights.size()) {
        std::size_t j = i;
        while (j < edge_weights.size() && edge_weights[j] == edge_weights[i]) ++j;
        total += static_cast<double>(j - i) * edge_weights[i];
        i = j;
    }
    return total;
}

}  // namespace

bool cells_adjacent(const Tessellation& t, CellIndex a, CellIndex b) {
    if (!t.in_range(a) || !t.in_range(b) || a == b) return false;
    return std::abs(a.x - b.x) <= 1 && std::abs(a.y - b.y) <= 1;
}

double edge_weight(const Tessellation& t, CellIndex a, CellIndex b) {
    if (!cells_adjacent(t, a, b))
        throw NotAdjacent("cells " + cell_str(a) + " and " + cell_str(b) +
                          " are not 8-neighbors");
    const double s = t.weight(a) + t.weight(b);
    const bool diagonal = a.x != b.x && a.y != b.y;
    return diagonal ? s * kHalfSqrt2 : s * 0.5;
}

double octile_cost(int dx, int dy) {
    if (dx < 0 || dy < 0) throw ValidationError("octile_cost needs dx,dy >= 0");
    const int lo = std::min(dx, dy);
    const int hi = std::max(dx, dy);
    return kSqrt2 * lo + (hi - lo);
}

GridPath grid_dijkstra(const Tessellation& t, const Query& q) {
    validate_query(t, q);
    const int m = t.width(), n = t.height();
    const std::size_t cells = static_cast<std::size_t>(m) * n;
    auto id = [m](CellIndex c) { return static_cast<std::size_t>(c.y - 1) * m + (c.x - 1); };

    std::vector<double> dist(cells, std::numeric_limits<double>::infinity());
    std::vector<int> pred(cells, -1);
    std::vector<char> done(cells, 0);

    struct Item {
        double d;
        int x, y;
        bool operator>(const Item& o) const {
            if (d != o.d) return d > o.d;
            if (x != o.x) return x > o.x;
            return y > o.y;
        }
    };
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[id(q.start)] = 0.0;
    pq.push(Item{0.0, q.start.x, q.start.y});

    while (!pq.empty()) {
        Item it = pq.top();
        pq.pop();
        CellIndex u{it.x, it.y};
        const std::size_t ui = id(u);
        if (done[ui]) continue;
        done[ui] = 1;
        if (u == q.goal) break;
        const double du = dist[ui];
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                CellIndex v{u.x + dx, u.y + dy};
                if (!t.in_range(v)) continue;
                const std::size_t vi = id(v);
                if (done[vi]) continue;
                const double w = (dx != 0 && dy != 0)
                                     ? (t.weight(u) + t.weight(v)) * kHalfSqrt2
                                     : (t.weight(u) + t.weight(v)) * 0.5;
                const double cand = du + w;
                if (cand < dist[vi]) {
                    dist[vi] = cand;
                    pred[vi] = static_cast<int>(ui);
                    pq.push(Item{cand, v.x, v.y});
                }
            }
        }
    }

    std::vector<CellIndex> vertices;
    for (int cur = static_cast<int>(id(q.goal)); cur != -1;
         cur = pred[static_cast<std::size_t>(cur)]) {
        vertices.push_back(CellIndex{cur % m + 1, cur / m + 1});
        if (vertices.back() == q.start) break;
    }
    std::reverse(vertices.begin(), vertices.end());
    return grid_path_breakdown(t, vertices);
}

GridPath grid_path_breakdown(const Tessellation& t, std::span<const CellIndex> vertices) {
    if (vertices.size() < 2) throw NotAPath("a grid path needs at least 2 vertices");
    for (CellIndex c : vertices)
        if (!t.in_range(c)) throw NotAPath("vertex " + cell_str(c) + " out of range");

    GridPath p;
    p.vertices.assign(vertices.begin(), vertices.end());
    std::vector<double> edge_weights;
    edge_weights.reserve(vertices.size() - 1);
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
        CellIndex a = vertices[i], b = vertices[i + 1];
        if (!cells_adjacent(t, a, b))
            throw NotAPath("vertices " + cell_str(a) + " -> " + cell_str(b) +
                           " are not 8-neighbors");
        const bool diagonal = a.x != b.x && a.y != b.y;
        edge_weights.push_back((t.weight(a) + t.weight(b)) * (diagonal ? kHalfSqrt2 : 0.5));
        const double half = diagonal ? kHalfSqrt2 : 0.5;
        p.per_cell[a] += half;
        p.per_cell[b] += half;
    }
    p.cost = grouped_cost(edge_weights);

    double decomposed = 0.0;
    for (const auto& [c, len] : p.per_cell) decomposed += t.weight(c) * len;
    const double tol = 1e-9 * std::max(1.0, std::abs(p.cost));
    if (std::abs(decomposed - p.cost) > tol)
        throw Error("edge-weight cost " + fmt_g9(p.cost) +
                    " does not match per-cell decomposition " + fmt_g9(decomposed));
    return p;
}

std::string grid_path_json(const GridPath& p) {
    std::string out = "{\"vertices\":[";
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
        if (i) out += ",";
        out += "[" + std::to_string(p.vertices[i].x) + "," + std::to_string(p.vertices[i].y) +
               "]";
    }
    out += "],\"cost\":" + fmt_g9(p.cost) + "}";
    return out;
}

GridPath load_grid_path_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("bad JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
        throw ParseError("grid path JSON must be {\"vertices\":[[x,y],...],...}");
    GridPath p;
    for (const auto& v : j["vertices"]) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
            !v[1].is_number_integer())
            throw ParseError("grid path vertices must be [x,y] integer pairs");
        p.vertices.push_back(CellIndex{v[0].get<int>(), v[1].get<int>()});
    }
    if (j.contains("cost") && j["cost"].is_number()) p.cost = j["cost"].get<double>();
    return p;
}

std::string grid_path_csv(const Tessellation& t, const GridPath& p) {
    std::vector<std::pair<CellIndex, double>> rows(p.per_cell.begin(), p.per_cell.end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& c) {
        return std::pair(a.first.y, a.first.x) < std::pair(c.first.y, c.first.x);
    });
    std::string out = "x,y,length,weight,contribution\n";
    for (const auto& [cell, len] : rows) {
        double w = t.weight(cell);
        out += std::to_string(cell.x) + "," + std::to_string(cell.y) + "," + fmt_g9(len) + "," +
               fmt_g9(w) + "," + fmt_g9(w * len) + "\n";
    }
    out += "total,,,," + fmt_g9(p.cost) + "\n";
    return out;
}

}  // namespace tessera

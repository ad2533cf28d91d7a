#include "tessera/clip.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "json.hpp"
#include "tessera/errors.hpp"
#include "tessera/numfmt.hpp"

namespace tessera {

namespace {

constexpr double kLineTol = 1e-12;  // collinearity / parameter dedup tolerance

// Picks the cheaper of the two cells touching vertical grid line x=k at row
// `ycell` (lower x index on ties); k may be 0 or m at the outer boundary.
CellIndex cheaper_cell_vertical(const Tessellation& t, int k, int ycell) {
    bool has_left = k >= 1;
    bool has_right = k + 1 <= t.width();
    if (!has_left) return CellIndex{1, ycell};
    if (!has_right) return CellIndex{t.width(), ycell};
    CellIndex left{k, ycell}, right{k + 1, ycell};
    return t.weight(right) < t.weight(left) ? right : left;
}

CellIndex cheaper_cell_horizontal(const Tessellation& t, int k, int xcell) {
    bool has_below = k >= 1;
    bool has_above = k + 1 <= t.height();
    if (!has_below) return CellIndex{xcell, 1};
    if (!has_above) return CellIndex{xcell, t.height()};
    CellIndex below{xcell, k}, above{xcell, k + 1};
    return t.weight(above) < t.weight(below) ? above : below;
}

int row_of(double y, int n) {
    int r = static_cast<int>(std::floor(y)) + 1;
    return std::clamp(r, 1, n);
}

int col_of(double x, int m) {
    int c = static_cast<int>(std::floor(x)) + 1;
    return std::clamp(c, 1, m);
}

// Splits every segment at integer grid lines and reports each positive-length
// piece in order: (cell, length, global parameters of the piece start/end).
// The global parameter of segment i's local t is i + t.
void walk_pieces(const Tessellation& t, const Polyline& poly,
                 const std::function<void(CellIndex, double, double, double)>& emit) {
    if (poly.points.size() < 2)
        throw ValidationError("polyline needs at least 2 points");
    for (const Point& p : poly.points) {
        if (!(p.x >= 0.0 && p.x <= t.width() && p.y >= 0.0 && p.y <= t.height()))
            throw OutOfBounds("polyline point (" + fmt_g9(p.x) + "," + fmt_g9(p.y) +
                              ") outside the tessellation");
    }

    std::vector<double> ts;
    for (std::size_t i = 0; i + 1 < poly.points.size(); ++i) {
        const Point p = poly.points[i];
        const Point q = poly.points[i + 1];
        const double dx = q.x - p.x, dy = q.y - p.y;
        const double len = std::hypot(dx, dy);
        if (len == 0.0) continue;

        ts.clear();
        ts.push_back(0.0);
        ts.push_back(1.0);
        if (dx != 0.0) {
            int klo = static_cast<int>(std::ceil(std::min(p.x, q.x)));
            int khi = static_cast<int>(std::floor(std::max(p.x, q.x)));
            for (int k = klo; k <= khi; ++k) {
                double tt = (k - p.x) / dx;
                if (tt > 0.0 && tt < 1.0) ts.push_back(tt);
            }
        }
        if (dy != 0.0) {
            int klo = static_cast<int>(std::ceil(std::min(p.y, q.y)));
            int khi = static_cast<int>(std::floor(std::max(p.y, q.y)));
            for (int k = klo; k <= khi; ++k) {
                double tt = (k - p.y) / dy;
                if (tt > 0.0 && tt < 1.0) ts.push_back(tt);
            }
        }
        std::sort(ts.begin(), ts.end());
        std::size_t kept = 1;
        for (std::size_t j = 1; j < ts.size(); ++j)
            if (ts[j] - ts[kept - 1] > kLineTol) ts[kept++] = ts[j];
        ts.resize(kept);
        ts.back() = 1.0;  // dedup may have absorbed the exact endpoint

        for (std::size_t j = 0; j + 1 < ts.size(); ++j) {
            const double t0 = ts[j], t1 = ts[j + 1];
            const double piece_len = len * (t1 - t0);
            const double x0 = p.x + t0 * dx, y0 = p.y + t0 * dy;
            const double x1 = p.x + t1 * dx, y1 = p.y + t1 * dy;

            CellIndex cell;
            const double vk = std::round(x0);
            const double hk = std::round(y0);
            const bool on_vertical = std::abs(x0 - vk) <= kLineTol &&
                                     std::abs(x1 - vk) <= kLineTol && vk >= 0.0 &&
                                     vk <= t.width();
            const bool on_horizontal = std::abs(y0 - hk) <= kLineTol &&
                                       std::abs(y1 - hk) <= kLineTol && hk >= 0.0 &&
                                       hk <= t.height();
            if (on_vertical) {
                cell = cheaper_cell_vertical(t, static_cast<int>(vk),
                                             row_of(0.5 * (y0 + y1), t.height()));
            } else if (on_horizontal) {
                cell = cheaper_cell_horizontal(t, static_cast<int>(hk),
                                               col_of(0.5 * (x0 + x1), t.width()));
            } else {
                cell = t.cell_of_point(Point{0.5 * (x0 + x1), 0.5 * (y0 + y1)});
            }
            emit(cell, piece_len, static_cast<double>(i) + t0, static_cast<double>(i) + t1);
        }
    }
}

}  // namespace

CostBreakdown clip_lengths(const Tessellation& t, const Polyline& poly) {
    CostBreakdown b;
    b.m = t.width();
    b.n = t.height();
    walk_pieces(t, poly, [&](CellIndex c, double len, double, double) {
        if (len > 0.0) {
            b.per_cell[c] += len;
            b.total_length += len;
        }
    });
    for (const auto& [c, len] : b.per_cell) b.total_cost += t.weight(c) * len;
    return b;
}

double path_cost(const Tessellation& t, const Polyline& poly) {
    return clip_lengths(t, poly).total_cost;
}

std::vector<TraversalStep> cell_traversal_steps(const Tessellation& t, const Polyline& poly) {
    std::vector<TraversalStep> steps;
    walk_pieces(t, poly, [&](CellIndex c, double len, double p0, double p1) {
        if (len <= 0.0) return;
        if (!steps.empty() && steps.back().cell == c) {
            steps.back().param_end = p1;
            steps.back().length += len;
        } else {
            steps.push_back(TraversalStep{c, p0, p1, len});
        }
    });
    return steps;
}

std::vector<CellIndex> cell_traversal(const Tessellation& t, const Polyline& poly) {
    std::vector<CellIndex> cells;
    for (const TraversalStep& s : cell_traversal_steps(t, poly)) cells.push_back(s.cell);
    return cells;
}

std::string breakdown_csv(const Tessellation& t, const CostBreakdown& b) {
    std::vector<std::pair<CellIndex, double>> rows(b.per_cell.begin(), b.per_cell.end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& c) {
        return std::pair(a.first.y, a.first.x) < std::pair(c.first.y, c.first.x);
    });
    std::string out = "x,y,length,weight,contribution\n";
    for (const auto& [cell, len] : rows) {
        double w = t.weight(cell);
        out += std::to_string(cell.x) + "," + std::to_string(cell.y) + "," + fmt_g9(len) + "," +
               fmt_g9(w) + "," + fmt_g9(w * len) + "\n";
    }
    out += "total,,,," + fmt_g9(b.total_cost) + "\n";
    return out;
}

std::string polyline_json(const Polyline& poly) {
    std::string out = "{\"points\":[";
    for (std::size_t i = 0; i < poly.points.size(); ++i) {
        if (i) out += ",";
        out += "[" + fmt_exact(poly.points[i].x) + "," + fmt_exact(poly.points[i].y) + "]";
    }
    out += "]}";
    return out;
}

Polyline load_polyline_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("bad JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("points") || !j["points"].is_array())
        throw ParseError("polyline JSON must be {\"points\":[[x,y],...]}");
    Polyline poly;
    for (const auto& pt : j["points"]) {
        if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number())
            throw ParseError("polyline points must be [x,y] number pairs");
        poly.points.push_back(Point{pt[0].get<double>(), pt[1].get<double>()});
    }
    if (poly.points.size() < 2)
        throw ValidationError("polyline needs at least 2 points");
    return poly;
}

}  // namespace tessera

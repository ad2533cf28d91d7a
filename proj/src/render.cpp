#include "tessera/render.hpp"

#include <algorithm>
#include <vector>

#include "tessera/errors.hpp"
#include "tessera/numfmt.hpp"

namespace tessera {

namespace {

// Gray level per weight: rank 0 (cheapest) -> 255 (white), top rank -> 0.
int gray_of(const std::vector<double>& distinct, double w) {
    if (distinct.size() < 2) return 255;
    const std::size_t rank =
        std::lower_bound(distinct.begin(), distinct.end(), w) - distinct.begin();
    return 255 - static_cast<int>(255 * rank / (distinct.size() - 1));
}

}  // namespace

std::string render_svg(const Tessellation& t, const GridPath* grid, const Polyline* ref,
                       const RenderSpec& spec, const Query* query) {
    if (spec.cell_px < 4) throw ValidationError("cell_px must be at least 4");
    const int m = t.width(), n = t.height();
    const double c = spec.cell_px;
    auto px = [&](double x) { return fmt_g9(x * c); };
    auto py = [&](double y) { return fmt_g9((n - y) * c); };

    if (grid)
        for (CellIndex v : grid->vertices)
            if (!t.in_range(v))
                throw IndexError("grid path vertex outside the tessellation");
    if (ref)
        for (const Point& p : ref->points)
            if (!(p.x >= 0.0 && p.x <= m && p.y >= 0.0 && p.y <= n))
                throw OutOfBounds("reference path point outside the tessellation");
    if (query) validate_query(t, *query);

    std::vector<double> distinct(t.weights().begin(), t.weights().end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_g9(m * c) +
           "\" height=\"" + fmt_g9(n * c) + "\" viewBox=\"0 0 " + fmt_g9(m * c) + " " +
           fmt_g9(n * c) + "\">\n";

    for (int y = 1; y <= n; ++y) {
        for (int x = 1; x <= m; ++x) {
            const int g = gray_of(distinct, t.weight(x, y));
            svg += "<rect x=\"" + px(x - 1) + "\" y=\"" + py(double(y)) + "\" width=\"" +
                   fmt_g9(c) + "\" height=\"" + fmt_g9(c) + "\" fill=\"rgb(" +
                   std::to_string(g) + "," + std::to_string(g) + "," + std::to_string(g) +
                   ")\" stroke=\"#999\" stroke-width=\"1\"/>\n";
        }
    }

    if (ref && ref->points.size() >= 2) {
        svg += "<polyline fill=\"none\" stroke=\"red\" stroke-width=\"" + fmt_g9(c / 10.0) +
               "\" points=\"";
        for (std::size_t i = 0; i < ref->points.size(); ++i) {
            if (i) svg += " ";
            svg += px(ref->points[i].x) + "," + py(ref->points[i].y);
        }
        svg += "\"/>\n";
    }
    if (grid && !grid->vertices.empty()) {
        svg += "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"" + fmt_g9(c / 10.0) +
               "\" points=\"";
        for (std::size_t i = 0; i < grid->vertices.size(); ++i) {
            if (i) svg += " ";
            svg += px(grid->vertices[i].x - 0.5) + "," + py(grid->vertices[i].y - 0.5);
        }
        svg += "\"/>\n";
    }
    if (query) {
        const Point s = t.cell_center(query->start), g = t.cell_center(query->goal);
        const std::string r = fmt_g9(c / 8.0), fs = fmt_g9(c / 2.5);
        svg += "<circle cx=\"" + px(s.x) + "\" cy=\"" + py(s.y) + "\" r=\"" + r +
               "\" fill=\"black\" stroke=\"white\" stroke-width=\"1\"/>\n";
        svg += "<circle cx=\"" + px(g.x) + "\" cy=\"" + py(g.y) + "\" r=\"" + r +
               "\" fill=\"black\" stroke=\"white\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + fmt_g9(s.x * c + c / 5.0) + "\" y=\"" + fmt_g9((n - s.y) * c - c / 5.0) +
               "\" font-size=\"" + fs + "\" fill=\"black\" stroke=\"white\" stroke-width=\"0.5\" "
               "paint-order=\"stroke\">s</text>\n";
        svg += "<text x=\"" + fmt_g9(g.x * c + c / 5.0) + "\" y=\"" + fmt_g9((n - g.y) * c - c / 5.0) +
               "\" font-size=\"" + fs + "\" fill=\"black\" stroke=\"white\" stroke-width=\"0.5\" "
               "paint-order=\"stroke\">g</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace tessera

#pragma once

#include <compare>
#include <span>
#include <string>
#include <vector>

namespace tessera {

// 1-based cell index: (1,1) is the bottom-left cell, x grows right, y grows up.
struct CellIndex {
    int x = 0;
    int y = 0;
    friend auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point&, const Point&) = default;
};

struct Query {
    CellIndex start;
    CellIndex goal;
};

// An m x n grid of unit squares with one nonnegative weight per cell.
// Cell (x,y) covers [x-1,x] x [y-1,y].
class Tessellation {
public:
    // weights are row-major, row y=1 first; throws ValidationError on bad
    // dimensions, wrong length, or non-finite / negative weights.
    Tessellation(int m, int n, std::vector<double> weights);

    int width() const { return m_; }
    int height() const { return n_; }

    bool in_range(CellIndex c) const {
        return c.x >= 1 && c.x <= m_ && c.y >= 1 && c.y <= n_;
    }

    // Throws IndexError when out of range.
    double weight(CellIndex c) const;
    double weight(int x, int y) const { return weight(CellIndex{x, y}); }

    Point cell_center(CellIndex c) const;

    // Maps a point of [0,m] x [0,n] to the cell containing it, treating cells
    // as half-open [x-1,x) x [y-1,y) and clamping the top/right boundary into
    // the last row/column. Throws OutOfBounds outside the rectangle.
    CellIndex cell_of_point(Point p) const;

    std::span<const double> weights() const { return w_; }

private:
    int m_ = 0;
    int n_ = 0;
    std::vector<double> w_;  // row-major, (x,y) at (y-1)*m_ + (x-1)
};

struct Instance {
    Tessellation tess;
    Query query;
};

// Parses either the plain-text instance format or its JSON variant
// (auto-detected by a leading '{'). Throws ParseError / ValidationError /
// InvalidQuery.
Instance load_instance(const std::string& text);

// Inverse of load_instance for the plain-text format; weights are written so
// they reload bit-for-bit.
std::string serialize_instance(const Tessellation& t, const Query& q);

// JSON variant of the instance format.
Instance load_instance_json(const std::string& text);
std::string serialize_instance_json(const Tessellation& t, const Query& q);

// Validates a query against a tessellation: both cells in range, start != goal.
// Throws InvalidQuery.
void validate_query(const Tessellation& t, const Query& q);

}  // namespace tessera

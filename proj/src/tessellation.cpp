#include "tessera/tessellation.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"
#include "tessera/errors.hpp"
#include "tessera/numfmt.hpp"

namespace tessera {

Tessellation::Tessellation(int m, int n, std::vector<double> weights)
    : m_(m), n_(n), w_(std::move(weights)) {
    if (m_ < 1 || n_ < 1)
        throw ValidationError("tessellation dimensions must be at least 1x1, got " +
                              std::to_string(m_) + "x" + std::to_string(n_));
    if (w_.size() != static_cast<std::size_t>(m_) * static_cast<std::size_t>(n_))
        throw ValidationError("expected " + std::to_string(m_ * n_) + " weights, got " +
                              std::to_string(w_.size()));
    for (std::size_t i = 0; i < w_.size(); ++i) {
        if (!std::isfinite(w_[i]) || w_[i] < 0.0)
            throw ValidationError("weight #" + std::to_string(i) +
                                  " must be finite and non-negative");
    }
}

double Tessellation::weight(CellIndex c) const {
    if (!in_range(c))
        throw IndexError("cell (" + std::to_string(c.x) + "," + std::to_string(c.y) +
                         ") outside " + std::to_string(m_) + "x" + std::to_string(n_) +
                         " tessellation");
    return w_[static_cast<std::size_t>(c.y - 1) * m_ + (c.x - 1)];
}

Point Tessellation::cell_center(CellIndex c) const {
    if (!in_range(c))
        throw IndexError("cell (" + std::to_string(c.x) + "," + std::to_string(c.y) +
                         ") outside " + std::to_string(m_) + "x" + std::to_string(n_) +
                         " tessellation");
    return Point{c.x - 0.5, c.y - 0.5};
}

CellIndex Tessellation::cell_of_point(Point p) const {
    if (!(p.x >= 0.0 && p.x <= m_ && p.y >= 0.0 && p.y <= n_))
        throw OutOfBounds("point (" + fmt_g9(p.x) + "," + fmt_g9(p.y) + ") outside [0," +
                          std::to_string(m_) + "]x[0," + std::to_string(n_) + "]");
    int cx = static_cast<int>(std::floor(p.x)) + 1;
    int cy = static_cast<int>(std::floor(p.y)) + 1;
    if (cx > m_) cx = m_;
    if (cy > n_) cy = n_;
    return CellIndex{cx, cy};
}

void validate_query(const Tessellation& t, const Query& q) {
    if (!t.in_range(q.start) || !t.in_range(q.goal))
        throw InvalidQuery("query cell outside tessellation");
    if (q.start == q.goal)
        throw InvalidQuery("start and goal must be distinct cells");
}

namespace {

Instance load_instance_text(const std::string& text) {
    std::istringstream in(text);
    long long m = 0, n = 0;
    if (!(in >> m >> n))
        throw ParseError("expected header line 'm n'");
    if (m < 1 || n < 1)
        throw ValidationError("dimensions must be at least 1x1");
    if (m > 100000 || n > 100000 || m * n > 100000000)
        throw ValidationError("tessellation implausibly large");
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(m * n));
    for (long long i = 0; i < m * n; ++i) {
        double v = 0.0;
        if (!(in >> v))
            throw ParseError("expected " + std::to_string(m * n) + " weights, got " +
                             std::to_string(i));
        w.push_back(v);
    }
    std::string tag;
    Query q;
    if (!(in >> tag) || tag != "s")
        throw ParseError("expected 's sx sy g gx gy' after the weight rows");
    if (!(in >> q.start.x >> q.start.y))
        throw ParseError("bad start cell");
    if (!(in >> tag) || tag != "g")
        throw ParseError("expected 'g gx gy' after the start cell");
    if (!(in >> q.goal.x >> q.goal.y))
        throw ParseError("bad goal cell");
    if (in >> tag)
        throw ParseError("trailing content after the query line: '" + tag + "'");
    Tessellation t(static_cast<int>(m), static_cast<int>(n), std::move(w));
    validate_query(t, q);
    return Instance{std::move(t), q};
}

CellIndex cell_from_json(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        throw ParseError(std::string(what) + " must be an [x,y] integer pair");
    return CellIndex{j[0].get<int>(), j[1].get<int>()};
}

}  // namespace

Instance load_instance_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("bad JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ParseError("instance JSON must be an object");
    for (const char* key : {"m", "n", "weights", "start", "goal"})
        if (!j.contains(key))
            throw ParseError(std::string("instance JSON missing key '") + key + "'");
    if (!j["m"].is_number_integer() || !j["n"].is_number_integer())
        throw ParseError("'m' and 'n' must be integers");
    int m = j["m"].get<int>();
    int n = j["n"].get<int>();
    if (!j["weights"].is_array())
        throw ParseError("'weights' must be an array");
    std::vector<double> w;
    w.reserve(j["weights"].size());
    for (const auto& v : j["weights"]) {
        if (!v.is_number())
            throw ParseError("'weights' must contain numbers only");
        w.push_back(v.get<double>());
    }
    Query q{cell_from_json(j["start"], "'start'"), cell_from_json(j["goal"], "'goal'")};
    Tessellation t(m, n, std::move(w));
    validate_query(t, q);
    return Instance{std::move(t), q};
}

Instance load_instance(const std::string& text) {
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
        if (c == '{') return load_instance_json(text);
        break;
    }
    return load_instance_text(text);
}

std::string serialize_instance(const Tessellation& t, const Query& q) {
    std::string out = std::to_string(t.width()) + " " + std::to_string(t.height()) + "\n";
    for (int y = 1; y <= t.height(); ++y) {
        for (int x = 1; x <= t.width(); ++x) {
            if (x > 1) out += " ";
            out += fmt_exact(t.weight(x, y));
        }
        out += "\n";
    }
    out += "s " + std::to_string(q.start.x) + " " + std::to_string(q.start.y) + " g " +
           std::to_string(q.goal.x) + " " + std::to_string(q.goal.y) + "\n";
    return out;
}

std::string serialize_instance_json(const Tessellation& t, const Query& q) {
    std::string out = "{\"m\":" + std::to_string(t.width()) +
                      ",\"n\":" + std::to_string(t.height()) + ",\"weights\":[";
    bool first = true;
    for (int y = 1; y <= t.height(); ++y) {
        for (int x = 1; x <= t.width(); ++x) {
            if (!first) out += ",";
            first = false;
            out += fmt_exact(t.weight(x, y));
        }
    }
    out += "],\"start\":[" + std::to_string(q.start.x) + "," + std::to_string(q.start.y) + "]";
    out += ",\"goal\":[" + std::to_string(q.goal.x) + "," + std::to_string(q.goal.y) + "]}";
    return out;
}

}  // namespace tessera

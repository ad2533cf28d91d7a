#include <cmath>
#include <vector>

#include "doctest.h"
#include "tessera/analysis.hpp"
#include "tessera/clip.hpp"
#include "tessera/errors.hpp"
#include "tessera/grid_graph.hpp"
#include "tessera/steiner.hpp"

using namespace tessera;

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

LevelSet hand_level_set(int m, int n, std::vector<CellIndex> members, double a = 0.4) {
    LevelSet ls;
    ls.a = a;
    ls.m = m;
    ls.n = n;
    ls.mask.assign(std::size_t(m) * n, 0);
    for (CellIndex c : members) ls.mask[std::size_t(c.y - 1) * m + (c.x - 1)] = 1;
    std::sort(members.begin(), members.end(),
              [](CellIndex a_, CellIndex b_) { return std::pair(a_.y, a_.x) < std::pair(b_.y, b_.x); });
    ls.members = std::move(members);
    return ls;
}

}  // namespace

TEST_CASE("level sets collect cells that meet the length threshold") {
    Tessellation t(3, 1, {1, 1, 1});
    const CostBreakdown b = clip_lengths(t, Polyline{{{0.5, 0.5}, {2.5, 0.5}}});
    // clip lengths are 0.5, 1.0, 0.5

    const LevelSet all = level_set(b, 0.0);  // threshold 0 admits every cell
    CHECK(all.members.size() == 3);
    const LevelSet half = level_set(b, 0.5);
    CHECK(half.members.size() == 3);
    CHECK(half.contains({2, 1}));
    CHECK_FALSE(half.contains({4, 1}));  // out of range is never a member

    CHECK_THROWS_AS(level_set(b, -0.01), BadThreshold);
    CHECK_THROWS_AS(level_set(b, 0.51), BadThreshold);
}

TEST_CASE("membership tolerance absorbs clip noise but nothing more") {
    Tessellation t(2, 1, {1, 1});
    const double a = 0.25;
    const CostBreakdown close =
        clip_lengths(t, Polyline{{{0.5, 0.5}, {0.75 - 5e-10, 0.5}}});
    CHECK(level_set(close, a).contains({1, 1}));  // 5e-10 under: within tolerance
    const CostBreakdown off = clip_lengths(t, Polyline{{{0.5, 0.5}, {0.75 - 1e-8, 0.5}}});
    CHECK_FALSE(level_set(off, a).contains({1, 1}));  // 1e-8 under: out
}

TEST_CASE("monotone thresholds give nested level sets") {
    Tessellation t(4, 3, {1, 5, 1, 2, 2, 1, 3, 1, 1, 4, 1, 2});
    const RefSolution r = ref_shortest_path(t, {{1, 1}, {4, 3}}, SteinerConfig{3, 2'000'000});
    const CostBreakdown b = clip_lengths(t, r.polyline);
    LevelSet prev = level_set(b, 0.0);
    for (double a : {0.1, 0.2, 0.3, 0.4142135623730951, 0.5}) {
        const LevelSet cur = level_set(b, a);
        for (const CellIndex& c : cur.members) CHECK(prev.contains(c));
        prev = cur;
    }
}

TEST_CASE("decompose merges revisits of the same component") {
    // U-shaped component; the straight polyline leaves it in the middle but
    // re-enters the same component, so there is one visit and no bridge
    Tessellation t(3, 2, std::vector<double>(6, 1.0));
    const LevelSet ls =
        hand_level_set(3, 2, {{1, 1}, {3, 1}, {1, 2}, {2, 2}, {3, 2}});
    const Polyline poly{{{0.5, 0.5}, {2.5, 0.5}}};
    const ComponentDecomposition dec = decompose(t, ls, poly);
    CHECK(dec.component_cells.size() == 1);
    CHECK(dec.h_edges.size() == 4);
    REQUIRE(dec.visits.size() == 1);
    CHECK(dec.visits[0].entry == CellIndex{1, 1});
    CHECK(dec.visits[0].exit == CellIndex{3, 1});
    CHECK(dec.bridges.empty());
}

TEST_CASE("a corner crossing yields a diagonal bridge") {
    Tessellation t(2, 2, std::vector<double>(4, 1.0));
    const Polyline poly{{{0.5, 0.5}, {1.5, 1.5}}};
    const CostBreakdown b = clip_lengths(t, poly);
    const LevelSet ls = level_set(b, 0.5);
    REQUIRE(ls.members.size() == 2);  // exactly the two diagonal cells

    const ComponentDecomposition dec = decompose(t, ls, poly);
    REQUIRE(dec.visits.size() == 2);
    REQUIRE(dec.bridges.size() == 1);
    CHECK(dec.bridges[0].from == CellIndex{1, 1});
    CHECK(dec.bridges[0].to == CellIndex{2, 2});
    CHECK(dec.bridges[0].corner_x == 1);
    CHECK(dec.bridges[0].corner_y == 1);
}

TEST_CASE("no qualifying corner raises BridgeNotFound") {
    // two isolated members on a single row: there is no lattice corner with a
    // diagonal member pair at all
    Tessellation t(3, 1, std::vector<double>(3, 1.0));
    const LevelSet ls = hand_level_set(3, 1, {{1, 1}, {3, 1}});
    const Polyline poly{{{0.5, 0.5}, {2.5, 0.5}}};
    CHECK_THROWS_AS(decompose(t, ls, poly), BridgeNotFound);
}

TEST_CASE("decompose validates its inputs") {
    Tessellation t(2, 1, {1, 1});
    const LevelSet ls = hand_level_set(2, 1, {{2, 1}});
    CHECK_THROWS_AS(decompose(t, ls, Polyline{{{0.5, 0.5}, {1.5, 0.5}}}), ValidationError);
}

TEST_CASE("lemma path follows the wall-hugging reference around an expensive cell") {
    Tessellation t(3, 2, {1, 100, 1, 1, 1, 1});
    const Query q{{1, 1}, {3, 1}};
    const RefSolution ref = ref_shortest_path(t, q, SteinerConfig{3, 2'000'000});
    CHECK(ref.cost == doctest::Approx(1.0 + kSqrt2).epsilon(1e-9));

    const GridPath lemma = construct_lemma_path(t, q, ref.polyline, kDefaultThreshold);
    CHECK(lemma.vertices ==
          std::vector<CellIndex>{{1, 1}, {2, 2}, {3, 1}});
    CHECK(lemma.cost == doctest::Approx(2.0 * kSqrt2).epsilon(1e-12));

    // the cheapest grid path can only be at most the constructed one
    const GridPath best = grid_dijkstra(t, q);
    CHECK(best.cost <= lemma.cost + 1e-12);
    CHECK(lemma.cost <= (kSqrt2 + 1.0) * ref.cost + 1e-9);

    const CostBreakdown b = clip_lengths(t, ref.polyline);
    const auto certs = per_cell_certificate(lemma, b, kDefaultThreshold);
    REQUIRE(certs.size() == 3);
    CHECK(certs.at({1, 1}).kind == CellCase::Other);
    CHECK(certs.at({3, 1}).kind == CellCase::Other);
    CHECK(certs.at({2, 2}).kind == CellCase::V);
    CHECK(certs.at({2, 2}).ratio == doctest::Approx(kSqrt2).epsilon(1e-9));
    for (const auto& [cell, cert] : certs) CHECK(cert.ok);
}

TEST_CASE("lemma path handles the single-component straight case") {
    Tessellation t(3, 1, {1, 1, 1});
    const Query q{{1, 1}, {3, 1}};
    const Polyline poly{{{0.5, 0.5}, {2.5, 0.5}}};
    const GridPath lemma = construct_lemma_path(t, q, poly, kDefaultThreshold);
    CHECK(lemma.vertices == std::vector<CellIndex>{{1, 1}, {2, 1}, {3, 1}});
    CHECK(lemma.cost == doctest::Approx(2.0));
}

TEST_CASE("lemma path rejects polylines that miss the query centers") {
    Tessellation t(2, 1, {1, 1});
    const Query q{{1, 1}, {2, 1}};
    CHECK_THROWS_AS(construct_lemma_path(t, q, Polyline{{{0.5, 0.5}, {1.4, 0.5}}}, 0.4),
                    InvalidQuery);
    CHECK_THROWS_AS(construct_lemma_path(t, q, Polyline{{{0.4, 0.5}, {1.5, 0.5}}}, 0.4),
                    InvalidQuery);
}

TEST_CASE("certificate bound") {
    CHECK(certificate_bound(kDefaultThreshold) == doctest::Approx(kSqrt2 + 1.0).epsilon(1e-15));
    CHECK(certificate_bound(0.5) == doctest::Approx(2.0 * kSqrt2).epsilon(1e-15));
    CHECK(certificate_bound(0.25) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(certificate_bound(0.0) == std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(certificate_bound(-0.1), BadThreshold);
    CHECK_THROWS_AS(certificate_bound(0.6), BadThreshold);
    // the default threshold is the minimizer: nudging either way only grows it
    const double at = certificate_bound(kDefaultThreshold);
    CHECK(certificate_bound(kDefaultThreshold - 0.01) > at);
    CHECK(certificate_bound(kDefaultThreshold + 0.01) > at);
}

TEST_CASE("certificate cases cover every bend type") {
    Tessellation t(3, 3, std::vector<double>(9, 1.0));
    auto certify = [&](std::vector<CellIndex> verts, const Polyline& poly) {
        const GridPath gp = grid_path_breakdown(t, verts);
        return per_cell_certificate(gp, clip_lengths(t, poly), kDefaultThreshold);
    };

    SUBCASE("straight axis run is case i") {
        const auto c = certify({{1, 1}, {2, 1}, {3, 1}},
                               Polyline{{{0.5, 0.5}, {2.5, 0.5}}});
        CHECK(c.at({2, 1}).kind == CellCase::I);
        CHECK(c.at({2, 1}).ratio == doctest::Approx(1.0));
        CHECK(c.at({1, 1}).kind == CellCase::Other);
    }
    SUBCASE("axis turn is case ii") {
        const auto c = certify({{1, 1}, {2, 1}, {2, 2}},
                               Polyline{{{0.5, 0.5}, {1.5, 0.5}, {1.5, 1.5}}});
        CHECK(c.at({2, 1}).kind == CellCase::II);
        CHECK(c.at({2, 1}).ratio == doctest::Approx(1.0));
    }
    SUBCASE("axis into diagonal is case iii") {
        const auto c = certify({{1, 1}, {2, 1}, {3, 2}},
                               Polyline{{{0.5, 0.5}, {1.5, 0.5}, {2.5, 1.5}}});
        CHECK(c.at({2, 1}).kind == CellCase::III);
        CHECK(c.at({2, 1}).ratio == doctest::Approx(1.0));
    }
    SUBCASE("straight diagonal run is case iv") {
        const auto c = certify({{1, 1}, {2, 2}, {3, 3}},
                               Polyline{{{0.5, 0.5}, {2.5, 2.5}}});
        CHECK(c.at({2, 2}).kind == CellCase::IV);
        CHECK(c.at({2, 2}).ratio == doctest::Approx(1.0));
    }
    SUBCASE("diagonal turn is case v") {
        const auto c = certify({{1, 1}, {2, 2}, {1, 3}},
                               Polyline{{{0.5, 0.5}, {1.5, 1.5}, {0.5, 2.5}}});
        CHECK(c.at({2, 2}).kind == CellCase::V);
        CHECK(c.at({2, 2}).ratio == doctest::Approx(1.0));
    }
}

TEST_CASE("case names") {
    CHECK(std::string(cell_case_name(CellCase::I)) == "i");
    CHECK(std::string(cell_case_name(CellCase::II)) == "ii");
    CHECK(std::string(cell_case_name(CellCase::III)) == "iii");
    CHECK(std::string(cell_case_name(CellCase::IV)) == "iv");
    CHECK(std::string(cell_case_name(CellCase::V)) == "v");
    CHECK(std::string(cell_case_name(CellCase::Other)) == "other");
}

TEST_CASE("near-half level set connectivity check") {
    CostBreakdown split;
    split.m = 3;
    split.n = 1;
    split.per_cell[{1, 1}] = 0.5;
    split.per_cell[{3, 1}] = 0.5;
    CHECK_FALSE(check_v_half_connectivity(split));

    CostBreakdown diag;
    diag.m = 2;
    diag.n = 2;
    diag.per_cell[{1, 1}] = 0.6;
    diag.per_cell[{2, 2}] = 0.7;
    CHECK(check_v_half_connectivity(diag));  // 8-adjacency counts the diagonal

    CostBreakdown empty;
    empty.m = 2;
    empty.n = 2;
    CHECK(check_v_half_connectivity(empty));  // vacuously connected

    // slack widens membership: 0.49 is out at slack 0, in at slack 0.02
    CostBreakdown close = split;
    close.per_cell[{2, 1}] = 0.49;
    CHECK(check_v_half_connectivity(close, 0.02));
    CHECK_FALSE(check_v_half_connectivity(close, 0.0));
}

#include "tessera/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <omp.h>

#include "tessera/errors.hpp"
#include "tessera/grid_graph.hpp"
#include "tessera/numfmt.hpp"
#include "tessera/steiner.hpp"

namespace tessera {

namespace {

constexpr double kSqrt2Plus1 = 1.4142135623730951 + 1.0;

}  // namespace

NamedInstance random_instance(Rng& rng, const std::string& id, int min_side, int max_side,
                              std::span<const double> palette) {
    if (min_side < 1 || max_side < min_side || palette.empty())
        throw ValidationError("bad random instance parameters");
    const int m = min_side + static_cast<int>(rng.below(max_side - min_side + 1));
    const int n = min_side + static_cast<int>(rng.below(max_side - min_side + 1));
    std::vector<double> w(static_cast<std::size_t>(m) * n);
    for (double& v : w) v = palette[rng.below(palette.size())];
    Tessellation t(m, n, std::move(w));
    Query q;
    q.start = CellIndex{1 + static_cast<int>(rng.below(m)), 1 + static_cast<int>(rng.below(n))};
    do {
        q.goal =
            CellIndex{1 + static_cast<int>(rng.below(m)), 1 + static_cast<int>(rng.below(n))};
    } while (q.goal == q.start);
    return NamedInstance{id, std::move(t), q};
}

RatioReport evaluate_instance(const std::string& id, const Tessellation& t, const Query& q,
                              const HarnessOptions& opt) {
    RatioReport r;
    r.id = id;
    r.m = t.width();
    r.n = t.height();
    r.a = opt.a;

    try {
        const GridPath grid = grid_dijkstra(t, q);
        r.grid_cost = grid.cost;
        const RefSolution ref = converge(t, q, opt.max_level, opt.rel_tol, opt.node_cap);
        r.ref_cost = ref.cost;
        r.ref_level = ref.level;
        r.ratio = r.grid_cost / r.ref_cost;
        r.bound_ok = r.grid_cost <= kSqrt2Plus1 * r.ref_cost + 1e-9;

        const CostBreakdown b = clip_lengths(t, ref.polyline);
        const LevelSet ls = level_set(b, opt.a);
        const ComponentDecomposition dec = decompose(t, ls, ref.polyline);
        r.k_components = static_cast<int>(dec.visits.size());
        r.n_bridges = static_cast<int>(dec.bridges.size());
        const GridPath lemma = construct_lemma_path(t, q, ref.polyline, opt.a);
        r.cells = per_cell_certificate(lemma, b, opt.a);
        r.cert_ok = std::all_of(r.cells.begin(), r.cells.end(),
                                [](const auto& kv) { return kv.second.ok; });
        r.v_half_connected = check_v_half_connectivity(b);
    } catch (const Error& e) {
        r.error = e.what();
    }
    return r;
}

std::vector<RatioReport> ratio_harness_serial(std::span<const NamedInstance> instances,
                                              const HarnessOptions& opt) {
    std::vector<RatioReport> reports(instances.size());
    for (std::size_t i = 0; i < instances.size(); ++i)
        reports[i] =
            evaluate_instance(instances[i].id, instances[i].tess, instances[i].query, opt);
    return reports;
}

std::vector<RatioReport> ratio_harness_parallel(std::span<const NamedInstance> instances,
                                                const HarnessOptions& opt) {
    std::vector<RatioReport> reports(instances.size());
    const int jobs = std::max(1, opt.jobs);
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (std::size_t i = 0; i < instances.size(); ++i)
        reports[i] =
            evaluate_instance(instances[i].id, instances[i].tess, instances[i].query, opt);
    return reports;
}

std::vector<RatioReport> ratio_harness(std::span<const NamedInstance> instances,
                                       const HarnessOptions& opt) {
    return opt.jobs > 1 ? ratio_harness_parallel(instances, opt)
                        : ratio_harness_serial(instances, opt);
}

std::string report_csv(std::span<const RatioReport> reports) {
    std::string out =
        "instance,m,n,a,grid_cost,ref_cost,ref_level,ratio,bound_ok,cert_ok,"
        "k_components,n_bridges\n";
    for (const RatioReport& r : reports) {
        out += r.id + "," + std::to_string(r.m) + "," + std::to_string(r.n) + "," +
               fmt_g9(r.a) + "," + fmt_g9(r.grid_cost) + "," + fmt_g9(r.ref_cost) + "," +
               std::to_string(r.ref_level) + "," + fmt_g9(r.ratio) + "," +
               (r.bound_ok ? "1" : "0") + "," + (r.cert_ok ? "1" : "0") + "," +
               std::to_string(r.k_components) + "," + std::to_string(r.n_bridges) + "\n";
    }
    return out;
}

SearchResult worst_case_search(int m, int n, std::vector<double> palette, std::uint64_t budget,
                               const HarnessOptions& opt, std::uint64_t seed,
                               const Query* query) {
    if (m < 1 || n < 1) throw ValidationError("search shape must be at least 1x1");
    std::sort(palette.begin(), palette.end());
    palette.erase(std::unique(palette.begin(), palette.end()), palette.end());
    if (palette.empty()) throw ValidationError("weight palette is empty");
    for (double w : palette)
        if (!std::isfinite(w) || w < 0.0)
            throw ValidationError("palette weights must be finite and non-negative");
    if (budget == 0) throw ValidationError("budget must be positive");
    if (budget > 10'000'000)
        throw ValidationError("budget above 10^7 assignments is not tractable");

    const std::size_t cells = static_cast<std::size_t>(m) * n;
    const Query q = query ? *query : Query{CellIndex{1, 1}, CellIndex{m, n}};
    validate_query(Tessellation(m, n, std::vector<double>(cells, 1.0)), q);

    // does palette.size()^cells fit within budget?
    bool exhaustive = true;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < cells; ++i) {
        if (total > budget / palette.size()) {
            exhaustive = false;
            break;
        }
        total *= palette.size();
    }
    if (exhaustive) exhaustive = total <= budget;
    const std::uint64_t count = exhaustive ? total : budget;

    // Materialize the weight assignments up front so the sampled stream does
    // not depend on evaluation order (and thus on --jobs).
    std::vector<std::uint8_t> digits(count * cells);
    if (exhaustive) {
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            std::uint64_t v = idx;
            for (std::size_t c = 0; c < cells; ++c) {
                digits[idx * cells + c] = static_cast<std::uint8_t>(v % palette.size());
                v /= palette.size();
            }
        }
    } else {
        Rng rng(seed);
        for (std::uint64_t idx = 0; idx < count; ++idx)
            for (std::size_t c = 0; c < cells; ++c)
                digits[idx * cells + c] = static_cast<std::uint8_t>(rng.below(palette.size()));
    }

    std::vector<NamedInstance> batch;
    batch.reserve(count);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::vector<double> w(cells);
        for (std::size_t c = 0; c < cells; ++c) w[c] = palette[digits[idx * cells + c]];
        batch.push_back(NamedInstance{(exhaustive ? "x" : "s") + std::to_string(idx),
                                      Tessellation(m, n, std::move(w)), q});
    }
    const std::vector<RatioReport> reports = ratio_harness(batch, opt);

    std::size_t best = 0;
    bool have_best = false;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (!std::isfinite(reports[i].ratio)) continue;
        if (!have_best || reports[i].ratio > reports[best].ratio) {
            best = i;
            have_best = true;
        }
    }
    if (!have_best) throw Error("no assignment produced a finite ratio");
    if (reports[best].ratio > kSqrt2Plus1 + 1e-6)
        throw Error("assignment " + reports[best].id + " has ratio " +
                    fmt_g9(reports[best].ratio) + " above the sqrt(2)+1 bound");

    return SearchResult{reports[best].id, batch[best].tess, q, reports[best].ratio, exhaustive,
                        reports.size()};
}

}  // namespace tessera

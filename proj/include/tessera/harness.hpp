#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tessera/analysis.hpp"
#include "tessera/tessellation.hpp"

namespace tessera {

// Deterministic 64-bit generator (splitmix64); identical streams on every
// platform, which std::mt19937 distributions do not guarantee.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // [0, n); plain modulo, bias is irrelevant for test workloads
    std::uint64_t below(std::uint64_t n) { return next() % n; }
};

struct NamedInstance {
    std::string id;
    Tessellation tess;
    Query query;
};

// Random instance with weights drawn from a palette and distinct random
// start/goal cells.
NamedInstance random_instance(Rng& rng, const std::string& id, int min_side, int max_side,
                              std::span<const double> palette);

struct HarnessOptions {
    int max_level = 5;                  // converge refinement ceiling
    double rel_tol = 1e-4;              // converge early-stop tolerance
    std::size_t node_cap = 2'000'000;
    double a = kDefaultThreshold;
    int jobs = 1;                       // >1 fans instances out across threads
};

struct RatioReport {
    std::string id;
    int m = 0, n = 0;
    double a = 0.0;
    double grid_cost = 0.0;
    double ref_cost = 0.0;
    int ref_level = 0;
    double ratio = 0.0;      // grid_cost / ref_cost
    bool bound_ok = false;   // grid_cost <= (sqrt(2)+1) * ref_cost + 1e-9
    bool cert_ok = false;    // every per-cell certificate ok
    int k_components = 0;    // component visits along the reference path
    int n_bridges = 0;
    bool v_half_connected = false;
    std::map<CellIndex, CellCert> cells;
    std::string error;       // non-empty when the lemma machinery failed
};

// Full pipeline for one instance: grid Dijkstra, converge oracle, lemma path,
// certificates, V_{1/2} connectivity. Analysis failures land in
// RatioReport::error instead of being thrown.
RatioReport evaluate_instance(const std::string& id, const Tessellation& t, const Query& q,
                              const HarnessOptions& opt);

// Reports in input order. The serial and parallel drivers produce identical
// results; ratio_harness picks one by opt.jobs.
std::vector<RatioReport> ratio_harness_serial(std::span<const NamedInstance> instances,
                                              const HarnessOptions& opt);
std::vector<RatioReport> ratio_harness_parallel(std::span<const NamedInstance> instances,
                                                const HarnessOptions& opt);
std::vector<RatioReport> ratio_harness(std::span<const NamedInstance> instances,
                                       const HarnessOptions& opt);

// Header + one row per report, 9 significant digits, booleans as 1/0.
std::string report_csv(std::span<const RatioReport> reports);

struct SearchResult {
    std::string id;          // assignment label of the maximizer
    Tessellation tess;
    Query query;
    double ratio = 0.0;
    bool exhaustive = false; // palette^(m*n) fit within the budget
    std::size_t evaluated = 0;
};

// Maximizes the grid/oracle ratio over weight assignments of an m x n grid:
// exhaustive when palette^(m*n) <= budget, otherwise `budget` seeded samples.
// The query defaults to corner to corner. Throws Error if the best ratio
// exceeds sqrt(2)+1+1e-6 (that would contradict the bound and means a bug).
SearchResult worst_case_search(int m, int n, std::vector<double> palette,
                               std::uint64_t budget, const HarnessOptions& opt,
                               std::uint64_t seed, const Query* query = nullptr);

}  // namespace tessera

// Times the serial batch driver against the OpenMP one on identical inputs
// and cross-checks that both produce the same reports.
//
//   bench_harness [instances=32] [jobs=omp_get_max_threads()] [max_level=4]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <omp.h>

#include "tessera/harness.hpp"

using namespace tessera;

namespace {

template <typename F>
double time_run(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    const int count = argc > 1 ? std::atoi(argv[1]) : 32;
    const int jobs = argc > 2 ? std::atoi(argv[2]) : omp_get_max_threads();
    const int max_level = argc > 3 ? std::atoi(argv[3]) : 4;

    const double palette[] = {1.0, 2.0, 5.0, 100.0};
    Rng rng(20240817);
    std::vector<NamedInstance> instances;
    instances.reserve(count);
    for (int i = 0; i < count; ++i)
        instances.push_back(random_instance(rng, "bench" + std::to_string(i), 8, 16, palette));

    HarnessOptions opt;
    opt.max_level = max_level;
    opt.jobs = jobs;

    std::vector<RatioReport> serial, parallel;
    const double t_serial =
        time_run([&] { serial = ratio_harness_serial(instances, opt); });
    const double t_parallel =
        time_run([&] { parallel = ratio_harness_parallel(instances, opt); });

    if (report_csv(serial) != report_csv(parallel)) {
        std::fprintf(stderr, "FAIL: serial and parallel reports differ\n");
        return 1;
    }
    std::printf("instances=%d max_level=%d jobs=%d\n", count, max_level, jobs);
    std::printf("serial   %.3fs\n", t_serial);
    std::printf("parallel %.3fs  speedup %.2fx\n", t_parallel, t_serial / t_parallel);
    return 0;
}

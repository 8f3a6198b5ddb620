// Benchmarks the OpenMP parallel map over the 36 tracked paths against the
// serial reference implementation and checks that both produce identical
// collision tables.
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "fermat/tracker.hpp"

using namespace fermat;

int main(int argc, char** argv) {
    int threads = argc > 1 ? std::atoi(argv[1]) : 8;
    PencilConfig cfg;

    auto t0 = std::chrono::steady_clock::now();
    std::vector<CollisionRow> serial = collision_table_serial(cfg);
    double ts = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("serial reference: %.1fs\n", ts);

    t0 = std::chrono::steady_clock::now();
    std::vector<CollisionRow> parallel = collision_table(cfg, threads);
    double tp = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("parallel (%d threads): %.1fs  speedup %.2fx\n", threads, tp, ts / tp);

    for (int i = 0; i < 36; ++i) {
        const CollisionRow &a = serial[i], &b = parallel[i];
        if (a.i != b.i || a.delta != b.delta || a.epsilon != b.epsilon ||
            a.distinct_g_roots != b.distinct_g_roots ||
            a.min_fiber_points != b.min_fiber_points || a.max_fiber_points != b.max_fiber_points) {
            std::printf("MISMATCH at row %d\n", i + 1);
            return 1;
        }
    }
    std::printf("tables identical\n");
    return 0;
}

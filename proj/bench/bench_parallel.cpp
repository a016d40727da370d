// Times the trial-level kernels serial (jobs=1) versus OpenMP (jobs=auto)
// and prints a small table.  Output values are wall times in seconds.

#include <chrono>
#include <cstdio>

#include "ctap/experiments.hpp"
#include "ctap/parallel.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

double time_gap_scan(int jobs) {
    ctap::GapScanConfig c;
    c.family = "hex_grid";
    c.params = {2.0, 3.0, 4.0, 5.0};
    c.trials = 50;
    c.randomize = true;
    c.seed = 7;
    c.jobs = jobs;
    const auto t0 = clock_type::now();
    const ctap::GapScanResult r = ctap::run_gap_scan(c);
    const double dt = seconds_since(t0);
    if (r.rows.size() != c.params.size())
        std::fprintf(stderr, "gap scan dropped points (%zu of %zu)\n", r.rows.size(),
                     c.params.size());
    return dt;
}

double time_tree_tstar(int jobs) {
    ctap::TreeTstarConfig c;
    c.depths = {1, 2, 3};
    c.straddles = {10.0};
    c.jobs = jobs;
    const auto t0 = clock_type::now();
    const ctap::SweepResult r = ctap::run_tree_tstar(c);
    const double dt = seconds_since(t0);
    if (r.partial_failure) std::fprintf(stderr, "tree sweep reported failures\n");
    return dt;
}

} // namespace

int main() {
    const int workers = ctap::effective_jobs(0);
    std::printf("workers for the parallel runs: %d\n\n", workers);
    std::printf("%-34s %12s %12s %9s\n", "kernel", "serial [s]", "parallel [s]",
                "speedup");

    const double gs1 = time_gap_scan(1);
    const double gsN = time_gap_scan(0);
    std::printf("%-34s %12.3f %12.3f %8.2fx\n", "hex gap scan (4 pts x 50 trials)", gs1,
                gsN, gs1 / gsN);

    const double tt1 = time_tree_tstar(1);
    const double ttN = time_tree_tstar(0);
    std::printf("%-34s %12.3f %12.3f %8.2fx\n", "tree T* sweep (3 depths, s=10)", tt1,
                ttN, tt1 / ttN);
    return 0;
}

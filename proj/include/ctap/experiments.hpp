#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ctap/graph.hpp"

namespace ctap {

// Batch reproductions of the numerical studies: gap scaling across graph
// families and threshold-time scaling on subdivided trees, persisted as
// CSV.  Given the same configuration (and seed), output is byte-identical
// across runs and worker counts, except for the wall_time column.

// ------- gap scan (spectral CSV) -------

struct GapScanRow {
    std::string family;
    double param = 0.0;
    int n_vertices = 0;
    int seed_count = 0; // trials that produced a well-defined gap
    double gap_mean = 0.0;
    double gap_std = 0.0; // sample standard deviation (0 for a single value)
    double interlacing_bound = 0.0;
    double det_bound = 0.0; // best (max) per-party determinant bound
};

struct GapScanConfig {
    std::string family;      // generator family name
    std::vector<double> params; // size/parameter sweep values
    int trials = 50;         // per point, for randomized families
    bool randomize = false;  // perturb weights by uniform (0,2] draws
    double p = 0.81;         // random_bipartite edge probability
    int arms = 3;            // star arm count
    int arity = 2;           // subdivided_tree arity
    std::uint64_t seed = 0;
    int jobs = 0; // 0 = auto
};

struct GapScanResult {
    std::vector<GapScanRow> rows;
    std::vector<std::string> log; // skipped points/trials with reasons
    bool partial_failure = false;
};

// Mean/std of the gap per sweep point.  square_grid and random_bipartite
// are inherently random (weight perturbations / edge instantiations);
// deterministic families run once per point unless `randomize` is set.
// Generation or nullity failures are logged and the point (or trial) is
// skipped.
GapScanResult run_gap_scan(const GapScanConfig& config);

void write_gap_csv(const GapScanResult& result, const std::string& path);

// ------- experiment sweeps (rows with reference curves) -------

struct SweepRow {
    std::string experiment;
    std::string family;
    double parameter = 0.0;
    int n_vertices = 0;
    int n_parties = 0;
    std::string metric;
    double value = 0.0;
    double dispersion = 0.0;
    int seed_count = 0;
    double wall_time = 0.0; // seconds; excluded from determinism guarantees
    double ref_a = 0.0;     // gap_scaling: 1/|V|;      tree_tstar: 10·√k
    double ref_b = 0.0;     // gap_scaling: 10/√|V|;    tree_tstar: unused (0)
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<std::string> log;
    bool partial_failure = false;
};

// Gap scaling with the dashed reference curves 1/|V| and 10/√|V|.
SweepResult run_gap_scaling(const GapScanConfig& config);

struct TreeTstarConfig {
    std::vector<int> depths;
    std::vector<double> straddles;
    double threshold = 0.05;
    int arity = 2;
    int steps_per_unit = 20;
    double cap = 1e5;
    int jobs = 0;
};

// T* per (depth, straddle) on subdivided trees, parties = leaves, sender
// and receiver maximally separated; reference curve 10·√k.  TStarNotFound
// rows carry value NaN, are logged, and flag partial failure.
SweepResult run_tree_tstar(const TreeTstarConfig& config);

void write_sweep_csv(const SweepResult& result, const std::string& path);

// Deterministic shortest float formatting shared by all CSV writers.
std::string csv_num(double x);

// Sender/receiver choice for generated graphs: the maximally separated pair
// of parties (lowest vertex ids on distance ties).
std::pair<int, int> distant_party_pair(const WeightedGraph& g);

} // namespace ctap

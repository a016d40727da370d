#include "ctap/experiments.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <queue>

#include "ctap/dynamics.hpp"
#include "ctap/errors.hpp"
#include "ctap/generators.hpp"
#include "ctap/parallel.hpp"
#include "ctap/rng.hpp"
#include "ctap/spectral.hpp"
#include "ctap/viability.hpp"

namespace ctap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double elapsed_seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct TrialOutcome {
    double gap = kNaN;
    double interlacing = kNaN;
    double det_bound = kNaN;
    std::string note; // set when the trial was skipped
};

// One gap measurement (plus bounds, when defined) on a concrete graph.
TrialOutcome measure(const WeightedGraph& g) {
    TrialOutcome out;
    try {
        out.gap = gap_around_zero(adjacency(g));
    } catch (const DegenerateKernel& e) {
        out.note = std::string("gap undefined: ") + e.what();
        return out;
    }
    if (!g.parties().empty()) {
        out.interlacing = interlacing_gap_bound(g).value;
        double best = 0.0;
        for (const DetBound& b : det_eigen_lower_bound(g)) best = std::max(best, b.value);
        out.det_bound = best;
    }
    return out;
}

// The concrete graph for (family, param, trial).  square_grid and
// random_bipartite are inherently random; other families randomize only
// on request.
WeightedGraph instantiate(const GapScanConfig& c, double param,
                          std::uint64_t point_stream, int trial) {
    FamilySpec spec;
    spec.family = c.family;
    if (c.family == "path")
        spec.params["n"] = param;
    else if (c.family == "star") {
        spec.params["m"] = param;
        spec.params["arms"] = c.arms;
    } else if (c.family == "subdivided_tree") {
        spec.params["depth"] = param;
        spec.params["arity"] = c.arity;
    } else if (c.family == "random_bipartite") {
        spec.params["m"] = param;
        spec.params["p"] = c.p;
        spec.seed = substream(point_stream, trial); // fresh edge set per trial
        return from_family(spec);
    } else {
        spec.params["k"] = param;
    }
    WeightedGraph g = from_family(spec);
    if (c.randomize || c.family == "square_grid")
        g = randomize_weights(g, substream(point_stream, trial));
    return g;
}

bool family_is_random(const GapScanConfig& c) {
    return c.randomize || c.family == "square_grid" || c.family == "random_bipartite";
}

} // namespace

// Sender/receiver: the maximally separated party pair (lowest ids on ties).
std::pair<int, int> distant_party_pair(const WeightedGraph& g) {
    const auto& parties = g.parties();
    if (parties.size() < 2)
        throw InvalidParameter("need at least two parties for a transfer pair");
    auto adj = g.adjacency_list();
    int best_a = parties[0], best_b = parties[1], best_d = -1;
    for (int a : parties) {
        std::vector<int> dist(g.size(), -1);
        std::queue<int> q;
        dist[a] = 0;
        q.push(a);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int u : adj[v])
                if (dist[u] < 0) {
                    dist[u] = dist[v] + 1;
                    q.push(u);
                }
        }
        for (int b : parties)
            if (b > a && dist[b] > best_d) {
                best_d = dist[b];
                best_a = a;
                best_b = b;
            }
    }
    return {best_a, best_b};
}

GapScanResult run_gap_scan(const GapScanConfig& config) {
    GapScanResult result;
    for (std::size_t pi = 0; pi < config.params.size(); ++pi) {
        const double param = config.params[pi];
        // Key the point's RNG stream on the parameter value itself, so the
        // same (family, param, seed) triple yields the same trials no
        // matter which sweep it appears in.
        const std::uint64_t point_stream =
            substream(config.seed, std::bit_cast<std::uint64_t>(param));
        const int trials = family_is_random(config) ? std::max(1, config.trials) : 1;

        WeightedGraph shape; // representative instance for metadata
        try {
            shape = instantiate(config, param, point_stream, 0);
        } catch (const Error& e) {
            result.log.push_back(config.family + " param " + csv_num(param) +
                                 ": generation failed: " + e.what());
            result.partial_failure = true;
            continue;
        }

        std::vector<TrialOutcome> outcomes(trials);
        parallel_for(
            trials,
            [&](std::size_t t) {
                try {
                    outcomes[t] = measure(
                        instantiate(config, param, point_stream, static_cast<int>(t)));
                } catch (const Error& e) {
                    outcomes[t].note = e.what();
                }
            },
            config.jobs);

        GapScanRow row;
        row.family = config.family;
        row.param = param;
        row.n_vertices = shape.size();
        double sum = 0.0, sum_il = 0.0, sum_db = 0.0;
        int n_ok = 0, n_bounds = 0;
        for (int t = 0; t < trials; ++t) {
            const TrialOutcome& o = outcomes[t];
            if (!o.note.empty()) {
                result.log.push_back(config.family + " param " + csv_num(param) +
                                     " trial " + std::to_string(t) + ": " + o.note);
                continue;
            }
            sum += o.gap;
            ++n_ok;
            if (!std::isnan(o.interlacing)) {
                sum_il += o.interlacing;
                sum_db += o.det_bound;
                ++n_bounds;
            }
        }
        if (n_ok == 0) {
            result.log.push_back(config.family + " param " + csv_num(param) +
                                 ": no trial produced a gap; point skipped");
            result.partial_failure = true;
            continue;
        }
        row.seed_count = n_ok;
        row.gap_mean = sum / n_ok;
        double ss = 0.0;
        for (int t = 0; t < trials; ++t)
            if (outcomes[t].note.empty()) {
                const double d = outcomes[t].gap - row.gap_mean;
                ss += d * d;
            }
        row.gap_std = n_ok > 1 ? std::sqrt(ss / (n_ok - 1)) : 0.0;
        row.interlacing_bound = n_bounds ? sum_il / n_bounds : kNaN;
        row.det_bound = n_bounds ? sum_db / n_bounds : kNaN;
        result.rows.push_back(std::move(row));
    }
    return result;
}

SweepResult run_gap_scaling(const GapScanConfig& config) {
    SweepResult result;
    for (std::size_t pi = 0; pi < config.params.size(); ++pi) {
        GapScanConfig point = config;
        point.params = {config.params[pi]};
        const auto t0 = std::chrono::steady_clock::now();
        GapScanResult scan = run_gap_scan(point);
        const double wall = elapsed_seconds(t0);
        for (auto& line : scan.log) result.log.push_back(line);
        if (scan.rows.empty()) {
            result.partial_failure = true;
            continue;
        }
        const GapScanRow& r = scan.rows.front();
        SweepRow row;
        row.experiment = "gap_scaling";
        row.family = r.family;
        row.parameter = r.param;
        row.n_vertices = r.n_vertices;
        try {
            row.n_parties = static_cast<int>(
                instantiate(config, r.param,
                            substream(config.seed, std::bit_cast<std::uint64_t>(r.param)),
                            0)
                    .parties()
                    .size());
        } catch (const Error&) {
            row.n_parties = 0;
        }
        row.metric = "gap";
        row.value = r.gap_mean;
        row.dispersion = r.gap_std;
        row.seed_count = r.seed_count;
        row.wall_time = wall;
        row.ref_a = 1.0 / r.n_vertices;
        row.ref_b = 10.0 / std::sqrt(static_cast<double>(r.n_vertices));
        result.rows.push_back(std::move(row));
        result.partial_failure = result.partial_failure || scan.partial_failure;
    }
    return result;
}

SweepResult run_tree_tstar(const TreeTstarConfig& config) {
    SweepResult result;
    if (config.depths.empty() || config.straddles.empty())
        throw InvalidParameter("tree_tstar: depths and straddles must be nonempty");

    struct Point {
        double s;
        int k;
    };
    std::vector<Point> points;
    for (double s : config.straddles)
        for (int k : config.depths) points.push_back({s, k});

    std::vector<SweepRow> rows(points.size());
    std::vector<std::string> notes(points.size());
    parallel_for(
        points.size(),
        [&](std::size_t i) {
            const auto [s, k] = points[i];
            const auto t0 = std::chrono::steady_clock::now();
            SweepRow row;
            row.experiment = "tree_tstar";
            row.family = "subdivided_tree";
            row.parameter = k;
            row.metric = "tstar";
            row.dispersion = 0.0;
            row.seed_count = 1;
            row.ref_a = 10.0 * std::sqrt(static_cast<double>(k));
            try {
                WeightedGraph tree = subdivided_tree(config.arity, k);
                row.n_vertices = tree.size();
                row.n_parties = static_cast<int>(tree.parties().size());
                auto [a, b] = distant_party_pair(tree);
                row.value = find_tstar(tree, a, b, s, config.threshold,
                                       config.steps_per_unit, config.cap);
            } catch (const Error& e) {
                row.value = kNaN;
                notes[i] = "tree_tstar depth " + std::to_string(k) + " straddle " +
                           csv_num(s) + ": " + e.what();
            }
            row.wall_time = elapsed_seconds(t0);
            // Straddle rides in the metric name so rows stay one-line.
            row.metric = "tstar_s=" + csv_num(s);
            rows[i] = std::move(row);
        },
        config.jobs);

    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!notes[i].empty()) {
            result.log.push_back(notes[i]);
            result.partial_failure = true;
        }
        result.rows.push_back(std::move(rows[i]));
    }
    return result;
}

std::string csv_num(double x) {
    char buf[32];
    if (x == std::floor(x) && std::abs(x) < 1e15) { // integral: plain digits
        std::snprintf(buf, sizeof buf, "%.0f", x);
        return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", x);
    if (std::strtod(buf, nullptr) == x) {
        for (int prec = 1; prec < 17; ++prec) {
            char shorter[32];
            std::snprintf(shorter, sizeof shorter, "%.*g", prec, x);
            if (std::strtod(shorter, nullptr) == x) return shorter;
        }
    }
    return buf;
}

void write_gap_csv(const GapScanResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write CSV file: " + path);
    out << "# ctap-csv v1\n";
    out << "family,param,n_vertices,seed_count,gap_mean,gap_std,interlacing_bound,det_bound\n";
    for (const GapScanRow& r : result.rows)
        out << r.family << ',' << csv_num(r.param) << ',' << r.n_vertices << ','
            << r.seed_count << ',' << csv_num(r.gap_mean) << ',' << csv_num(r.gap_std)
            << ',' << csv_num(r.interlacing_bound) << ',' << csv_num(r.det_bound)
            << "\n";
}

void write_sweep_csv(const SweepResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write CSV file: " + path);
    const bool tstar =
        !result.rows.empty() && result.rows.front().experiment == "tree_tstar";
    out << "# ctap-csv v1\n";
    out << "experiment,family,parameter,n_vertices,n_parties,metric,value,dispersion,"
           "seed_count,wall_time,"
        << (tstar ? "ref_ten_sqrt_k" : "ref_one_over_n,ref_ten_over_sqrt_n") << "\n";
    for (const SweepRow& r : result.rows) {
        out << r.experiment << ',' << r.family << ',' << csv_num(r.parameter) << ','
            << r.n_vertices << ',' << r.n_parties << ',' << r.metric << ','
            << csv_num(r.value) << ',' << csv_num(r.dispersion) << ',' << r.seed_count
            << ',' << csv_num(r.wall_time) << ',' << csv_num(r.ref_a);
        if (!tstar) out << ',' << csv_num(r.ref_b);
        out << "\n";
    }
}

} // namespace ctap

// ctap — command-line surface for the adiabatic-transfer library.
//
// Subcommands: generate, check, gap-scan, simulate, tstar, sweep.
// Exit codes: 0 success, 1 validation error, 2 partial sweep failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "ctap/dynamics.hpp"
#include "ctap/errors.hpp"
#include "ctap/experiments.hpp"
#include "ctap/generators.hpp"
#include "ctap/graph.hpp"
#include "ctap/spectral.hpp"
#include "ctap/viability.hpp"

namespace {

using ctap::csv_num;

// "a..b[:step]" (inclusive) or a comma-separated list.
std::vector<double> parse_values(const std::string& text) {
    auto num = [&](const std::string& s) -> double {
        try {
            std::size_t used = 0;
            double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ctap::InvalidParameter("not a number in '" + text + "': '" + s + "'");
        }
    };
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
        std::string hi = text.substr(dots + 2);
        double step = 1.0;
        if (const auto colon = hi.find(':'); colon != std::string::npos) {
            step = num(hi.substr(colon + 1));
            hi = hi.substr(0, colon);
        }
        const double a = num(text.substr(0, dots)), b = num(hi);
        if (step <= 0.0)
            throw ctap::InvalidParameter("range step must be positive: " + text);
        std::vector<double> out;
        for (double v = a; v <= b + 1e-9 * step; v += step) out.push_back(v);
        if (out.empty()) throw ctap::InvalidParameter("empty range: " + text);
        return out;
    }
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(num(item));
    if (out.empty()) throw ctap::InvalidParameter("no values in '" + text + "'");
    return out;
}

std::vector<int> parse_ints(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_values(text)) {
        int i = static_cast<int>(std::lround(v));
        if (static_cast<double>(i) != v)
            throw ctap::InvalidParameter("expected integers in '" + text + "'");
        out.push_back(i);
    }
    return out;
}

// "k=3,m=2,p=0.81"
std::map<std::string, double> parse_params(const std::string& text) {
    std::map<std::string, double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ctap::InvalidParameter("expected key=value in --params, got '" + item +
                                         "'");
        const std::vector<double> v = parse_values(item.substr(eq + 1));
        if (v.size() != 1)
            throw ctap::InvalidParameter("parameter '" + item.substr(0, eq) +
                                         "' must be a single number");
        out[item.substr(0, eq)] = v.front();
    }
    return out;
}

std::string cnum(ctap::Complex z) {
    if (z.imag() == 0.0) return csv_num(z.real());
    std::string s = csv_num(z.real());
    s += (z.imag() < 0.0 ? "-" : "+");
    s += csv_num(std::abs(z.imag()));
    s += "i";
    return s;
}

const char* yn(bool b) { return b ? "yes" : "no"; }
const char* tf(bool b) { return b ? "true" : "false"; }

void print_log(const std::vector<std::string>& log) {
    for (const std::string& line : log) std::cerr << "note: " << line << "\n";
}

// ------- generate -------

struct GenerateOpts {
    std::string family;
    std::string params;
    std::uint64_t seed = 0;
    std::string out;
};

int run_generate(const GenerateOpts& o) {
    ctap::FamilySpec spec;
    spec.family = o.family;
    spec.params = parse_params(o.params);
    spec.seed = o.seed;
    const ctap::WeightedGraph g = ctap::from_family(spec);
    if (o.out.empty() || o.out == "-") {
        std::cout << ctap::serialize(g);
    } else {
        ctap::save_graph_file(g, o.out);
        std::cout << "wrote " << o.out << " (" << g.size() << " vertices, "
                  << g.edges().size() << " edges, " << g.parties().size()
                  << " parties)\n";
    }
    return 0;
}

// ------- check -------

struct CheckOpts {
    std::string graph;
    bool randomize = false;
    std::uint64_t seed = 0;
};

int run_check(const CheckOpts& o) {
    ctap::WeightedGraph g = ctap::load_graph_file(o.graph);
    if (o.randomize) g = ctap::randomize_weights(g, o.seed);
    const ctap::ViabilityReport rep = ctap::check_viability(g);

    auto row = [](const std::string& key, const std::string& value) {
        std::cout << "  " << std::left << std::setw(24) << key << value << "\n";
    };
    std::cout << "viability report: " << o.graph << (o.randomize ? " (randomized)" : "")
              << "\n";
    row("vertices", std::to_string(g.size()) + "  (|V1| = " + std::to_string(g.n1()) +
                        ", |V2| = " + std::to_string(g.n2()) + ")");
    row("edges", std::to_string(g.edges().size()));
    row("balanced", yn(rep.balanced));
    row("connected", yn(rep.connected));
    row("zero-space dimension", std::to_string(rep.zero_space_dim));
    row("kernel on all parties", yn(rep.zero_support_ok));
    for (const ctap::PartyCheck& pc : rep.per_party)
        row("party " + std::to_string(pc.party),
            "det(A/p) = " + cnum(pc.det_value) + "  (nonzero " + yn(pc.det_nonzero) +
                ", matching " + yn(pc.matching_exists) + ")");
    row("viable", yn(rep.viable));
    std::cout << "\n";

    std::cout << "graph=" << o.graph << "\n";
    std::cout << "n1=" << g.n1() << "\n";
    std::cout << "n2=" << g.n2() << "\n";
    std::cout << "balanced=" << tf(rep.balanced) << "\n";
    std::cout << "connected=" << tf(rep.connected) << "\n";
    std::cout << "zero_space_dim=" << rep.zero_space_dim << "\n";
    std::cout << "zero_support_ok=" << tf(rep.zero_support_ok) << "\n";
    for (const ctap::PartyCheck& pc : rep.per_party) {
        const std::string p = "party_" + std::to_string(pc.party);
        std::cout << p << "_det=" << cnum(pc.det_value) << "\n";
        std::cout << p << "_det_nonzero=" << tf(pc.det_nonzero) << "\n";
        std::cout << p << "_matching=" << tf(pc.matching_exists) << "\n";
    }
    std::cout << "viable=" << tf(rep.viable) << "\n";
    return 0;
}

// ------- gap-scan -------

struct GapScanOpts {
    ctap::GapScanConfig config;
    std::string sizes;
    std::string out;
};

int run_gap_scan_cmd(GapScanOpts& o) {
    o.config.params = parse_values(o.sizes);
    const ctap::GapScanResult result = ctap::run_gap_scan(o.config);
    ctap::write_gap_csv(result, o.out);
    print_log(result.log);
    std::cout << "wrote " << o.out << " (" << result.rows.size() << " rows)\n";
    return result.partial_failure ? 2 : 0;
}

// ------- simulate -------

struct SimulateOpts {
    std::string graph;
    int from = -1;
    int to = -1;
    double time = 10.0;
    double straddle = 1.0;
    int steps = 0; // 0 → 20 per unit time
    std::string schedule = "default";
    std::string trace;
};

int run_simulate(const SimulateOpts& o) {
    const ctap::WeightedGraph g = ctap::load_graph_file(o.graph);
    ctap::ControlSchedule sched =
        o.schedule == "sequential"
            ? ctap::sequential_schedule(g, o.from, o.to, o.time)
            : ctap::default_schedule(g, o.from, o.to, o.time, o.straddle);
    if (o.schedule == "sequential" && o.straddle != 1.0) {
        sched.straddle = o.straddle;
        sched.validate(g.parties());
    }
    const int steps =
        o.steps > 0 ? o.steps : std::max(1, static_cast<int>(std::ceil(20.0 * o.time)));

    const Eigen::MatrixXcd a = ctap::adjacency(g);
    std::vector<ctap::TracePoint> trace;
    const ctap::TransferResult r =
        ctap::evolve(sched, a, steps, o.trace.empty() ? nullptr : &trace);

    if (!o.trace.empty()) {
        std::ofstream out(o.trace);
        if (!out) throw ctap::Error("cannot write trace file: " + o.trace);
        out << "# ctap-csv v1\n";
        out << "t";
        for (int v = 0; v < g.size(); ++v) out << ",pop_" << v;
        out << ",gap";
        for (int v = 0; v < g.n1(); ++v) out << ",f_" << v;
        out << "\n";
        for (const ctap::TracePoint& pt : trace) {
            out << csv_num(pt.t);
            for (int v = 0; v < g.size(); ++v) out << ',' << csv_num(std::norm(pt.psi(v)));
            const Eigen::MatrixXcd h = ctap::hamiltonian_at(sched, a, pt.t);
            out << ',' << csv_num(ctap::gap_around_zero(h, ctap::kZeroEigTol, false));
            for (int v = 0; v < g.n1(); ++v) out << ',' << csv_num(sched.eval(v, pt.t));
            out << "\n";
        }
    }

    std::cout << "graph=" << o.graph << "\n";
    std::cout << "from=" << o.from << "\n";
    std::cout << "to=" << o.to << "\n";
    std::cout << "schedule=" << o.schedule << "\n";
    std::cout << "time=" << csv_num(o.time) << "\n";
    std::cout << "straddle=" << csv_num(o.straddle) << "\n";
    std::cout << "steps=" << steps << "\n";
    std::cout << "error=" << csv_num(r.error) << "\n";
    std::cout << "acquired_phase=" << csv_num(r.acquired_phase) << "\n";
    std::cout << "predicted_phase=" << csv_num(r.predicted_phase) << "\n";
    std::cout << "v2_population_max=" << csv_num(r.v2_population_max) << "\n";
    std::cout << "unitarity_defect=" << csv_num(r.unitarity_defect) << "\n";
    std::cout << "zero_energy_defect=" << csv_num(r.zero_energy_defect) << "\n";
    std::cout << "kernel_unique=" << tf(r.kernel_unique) << "\n";
    if (!o.trace.empty()) std::cout << "trace=" << o.trace << "\n";
    return 0;
}

// ------- tstar -------

struct TstarOpts {
    std::string graph;
    int from = -1;
    int to = -1;
    double straddle = 1.0;
    double threshold = 0.05;
    int steps_per_unit = 20;
    double cap = 1e5;
};

int run_tstar(const TstarOpts& o) {
    const ctap::WeightedGraph g = ctap::load_graph_file(o.graph);
    const double tstar = ctap::find_tstar(g, o.from, o.to, o.straddle, o.threshold,
                                          o.steps_per_unit, o.cap);
    std::cout << "graph=" << o.graph << "\n";
    std::cout << "from=" << o.from << "\n";
    std::cout << "to=" << o.to << "\n";
    std::cout << "straddle=" << csv_num(o.straddle) << "\n";
    std::cout << "threshold=" << csv_num(o.threshold) << "\n";
    std::cout << "tstar=" << csv_num(tstar) << "\n";
    return 0;
}

// ------- sweep -------

struct SweepOpts {
    std::string experiment;
    std::string out;
    int jobs = 0;
    // tree_tstar
    std::string depths = "1..4";
    std::string straddle = "1,10";
    ctap::TreeTstarConfig tree;
    // gap_scaling
    ctap::GapScanConfig gap;
    std::string sizes;
};

int run_sweep(SweepOpts& o) {
    o.tree.jobs = o.gap.jobs = o.jobs;
    ctap::SweepResult result;
    if (o.experiment == "tree_tstar") {
        o.tree.depths = parse_ints(o.depths);
        o.tree.straddles = parse_values(o.straddle);
        result = ctap::run_tree_tstar(o.tree);
    } else if (o.experiment == "gap_scaling") {
        if (o.gap.family.empty())
            throw ctap::InvalidParameter("sweep gap_scaling needs --family");
        if (o.sizes.empty())
            throw ctap::InvalidParameter("sweep gap_scaling needs --sizes");
        o.gap.params = parse_values(o.sizes);
        result = ctap::run_gap_scaling(o.gap);
    } else {
        throw ctap::InvalidParameter("unknown experiment '" + o.experiment +
                                     "' (expected gap_scaling or tree_tstar)");
    }
    ctap::write_sweep_csv(result, o.out);
    print_log(result.log);
    std::cout << "wrote " << o.out << " (" << result.rows.size() << " rows)\n";
    return result.partial_failure ? 2 : 0;
}

// Flat key=value config support: keys name long options of the invoked
// subcommand, and explicit command-line flags win over file values.  CLI11's
// own config reader wants INI sections for subcommand options, which
// contradicts the flat format this interface promises, so the file is
// expanded into injected --key=value tokens before parsing.
void expand_config(const CLI::App& app, std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i < args.size();) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size())
                throw ctap::Error("config: --config needs a file path");
            path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(std::string("--config=").size());
            args.erase(args.begin() + i);
        } else {
            ++i;
        }
    }
    if (path.empty()) return;

    std::size_t sub_at = args.size();
    for (std::size_t i = 0; i < args.size(); ++i)
        if (!args[i].empty() && args[i][0] != '-') {
            sub_at = i;
            break;
        }
    if (sub_at == args.size()) return; // missing subcommand: the parser reports it
    const CLI::App* sub = nullptr;
    try {
        sub = app.get_subcommand(args[sub_at]);
    } catch (const CLI::Error&) {
        return; // unknown subcommand: the parser reports it
    }

    std::ifstream in(path);
    if (!in) throw ctap::Error("config: cannot open file: " + path);
    auto strip = [](const std::string& s) {
        const char* ws = " \t\r";
        const auto b = s.find_first_not_of(ws);
        if (b == std::string::npos) return std::string();
        return s.substr(b, s.find_last_not_of(ws) - b + 1);
    };
    std::vector<std::string> inject;
    std::map<std::string, int> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = strip(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ctap::Error("config: line " + std::to_string(lineno) +
                              ": expected key=value");
        std::string key = strip(t.substr(0, eq));
        const std::string value = strip(t.substr(eq + 1));
        while (!key.empty() && key[0] == '-') key.erase(key.begin());
        if (key.empty())
            throw ctap::Error("config: line " + std::to_string(lineno) + ": empty key");
        if (seen[key]++)
            throw ctap::Error("config: line " + std::to_string(lineno) +
                              ": duplicate key '" + key + "'");
        const std::string flag = "--" + key;
        if (sub->get_option_no_throw(flag) == nullptr)
            throw ctap::Error("config: unknown key '" + key + "' for subcommand '" +
                              sub->get_name() + "'");
        bool overridden = false;
        for (std::size_t i = sub_at + 1; i < args.size(); ++i)
            if (args[i] == flag || args[i].rfind(flag + "=", 0) == 0) overridden = true;
        if (!overridden) inject.push_back(flag + "=" + value);
    }
    args.insert(args.begin() + sub_at + 1, inject.begin(), inject.end());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "ctap — viability checks and adiabatic-transfer simulation on weighted "
        "semi-bipartite graphs"};
    app.require_subcommand(1);
    app.add_option("--config",
                   "key=value configuration file (keys: the subcommand's long "
                   "options; command-line flags win)");
    app.failure_message(CLI::FailureMessage::help);

    int rc = 0;

    GenerateOpts gen;
    CLI::App* c_gen = app.add_subcommand("generate", "Emit a graph from a family");
    c_gen->add_option("--family", gen.family,
                      "path | star | subdivided_tree | hex_grid | square_grid | "
                      "random_bipartite")
        ->required();
    c_gen->add_option("--params", gen.params, "comma list, e.g. n=9 or k=3,m=2");
    c_gen->add_option("--seed", gen.seed, "seed for random families");
    c_gen->add_option("--out", gen.out, "output path (default: stdout)");
    c_gen->callback([&] { rc = run_generate(gen); });

    CheckOpts chk;
    CLI::App* c_chk = app.add_subcommand("check", "Decide transfer viability");
    c_chk->add_option("--graph", chk.graph, "graph file")->required();
    c_chk->add_flag("--randomize", chk.randomize,
                    "multiply weights by uniform (0,2] draws first");
    c_chk->add_option("--seed", chk.seed, "randomization seed");
    c_chk->callback([&] { rc = run_check(chk); });

    GapScanOpts gs;
    CLI::App* c_gs = app.add_subcommand("gap-scan", "Gap statistics across a size sweep");
    c_gs->add_option("--family", gs.config.family, "generator family")->required();
    c_gs->add_option("--sizes", gs.sizes, "a..b[:step] or comma list")->required();
    c_gs->add_option("--trials", gs.config.trials, "trials per point (random families)")
        ->check(CLI::PositiveNumber);
    c_gs->add_flag("--randomize", gs.config.randomize, "randomize weights per trial");
    c_gs->add_option("--p", gs.config.p, "random_bipartite edge probability")
        ->check(CLI::Range(0.0, 1.0));
    c_gs->add_option("--arms", gs.config.arms, "star arm count")
        ->check(CLI::PositiveNumber);
    c_gs->add_option("--arity", gs.config.arity, "subdivided tree arity")
        ->check(CLI::PositiveNumber);
    c_gs->add_option("--seed", gs.config.seed, "base seed");
    c_gs->add_option("--jobs", gs.config.jobs, "worker count (0 = auto, env CTAP_JOBS)");
    c_gs->add_option("--out", gs.out, "CSV output path")->required();
    c_gs->callback([&] { rc = run_gap_scan_cmd(gs); });

    SimulateOpts sim;
    CLI::App* c_sim = app.add_subcommand("simulate", "Integrate one transfer protocol");
    c_sim->add_option("--graph", sim.graph, "graph file")->required();
    c_sim->add_option("--from", sim.from, "sender vertex (party)")->required();
    c_sim->add_option("--to", sim.to, "receiver vertex (party)")->required();
    c_sim->add_option("--time", sim.time, "protocol time T")->check(CLI::PositiveNumber);
    c_sim->add_option("--straddle", sim.straddle, "constant-control multiplier s")
        ->check(CLI::PositiveNumber);
    c_sim->add_option("--steps", sim.steps, "integration steps (default 20·T)")
        ->check(CLI::NonNegativeNumber);
    c_sim->add_option("--schedule", sim.schedule, "default | sequential")
        ->check(CLI::IsMember({"default", "sequential"}));
    c_sim->add_option("--trace", sim.trace, "per-step CSV (t, populations, gap, controls)");
    c_sim->callback([&] { rc = run_simulate(sim); });

    TstarOpts ts;
    CLI::App* c_ts = app.add_subcommand("tstar", "Minimal time reaching the threshold");
    c_ts->add_option("--graph", ts.graph, "graph file")->required();
    c_ts->add_option("--from", ts.from, "sender vertex (party)")->required();
    c_ts->add_option("--to", ts.to, "receiver vertex (party)")->required();
    c_ts->add_option("--straddle", ts.straddle, "constant-control multiplier s")
        ->check(CLI::PositiveNumber);
    c_ts->add_option("--threshold", ts.threshold, "target transfer error")
        ->check(CLI::Range(std::nextafter(0.0, 1.0), 1.0));
    c_ts->add_option("--steps-per-unit", ts.steps_per_unit, "integration density")
        ->check(CLI::PositiveNumber);
    c_ts->add_option("--cap", ts.cap, "largest protocol time probed")
        ->check(CLI::PositiveNumber);
    c_ts->callback([&] { rc = run_tstar(ts); });

    SweepOpts sw;
    CLI::App* c_sw = app.add_subcommand("sweep", "Batch experiment, CSV output");
    c_sw->add_option("--experiment", sw.experiment, "gap_scaling | tree_tstar")
        ->required();
    c_sw->add_option("--out", sw.out, "CSV output path")->required();
    c_sw->add_option("--depths", sw.depths, "tree depths, a..b or comma list");
    c_sw->add_option("--straddle", sw.straddle, "straddle values, comma list");
    c_sw->add_option("--arity", sw.tree.arity, "tree arity")->check(CLI::PositiveNumber);
    c_sw->add_option("--threshold", sw.tree.threshold, "tstar error threshold")
        ->check(CLI::Range(std::nextafter(0.0, 1.0), 1.0));
    c_sw->add_option("--steps-per-unit", sw.tree.steps_per_unit, "integration density")
        ->check(CLI::PositiveNumber);
    c_sw->add_option("--cap", sw.tree.cap, "largest protocol time probed")
        ->check(CLI::PositiveNumber);
    c_sw->add_option("--family", sw.gap.family, "gap_scaling family");
    c_sw->add_option("--sizes", sw.sizes, "gap_scaling sizes, a..b[:step] or list");
    c_sw->add_option("--trials", sw.gap.trials, "gap_scaling trials per point")
        ->check(CLI::PositiveNumber);
    c_sw->add_flag("--randomize", sw.gap.randomize, "randomize weights per trial");
    c_sw->add_option("--p", sw.gap.p, "random_bipartite edge probability")
        ->check(CLI::Range(0.0, 1.0));
    c_sw->add_option("--arms", sw.gap.arms, "star arm count")
        ->check(CLI::PositiveNumber);
    c_sw->add_option("--seed", sw.gap.seed, "base seed");
    c_sw->add_option("--jobs", sw.jobs, "worker count (0 = auto, env CTAP_JOBS)");
    c_sw->callback([&] { rc = run_sweep(sw); });

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        expand_config(app, args);
        std::reverse(args.begin(), args.end()); // CLI11 wants a reversed vector
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // normalize CLI11's error codes to "validation"
    } catch (const ctap::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}

#include "ctap/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ctap/errors.hpp"

namespace ctap {

namespace {

std::string vertex_str(int v) { return std::to_string(v); }

// Shortest float representation that round-trips exactly.
std::string num_str(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    double back = std::strtod(buf, nullptr);
    if (back == x) {
        for (int prec = 1; prec < 17; ++prec) {
            char shorter[32];
            std::snprintf(shorter, sizeof shorter, "%.*g", prec, x);
            if (std::strtod(shorter, nullptr) == x) return shorter;
        }
    }
    return buf;
}

} // namespace

WeightedGraph WeightedGraph::build(int n1, int n2, std::vector<Edge> edges,
                                   std::vector<int> parties,
                                   std::vector<std::string> labels) {
    if (n1 < 0 || n2 < 0)
        throw InvalidParameter("build_graph: part sizes must be nonnegative");
    const int n = n1 + n2;
    if (!labels.empty() && static_cast<int>(labels.size()) != n)
        throw InvalidParameter("build_graph: labels must cover every vertex");

    for (Edge& e : edges) {
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
            throw NoSuchVertex("build_graph: edge (" + vertex_str(e.u) + "," +
                               vertex_str(e.v) + ") references a missing vertex");
        if (e.u > e.v) {
            std::swap(e.u, e.v);
            e.w = std::conj(e.w);
        }
        if (e.v < n1)
            throw SemiBipartiteViolation("build_graph: edge (" + vertex_str(e.u) +
                                         "," + vertex_str(e.v) +
                                         ") joins two V1 vertices");
        if (e.u == e.v) {
            if (e.u < n1)
                throw SemiBipartiteViolation("build_graph: self-loop on V1 vertex " +
                                             vertex_str(e.u));
            if (e.w.imag() != 0.0)
                throw InvalidParameter("build_graph: self-loop weight on vertex " +
                                       vertex_str(e.u) +
                                       " must be real (hermitian diagonal)");
        }
        if (e.w == Complex(0.0, 0.0))
            throw InvalidParameter("build_graph: zero weight on edge (" +
                                   vertex_str(e.u) + "," + vertex_str(e.v) + ")");
    }

    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
            throw DuplicateEdge("build_graph: duplicate edge (" +
                                vertex_str(edges[i].u) + "," +
                                vertex_str(edges[i].v) + ")");

    std::sort(parties.begin(), parties.end());
    for (std::size_t i = 0; i < parties.size(); ++i) {
        if (parties[i] < 0 || parties[i] >= n1)
            throw PartyPlacement("build_graph: party " + vertex_str(parties[i]) +
                                 " is not a V1 vertex");
        if (i > 0 && parties[i] == parties[i - 1])
            throw PartyPlacement("build_graph: repeated party " +
                                 vertex_str(parties[i]));
    }

    WeightedGraph g;
    g.n1_ = n1;
    g.n2_ = n2;
    g.edges_ = std::move(edges);
    g.parties_ = std::move(parties);
    g.labels_ = std::move(labels);
    return g;
}

bool WeightedGraph::is_real() const {
    for (const Edge& e : edges_)
        if (e.w.imag() != 0.0) return false;
    return true;
}

std::vector<std::vector<int>> WeightedGraph::adjacency_list() const {
    std::vector<std::vector<int>> adj(size());
    for (const Edge& e : edges_) {
        adj[e.u].push_back(e.v);
        if (e.u != e.v) adj[e.v].push_back(e.u);
    }
    return adj;
}

std::vector<int> WeightedGraph::degrees() const {
    std::vector<int> deg(size(), 0);
    for (const Edge& e : edges_) {
        deg[e.u] += 1;
        deg[e.v] += 1; // a self-loop lands here twice in total
    }
    return deg;
}

bool WeightedGraph::operator==(const WeightedGraph& o) const {
    if (n1_ != o.n1_ || n2_ != o.n2_ || parties_ != o.parties_ ||
        edges_.size() != o.edges_.size())
        return false;
    for (std::size_t i = 0; i < edges_.size(); ++i)
        if (edges_[i].u != o.edges_[i].u || edges_[i].v != o.edges_[i].v ||
            edges_[i].w != o.edges_[i].w)
            return false;
    return true;
}

Eigen::MatrixXcd adjacency(const WeightedGraph& g) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(g.size(), g.size());
    for (const Edge& e : g.edges()) {
        a(e.u, e.v) = e.w;
        a(e.v, e.u) = std::conj(e.w);
        if (e.u == e.v) a(e.u, e.u) = e.w.real();
    }
    return a;
}

double max_abs_weight(const WeightedGraph& g) {
    double m = 0.0;
    for (const Edge& e : g.edges()) m = std::max(m, std::abs(e.w));
    return m;
}

DeletionResult delete_vertex(const WeightedGraph& g, int p) {
    if (!g.has_vertex(p))
        throw NoSuchVertex("delete_vertex: no vertex " + vertex_str(p));

    std::vector<int> old_to_new(g.size(), -1);
    int next = 0;
    for (int v = 0; v < g.size(); ++v)
        if (v != p) old_to_new[v] = next++;

    std::vector<Edge> edges;
    for (const Edge& e : g.edges())
        if (e.u != p && e.v != p)
            edges.push_back({old_to_new[e.u], old_to_new[e.v], e.w});

    std::vector<int> parties;
    for (int q : g.parties())
        if (q != p) parties.push_back(old_to_new[q]);

    std::vector<std::string> labels;
    if (!g.labels().empty()) {
        for (int v = 0; v < g.size(); ++v)
            if (v != p) labels.push_back(g.labels()[v]);
    }

    const int n1 = g.n1() - (g.in_v1(p) ? 1 : 0);
    const int n2 = g.n2() - (g.in_v1(p) ? 0 : 1);
    return {WeightedGraph::build(n1, n2, std::move(edges), std::move(parties),
                                 std::move(labels)),
            std::move(old_to_new)};
}

bool is_connected(const WeightedGraph& g) {
    const int n = g.size();
    if (n == 0) return false;
    auto adj = g.adjacency_list();
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u : adj[v])
            if (!seen[u]) {
                seen[u] = 1;
                ++count;
                stack.push_back(u);
            }
    }
    return count == n;
}

// ------- text format -------

void serialize(const WeightedGraph& g, std::ostream& out) {
    out << "graph v1=" << g.n1() << " v2=" << g.n2() << "\n";
    if (!g.parties().empty()) {
        out << "party";
        for (int p : g.parties()) out << ' ' << p;
        out << "\n";
    }
    for (const Edge& e : g.edges()) {
        out << "edge " << e.u << ' ' << e.v << ' ' << num_str(e.w.real());
        if (e.w.imag() != 0.0) out << ' ' << num_str(e.w.imag());
        out << "\n";
    }
}

std::string serialize(const WeightedGraph& g) {
    std::ostringstream out;
    serialize(g, out);
    return out.str();
}

WeightedGraph parse_graph(std::istream& in) {
    std::string line;
    int lineno = 0;
    bool have_header = false;
    int n1 = 0, n2 = 0;
    std::vector<Edge> edges;
    std::vector<int> parties;

    auto fail = [&](const std::string& msg) -> void {
        throw ParseError("graph format, line " + std::to_string(lineno) + ": " + msg);
    };

    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue; // blank line
        if (tok[0] == '#') continue;

        if (tok == "graph") {
            if (have_header) fail("repeated graph header");
            std::string kv;
            bool saw1 = false, saw2 = false;
            while (ls >> kv) {
                auto eq = kv.find('=');
                if (eq == std::string::npos) fail("expected key=value, got '" + kv + "'");
                const std::string key = kv.substr(0, eq);
                int value = 0;
                try {
                    value = std::stoi(kv.substr(eq + 1));
                } catch (const std::exception&) {
                    fail("bad integer in '" + kv + "'");
                }
                if (key == "v1") {
                    n1 = value;
                    saw1 = true;
                } else if (key == "v2") {
                    n2 = value;
                    saw2 = true;
                } else {
                    fail("unknown header key '" + key + "'");
                }
            }
            if (!saw1 || !saw2) fail("graph header needs v1= and v2=");
            have_header = true;
        } else if (tok == "party") {
            if (!have_header) fail("party line before graph header");
            int id;
            while (ls >> id) parties.push_back(id);
            if (!ls.eof()) fail("bad party id");
        } else if (tok == "edge") {
            if (!have_header) fail("edge line before graph header");
            int u, v;
            double re, im = 0.0;
            if (!(ls >> u >> v >> re)) fail("edge needs: u v re [im]");
            ls >> im; // optional
            std::string extra;
            if (ls >> extra) fail("trailing tokens after edge");
            edges.push_back({u, v, Complex(re, im)});
        } else {
            fail("unknown directive '" + tok + "'");
        }
    }
    if (!have_header) throw ParseError("graph format: missing 'graph v1=.. v2=..' header");
    return WeightedGraph::build(n1, n2, std::move(edges), std::move(parties));
}

WeightedGraph parse_graph(const std::string& text) {
    std::istringstream in(text);
    return parse_graph(in);
}

WeightedGraph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open graph file: " + path);
    return parse_graph(in);
}

void save_graph_file(const WeightedGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write graph file: " + path);
    serialize(g, out);
}

} // namespace ctap

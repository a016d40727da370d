#include "ctap/generators.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "ctap/errors.hpp"
#include "ctap/rng.hpp"

namespace ctap {

namespace {

// Breadth-first distances from `src` (-1 = unreachable).
std::vector<int> bfs_distances(const std::vector<std::vector<int>>& adj, int src) {
    std::vector<int> dist(adj.size(), -1);
    std::queue<int> q;
    dist[src] = 0;
    q.push(src);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int u : adj[v])
            if (dist[u] < 0) {
                dist[u] = dist[v] + 1;
                q.push(u);
            }
    }
    return dist;
}

// Split positions 0..n-1 of a template graph into (V1, V2) by a given
// part flag, and return the position → final-id map (V1 numbered first).
std::vector<int> pack_ids(const std::vector<bool>& in_v1, int& n1, int& n2) {
    const int n = static_cast<int>(in_v1.size());
    std::vector<int> id(n);
    n1 = 0;
    for (int v = 0; v < n; ++v)
        if (in_v1[v]) id[v] = n1++;
    int next = n1;
    for (int v = 0; v < n; ++v)
        if (!in_v1[v]) id[v] = next++;
    n2 = n - n1;
    return id;
}

} // namespace

WeightedGraph path(int n) {
    if (n < 1 || n % 2 == 0)
        throw InvalidParameter("path: n must be odd and positive (got " +
                               std::to_string(n) + "); even paths are not balanced");
    std::vector<bool> in_v1(n);
    for (int pos = 0; pos < n; ++pos) in_v1[pos] = pos % 2 == 0;
    int n1, n2;
    auto id = pack_ids(in_v1, n1, n2);
    std::vector<Edge> edges;
    for (int pos = 0; pos + 1 < n; ++pos) edges.push_back({id[pos], id[pos + 1], 1.0});
    return WeightedGraph::build(n1, n2, std::move(edges), {id[0], id[n - 1]});
}

WeightedGraph star(int arms, int arm_length) {
    if (arms < 1 || arm_length < 1)
        throw InvalidParameter("star: arms and arm_length must be positive");
    const int n = 1 + arms * arm_length;
    // Position 0 = center; arm a occupies positions 1+a*arm_length .. (a+1)*arm_length,
    // ordered outward.  Distance parity from the center two-colors the tree.
    auto dist_of = [&](int pos) { return pos == 0 ? 0 : (pos - 1) % arm_length + 1; };
    std::vector<bool> even_class(n);
    int even_count = 0;
    for (int pos = 0; pos < n; ++pos) {
        even_class[pos] = dist_of(pos) % 2 == 0;
        even_count += even_class[pos];
    }
    const int odd_count = n - even_count;
    std::vector<bool> in_v1(n);
    if (even_count == odd_count + 1) {
        in_v1 = even_class;
    } else if (odd_count == even_count + 1) {
        for (int pos = 0; pos < n; ++pos) in_v1[pos] = !even_class[pos];
    } else {
        throw InvalidParameter(
            "star: no distance-parity class satisfies |V1| = |V2|+1 for arms=" +
            std::to_string(arms) + ", arm_length=" + std::to_string(arm_length) +
            " (arms*arm_length must be even, and odd arm lengths need arms=2)");
    }
    int n1, n2;
    auto id = pack_ids(in_v1, n1, n2);
    std::vector<Edge> edges;
    std::vector<int> parties;
    for (int a = 0; a < arms; ++a) {
        int prev = 0;
        for (int step = 1; step <= arm_length; ++step) {
            const int pos = 1 + a * arm_length + (step - 1);
            edges.push_back({id[prev], id[pos], 1.0});
            prev = pos;
        }
        if (in_v1[prev]) parties.push_back(id[prev]); // arm endpoint
    }
    return WeightedGraph::build(n1, n2, std::move(edges), std::move(parties));
}

WeightedGraph subdivided_tree(int arity, int depth) {
    if (arity < 1 || depth < 0)
        throw InvalidParameter("subdivided_tree: need arity >= 1 and depth >= 0");
    // Original tree nodes in breadth-first order: node c > 0 has parent
    // (c-1)/arity.  They form V1 and keep ids 0..N-1; the V2 vertex
    // subdividing the parent edge of node c gets id N + c - 1.
    long long nodes = 1, layer = 1;
    for (int d = 0; d < depth; ++d) {
        layer *= arity;
        nodes += layer;
    }
    if (nodes > 1'000'000)
        throw InvalidParameter("subdivided_tree: tree too large");
    const int n_orig = static_cast<int>(nodes);
    const int first_leaf = n_orig - static_cast<int>(layer);
    std::vector<Edge> edges;
    for (int c = 1; c < n_orig; ++c) {
        const int parent = (c - 1) / arity;
        const int mid = n_orig + c - 1;
        edges.push_back({parent, mid, 1.0});
        edges.push_back({mid, c, 1.0});
    }
    std::vector<int> parties;
    for (int leaf = first_leaf; leaf < n_orig; ++leaf) parties.push_back(leaf);
    return WeightedGraph::build(n_orig, n_orig - 1, std::move(edges), std::move(parties));
}

WeightedGraph hex_grid(int k) {
    if (k < 1) throw InvalidParameter("hex_grid: k must be >= 1");
    const int cells = k * k;
    // A(i,j) = i*k + j in V1; B(i,j) = cells + i*k + j in V2.  The removed
    // corner site B(k-1,k-1) would be the last id, so it is simply never
    // created and no re-indexing is needed.
    const int removed_b = 2 * cells - 1;
    auto a_id = [&](int i, int j) { return i * k + j; };
    auto b_id = [&](int i, int j) { return cells + i * k + j; };
    std::vector<Edge> edges;
    auto bond = [&](int b, int a) {
        if (b != removed_b) edges.push_back({a, b, 1.0});
    };
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            bond(b_id(i, j), a_id(i, j));
            if (i + 1 < k) bond(b_id(i, j), a_id(i + 1, j));
            if (j + 1 < k) bond(b_id(i, j), a_id(i, j + 1));
        }
    auto g = WeightedGraph::build(cells, cells - 1, std::move(edges), {});
    return WeightedGraph::build(g.n1(), g.n2(), g.edges(), default_parties(g));
}

WeightedGraph square_grid(int k) {
    if (k < 1 || k % 2 == 0)
        throw InvalidParameter("square_grid: k must be odd (got " + std::to_string(k) +
                               "); even grids have equal color classes");
    const int n = k * k;
    std::vector<bool> in_v1(n);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) in_v1[r * k + c] = (r + c) % 2 == 0;
    int n1, n2;
    auto id = pack_ids(in_v1, n1, n2);
    std::vector<Edge> edges;
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) {
            if (c + 1 < k) edges.push_back({id[r * k + c], id[r * k + c + 1], 1.0});
            if (r + 1 < k) edges.push_back({id[r * k + c], id[(r + 1) * k + c], 1.0});
        }
    auto g = WeightedGraph::build(n1, n2, std::move(edges), {});
    return WeightedGraph::build(g.n1(), g.n2(), g.edges(), default_parties(g));
}

WeightedGraph random_bipartite(int m, double p, std::uint64_t seed) {
    if (m < 1) throw InvalidParameter("random_bipartite: m must be >= 1");
    if (p < 0.0 || p > 1.0)
        throw InvalidParameter("random_bipartite: p must lie in [0,1]");
    const int n1 = m + 1, n2 = m;
    std::vector<Edge> edges;
    for (int u = 0; u < n1; ++u)
        for (int j = 0; j < n2; ++j) {
            const std::uint64_t slot = static_cast<std::uint64_t>(u) * n2 + j;
            if (uniform01(seed, slot) < p) edges.push_back({u, n1 + j, 1.0});
        }
    auto g = WeightedGraph::build(n1, n2, std::move(edges), {});
    return WeightedGraph::build(g.n1(), g.n2(), g.edges(), default_parties(g));
}

std::vector<int> default_parties(const WeightedGraph& g) {
    if (g.n1() == 0) return {};
    if (g.n1() == 1) return {0};
    auto adj = g.adjacency_list();
    int best_a = -1, best_b = -1, best_d = -1;
    for (int a = 0; a < g.n1(); ++a) {
        auto dist = bfs_distances(adj, a);
        for (int b = a + 1; b < g.n1(); ++b)
            if (dist[b] > best_d) {
                best_d = dist[b];
                best_a = a;
                best_b = b;
            }
    }
    if (best_d < 0) return {};
    return {best_a, best_b};
}

WeightedGraph from_family(const FamilySpec& spec) {
    auto need = [&](const std::string& key) -> double {
        auto it = spec.params.find(key);
        if (it == spec.params.end())
            throw InvalidParameter("family '" + spec.family + "' needs parameter '" +
                                   key + "'");
        return it->second;
    };
    auto get = [&](const std::string& key, double fallback) -> double {
        auto it = spec.params.find(key);
        return it == spec.params.end() ? fallback : it->second;
    };
    auto as_int = [](double x, const std::string& key) -> int {
        int i = static_cast<int>(x);
        if (static_cast<double>(i) != x)
            throw InvalidParameter("parameter '" + key + "' must be an integer");
        return i;
    };

    if (spec.family == "path") return path(as_int(need("n"), "n"));
    if (spec.family == "star")
        return star(as_int(get("arms", 3), "arms"), as_int(need("m"), "m"));
    if (spec.family == "subdivided_tree")
        return subdivided_tree(as_int(get("arity", 2), "arity"),
                               as_int(need("depth"), "depth"));
    if (spec.family == "hex_grid") return hex_grid(as_int(need("k"), "k"));
    if (spec.family == "square_grid") return square_grid(as_int(need("k"), "k"));
    if (spec.family == "random_bipartite")
        return random_bipartite(as_int(need("m"), "m"), get("p", 0.81), spec.seed);
    throw InvalidParameter("unknown family '" + spec.family +
                           "' (expected path, star, subdivided_tree, hex_grid, "
                           "square_grid, or random_bipartite)");
}

} // namespace ctap

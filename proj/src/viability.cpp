#include "ctap/viability.hpp"

#include <algorithm>
#include <cmath>

#include "ctap/errors.hpp"
#include "ctap/rng.hpp"

namespace ctap {

namespace {

void require_hermitian(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols())
        throw NotHermitian("matrix is not square");
    if (m.size() == 0) return;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = i; j < m.cols(); ++j)
            if (std::abs(m(i, j) - std::conj(m(j, i))) > kHermTol * scale)
                throw NotHermitian("matrix entry (" + std::to_string(i) + "," +
                                   std::to_string(j) + ") breaks hermiticity");
}

// Eigenvalues classified as zero, given the already-computed spectrum.
int count_zeros(const Eigen::VectorXd& eigs, double tol) {
    const double scale = eigs.size() ? std::max(std::abs(eigs(0)), std::abs(eigs(eigs.size() - 1))) : 0.0;
    const double cut = tol * std::max(1.0, scale);
    int zeros = 0;
    for (Eigen::Index i = 0; i < eigs.size(); ++i)
        if (std::abs(eigs(i)) < cut) ++zeros;
    return zeros;
}

} // namespace

int nullity(const Eigen::MatrixXcd& m, double tol) {
    if (m.rows() == 0) return 0;
    require_hermitian(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return count_zeros(es.eigenvalues(), tol);
}

Eigen::VectorXcd zero_eigenvector(const Eigen::MatrixXcd& m, double tol) {
    require_hermitian(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    const int dim = count_zeros(es.eigenvalues(), tol);
    if (dim != 1)
        throw DegenerateKernel(dim, "zero_eigenvector: nullity is " +
                                        std::to_string(dim) + ", not 1");
    // Eigenvalues are ascending; pick the one closest to zero.
    Eigen::Index zi = 0;
    es.eigenvalues().cwiseAbs().minCoeff(&zi);
    Eigen::VectorXcd z = es.eigenvectors().col(zi);
    z.normalize();
    for (Eigen::Index i = 0; i < z.size(); ++i)
        if (std::abs(z(i)) > kSnapTol) {
            z *= std::conj(z(i)) / std::abs(z(i));
            break;
        }
    return z;
}

Eigen::VectorXcd zero_eigenvector(const WeightedGraph& g, double tol) {
    Eigen::VectorXcd z = zero_eigenvector(adjacency(g), tol);
    // For balanced semi-bipartite graphs the kernel is confined to V1;
    // V2 components are eigensolver noise, snapped to exact zero.
    bool snapped = false;
    for (int u = g.n1(); u < g.size(); ++u)
        if (std::abs(z(u)) < kSnapTol) {
            z(u) = 0.0;
            snapped = true;
        }
    if (snapped) z.normalize();
    return z;
}

double matching_scale_without(const WeightedGraph& g, int p) {
    const MatchingResult m = has_matching_without(g, p);
    if (!m.exists) return 1.0;
    const Eigen::MatrixXcd a = adjacency(g);
    double prod = 1.0;
    for (const auto& [u, v] : m.pairs) prod *= std::abs(a(u, v));
    return prod * prod;
}

bool det_is_nonzero(Complex det, double ref_scale) {
    // Any fixed floor misclassifies: when G−p has few matchings the exact
    // determinant is a squared product of sub-unit weights and can honestly
    // reach 1e-23, while the LU noise on a singular matrix sits far below
    // the matching unit.  Comparing against that unit keeps the test
    // meaningful at every weight scale.
    return std::abs(det) > kDetTol * ref_scale;
}

Complex det_without(const WeightedGraph& g, int p) {
    if (!g.in_v1(p))
        throw PartyPlacement("det_without: vertex " + std::to_string(p) +
                             " is not in V1");
    // The V1 rows of A_{G-p} are nonzero only in the V2 columns, so a
    // generalized Laplace expansion along them factors through det(B̃):
    // with |V1∖{p}| ≥ |V2|, a missing cross matching forces det = 0
    // exactly.  (With |V1∖{p}| < |V2| the V2-internal block can carry the
    // determinant, so no structural shortcut applies.)
    if (g.n1() - 1 >= g.n2() && !has_matching_without(g, p).exists)
        return 0.0; // structurally singular
    Eigen::MatrixXcd a = adjacency(delete_vertex(g, p).graph);
    if (a.rows() == 0) return 1.0; // empty product convention
    return Eigen::PartialPivLU<Eigen::MatrixXcd>(a).determinant();
}

MatchingResult has_matching_without(const WeightedGraph& g, int p) {
    if (!g.in_v1(p))
        throw PartyPlacement("has_matching_without: vertex " + std::to_string(p) +
                             " is not in V1");
    MatchingResult res;
    if (g.n1() - 1 != g.n2()) {
        res.reason = "G-p is unbalanced (|V1|-1 = " + std::to_string(g.n1() - 1) +
                     ", |V2| = " + std::to_string(g.n2()) + ")";
        return res;
    }
    // Augmenting-path matching on the V1∖{p} × V2 cross edges (V2-internal
    // edges cannot appear in a perfect matching here, since V1 is an
    // independent set of majority size).
    std::vector<std::vector<int>> nbr(g.n1()); // V1 vertex -> V2 indices 0..n2-1
    for (const Edge& e : g.edges())
        if (e.u < g.n1() && e.v >= g.n1()) nbr[e.u].push_back(e.v - g.n1());
    std::vector<int> match_v2(g.n2(), -1); // V2 index -> V1 vertex
    std::vector<char> visited(g.n2(), 0);
    auto augment = [&](auto&& self, int u) -> bool {
        for (int j : nbr[u]) {
            if (visited[j]) continue;
            visited[j] = 1;
            if (match_v2[j] < 0 || self(self, match_v2[j])) {
                match_v2[j] = u;
                return true;
            }
        }
        return false;
    };
    int matched = 0;
    for (int u = 0; u < g.n1(); ++u) {
        if (u == p) continue;
        std::fill(visited.begin(), visited.end(), 0);
        if (augment(augment, u)) ++matched;
    }
    if (matched != g.n2()) {
        res.reason = "only " + std::to_string(matched) + " of " +
                     std::to_string(g.n2()) + " V2 vertices are matchable";
        return res;
    }
    res.exists = true;
    for (int j = 0; j < g.n2(); ++j) res.pairs.emplace_back(match_v2[j], g.n1() + j);
    std::sort(res.pairs.begin(), res.pairs.end());
    return res;
}

WeightedGraph randomize_weights(const WeightedGraph& g, std::uint64_t seed) {
    std::vector<Edge> edges = g.edges();
    for (std::size_t i = 0; i < edges.size(); ++i)
        edges[i].w *= uniform02(seed, i);
    return WeightedGraph::build(g.n1(), g.n2(), std::move(edges), g.parties(),
                                g.labels());
}

ViabilityReport check_viability(const WeightedGraph& g) {
    if (g.parties().empty())
        throw InvalidParameter("check_viability: graph has no parties");
    ViabilityReport r;
    r.balanced = g.n1() == g.n2() + 1;
    r.connected = is_connected(g);

    bool all_det = true;
    for (int p : g.parties()) {
        PartyCheck c;
        c.party = p;
        c.det_value = det_without(g, p);
        c.det_nonzero = det_is_nonzero(c.det_value, matching_scale_without(g, p));
        c.matching_exists = has_matching_without(g, p).exists;
        all_det = all_det && c.det_nonzero;
        r.per_party.push_back(c);
    }

    Eigen::MatrixXcd a = adjacency(g);
    r.zero_space_dim = g.size() == 0 ? 0 : nullity(a);
    if (r.zero_space_dim == 1) {
        r.zero_vector = zero_eigenvector(g);
        r.zero_support_ok = true;
        for (int p : g.parties())
            if (std::abs(r.zero_vector(p)) <= kSnapTol) r.zero_support_ok = false;
    }
    r.viable = r.balanced && r.connected && all_det && r.zero_space_dim == 1 &&
               r.zero_support_ok;
    return r;
}

std::pair<WeightedGraph, ReductionLog> reduce_dangling(const WeightedGraph& g) {
    WeightedGraph cur = g;
    ReductionLog log;
    std::vector<int> orig(cur.size());
    for (int v = 0; v < cur.size(); ++v) orig[v] = v;

    for (;;) {
        auto deg = cur.degrees();
        auto adj = cur.adjacency_list();
        const auto& parties = cur.parties();
        auto is_party = [&](int v) {
            return std::binary_search(parties.begin(), parties.end(), v);
        };
        bool removed = false;
        for (int v = 0; v < cur.size() && !removed; ++v) {
            if (deg[v] != 1 || is_party(v)) continue;
            const int u = adj[v][0];
            if (is_party(u)) continue;
            // Tentatively remove the pair; keep it only if the remainder
            // is connected (or empty).
            auto first = delete_vertex(cur, std::max(u, v)).graph;
            auto next = delete_vertex(first, std::min(u, v)).graph;
            if (next.size() != 0 && !is_connected(next)) continue;
            log.removed_pairs.emplace_back(orig[v], orig[u]);
            std::vector<int> norig;
            for (int x = 0; x < cur.size(); ++x)
                if (x != u && x != v) norig.push_back(orig[x]);
            orig = std::move(norig);
            cur = std::move(next);
            removed = true;
        }
        if (!removed) break;
    }
    return {std::move(cur), std::move(log)};
}

ExtensionResult extend_dangling(const WeightedGraph& g, const ExtendSpec& spec,
                                bool new_party) {
    if (spec.u_edges.empty())
        throw InvalidParameter("extend_dangling: u needs at least one edge");
    if (spec.w_vu == Complex(0.0, 0.0))
        throw InvalidParameter("extend_dangling: dangling edge weight must be nonzero");
    if (new_party && spec.u_in_v1)
        throw PartyPlacement(
            "extend_dangling: with u in V1 the dangling vertex lands in V2 "
            "and cannot be a party");

    const int n1 = g.n1(), n2 = g.n2();
    // New ids: one vertex joins each part.  The new V1 vertex takes id n1
    // (old V2 shifts up by one); the new V2 vertex takes the last id.
    auto shift = [&](int old) { return old < n1 ? old : old + 1; };
    const int u_id = spec.u_in_v1 ? n1 : n1 + 1 + n2;
    const int v_id = spec.u_in_v1 ? n1 + 1 + n2 : n1;

    std::vector<Edge> edges;
    for (const Edge& e : g.edges()) edges.push_back({shift(e.u), shift(e.v), e.w});
    for (const auto& [target, w] : spec.u_edges) {
        if (!g.has_vertex(target))
            throw NoSuchVertex("extend_dangling: no vertex " + std::to_string(target));
        edges.push_back({u_id, shift(target), w});
    }
    edges.push_back({u_id, v_id, spec.w_vu});

    std::vector<int> parties;
    for (int p : g.parties()) parties.push_back(p); // V1 ids do not shift

    const int before = g.size() == 0 ? 0 : nullity(adjacency(g));

    if (new_party) {
        // Extended kernel: old amplitudes carry over, z_u = 0, and the row
        // of u fixes z_v = −(1/w_vu)·(b·z̃) with b = u's coupling row.
        Eigen::VectorXcd zt = zero_eigenvector(g);
        Complex b_dot = 0.0;
        for (const auto& [target, w] : spec.u_edges) b_dot += w * zt(target);
        const Complex z_v = -b_dot / spec.w_vu;
        if (std::abs(z_v) <= kSnapTol)
            throw PartyUnsupported(
                "extend_dangling: kernel amplitude on the new vertex is zero "
                "(b·z̃ = 0); it cannot serve as a party");
        parties.push_back(v_id);
    }

    WeightedGraph out =
        WeightedGraph::build(n1 + 1, n2 + 1, std::move(edges), std::move(parties));
    const int after = nullity(adjacency(out));
    if (after != before)
        throw Error("extend_dangling: nullity changed from " + std::to_string(before) +
                    " to " + std::to_string(after) + " (tolerance breakdown)");
    return {std::move(out), u_id, v_id};
}

} // namespace ctap

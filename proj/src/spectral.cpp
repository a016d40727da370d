#include "ctap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ctap/errors.hpp"
#include "ctap/rng.hpp"
#include "ctap/viability.hpp"

namespace ctap {

namespace {

double spectral_scale(const Eigen::VectorXd& eigs) {
    if (eigs.size() == 0) return 0.0;
    return std::max(std::abs(eigs(0)), std::abs(eigs(eigs.size() - 1)));
}

// Exhaustive perfect-matching search over all edges (V2-internal edges
// included).  Intended for the small graphs this bound targets.
bool perfect_matching_exists(const WeightedGraph& g) {
    const int n = g.size();
    if (n == 0 || n % 2 != 0) return false;
    std::vector<std::vector<int>> adj = g.adjacency_list();
    std::vector<char> used(n, 0);
    auto rec = [&](auto&& self, int covered) -> bool {
        if (covered == n) return true;
        int v = 0;
        while (used[v]) ++v;
        used[v] = 1;
        for (int u : adj[v]) {
            if (used[u] || u == v) continue;
            used[u] = 1;
            if (self(self, covered + 2)) return true;
            used[u] = 0;
        }
        used[v] = 0;
        return false;
    };
    return rec(rec, 0);
}

} // namespace

Eigen::VectorXd spectrum(const Eigen::MatrixXcd& m) {
    // Hermiticity enforcement lives in nullity(); repeat it here cheaply
    // by round-tripping through the same check.
    if (m.rows() != m.cols()) throw NotHermitian("spectrum: matrix is not square");
    if (m.size() != 0) {
        const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
        if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermTol * scale)
            throw NotHermitian("spectrum: matrix is not hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double gap_around_zero(const Eigen::MatrixXcd& m, double tol, bool require_unique) {
    Eigen::VectorXd eigs = spectrum(m);
    const double cut = tol * std::max(1.0, spectral_scale(eigs));
    int zeros = 0;
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < eigs.size(); ++i) {
        const double a = std::abs(eigs(i));
        if (a < cut)
            ++zeros;
        else
            gap = std::min(gap, a);
    }
    if (require_unique && zeros != 1)
        throw DegenerateKernel(zeros, "gap_around_zero: zero eigenvalue multiplicity is " +
                                          std::to_string(zeros) + ", not 1");
    return gap;
}

InterlacingBound interlacing_gap_bound(const WeightedGraph& g) {
    if (g.parties().empty())
        throw InvalidParameter("interlacing_gap_bound: graph has no parties");
    Eigen::MatrixXcd a = adjacency(g);
    Eigen::VectorXd lam = spectrum(a);
    if (nullity(a) != 1)
        throw DegenerateKernel(nullity(a), "interlacing_gap_bound: nullity is not 1");
    const double norm2 = spectral_scale(lam);
    const double slack = 1e-8 * std::max(1.0, norm2);

    InterlacingBound best;
    for (int p : g.parties()) {
        Eigen::VectorXd mu = spectrum(adjacency(delete_vertex(g, p).graph));
        for (Eigen::Index i = 0; i < mu.size(); ++i) {
            if (!(lam(i) <= mu(i) + slack && mu(i) <= lam(i + 1) + slack))
                throw Error("interlacing violated at index " + std::to_string(i) +
                            " for party " + std::to_string(p));
        }
        double min_mu = mu.size() ? mu.cwiseAbs().minCoeff()
                                  : std::numeric_limits<double>::infinity();
        if (min_mu > best.value || best.party < 0) {
            best.value = min_mu;
            best.party = p;
        }
    }
    return best;
}

std::vector<DetBound> det_eigen_lower_bound(const WeightedGraph& g) {
    const bool exceed = max_abs_weight(g) > 1.0 + 1e-15;
    std::vector<DetBound> out;
    for (int p : g.parties()) {
        DetBound b;
        b.party = p;
        b.weights_exceed_unit = exceed;
        auto sub = delete_vertex(g, p).graph;
        const int order = sub.size();
        if (order == 0) {
            b.value = std::numeric_limits<double>::infinity();
        } else {
            Eigen::MatrixXcd a = adjacency(sub);
            const double d_max = a.cwiseAbs().rowwise().sum().maxCoeff();
            const double det = std::abs(det_without(g, p));
            b.value = order == 1 ? det
                                 : det / std::pow(std::max(d_max, 1e-300), order - 1);
        }
        out.push_back(b);
    }
    return out;
}

DetMonteCarlo det_bound_montecarlo(const WeightedGraph& g, std::uint64_t trials,
                                   std::uint64_t seed) {
    if (g.size() % 2 != 0 || !perfect_matching_exists(g))
        throw NoMatching("det_bound_montecarlo: graph has no perfect matching");
    DetMonteCarlo mc;
    mc.ell = g.size() / 2;
    mc.threshold = std::pow(0.5, 3 * mc.ell - 1);
    mc.guarantee = std::pow(0.5, mc.ell);
    mc.trials = trials;

    const auto& edges = g.edges();
    std::uint64_t hits = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const std::uint64_t stream = substream(seed, t);
        std::vector<Edge> drawn = edges;
        for (std::size_t i = 0; i < drawn.size(); ++i) {
            double w = uniform01(stream, i);
            drawn[i].w = w == 0.0 ? 1e-300 : w; // keep weights nonzero
        }
        auto rg = WeightedGraph::build(g.n1(), g.n2(), std::move(drawn), {});
        const double det =
            std::abs(Eigen::PartialPivLU<Eigen::MatrixXcd>(adjacency(rg)).determinant());
        if (det > mc.threshold) ++hits;
    }
    mc.empirical = trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0;
    return mc;
}

SpectralReport spectral_report(const WeightedGraph& g) {
    SpectralReport r;
    Eigen::MatrixXcd a = adjacency(g);
    r.eigenvalues = spectrum(a);
    const double cut = kZeroEigTol * std::max(1.0, spectral_scale(r.eigenvalues));
    int zeros = 0;
    int zero_at = -1;
    for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i)
        if (std::abs(r.eigenvalues(i)) < cut) {
            ++zeros;
            zero_at = static_cast<int>(i);
        }
    r.zero_index = zeros == 1 ? zero_at : -1;
    r.gap = gap_around_zero(a, kZeroEigTol, /*require_unique=*/false);
    if (!g.parties().empty() && zeros == 1) r.interlacing_bound = interlacing_gap_bound(g);
    r.det_bounds = det_eigen_lower_bound(g);
    return r;
}

} // namespace ctap

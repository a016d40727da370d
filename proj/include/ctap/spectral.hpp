#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ctap/graph.hpp"

namespace ctap {

// Spectra, the gap around the zero eigenvalue, and the two lower bounds
// on it (interlacing-based and determinant-based).  Bounds are reported
// for comparison, never enforced as correctness.

// Full hermitian spectrum, ascending.  Throws NotHermitian.
Eigen::VectorXd spectrum(const Eigen::MatrixXcd& m);

// ΔE = smallest |λ| over eigenvalues classified nonzero.  With
// require_unique (the default), throws DegenerateKernel unless exactly
// one eigenvalue classifies as zero; pass false to get min |λ| over
// nonzero eigenvalues regardless.  Returns +inf when every eigenvalue is
// zero (e.g. a single-vertex graph).
double gap_around_zero(const Eigen::MatrixXcd& m, double tol = kZeroEigTol,
                       bool require_unique = true);

// max over parties p of min |μ(A_{G−p})|, a lower bound on the gap by
// Cauchy interlacing.  Also verifies the interlacing chain
// λ_i ≤ μ_i ≤ λ_{i+1} to 1e-8·‖A‖₂.  Requires nonempty parties and
// nullity 1.
struct InterlacingBound {
    double value = 0.0;
    int party = -1; // the certifying party
};

InterlacingBound interlacing_gap_bound(const WeightedGraph& g);

// Per party p: |det(A_{G−p})| / d_max(G−p)^(n−2), where d_max is the
// largest absolute row sum and n−1 the order of A_{G−p}.  Meaningful for
// weights within [0,1]; weights_exceed_unit flags otherwise.
struct DetBound {
    int party = -1;
    double value = 0.0;
    bool weights_exceed_unit = false;
};

std::vector<DetBound> det_eigen_lower_bound(const WeightedGraph& g);

// Empirical check of the probabilistic determinant bound: with every
// edge weight drawn uniformly from [0,1], P(|det(A_G)| > (1/2)^(3ℓ−1))
// is at least (1/2)^ℓ, where ℓ is the size of a perfect matching of G.
// Throws NoMatching when G has no perfect matching (found by exhaustive
// search over all edges, so V2-internal edges participate).
struct DetMonteCarlo {
    int ell = 0;
    double threshold = 0.0; // (1/2)^(3ℓ−1)
    double guarantee = 0.0; // (1/2)^ℓ
    double empirical = 0.0; // fraction of trials with |det| above threshold
    std::uint64_t trials = 0;
};

DetMonteCarlo det_bound_montecarlo(const WeightedGraph& g, std::uint64_t trials,
                                   std::uint64_t seed);

// Everything above in one record.
struct SpectralReport {
    Eigen::VectorXd eigenvalues;
    int zero_index = -1; // index into eigenvalues; -1 when nullity != 1
    double gap = 0.0;
    InterlacingBound interlacing_bound;
    std::vector<DetBound> det_bounds;
};

SpectralReport spectral_report(const WeightedGraph& g);

} // namespace ctap

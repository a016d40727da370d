#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ctap/graph.hpp"

namespace ctap {

// Decides the transfer-theorem hypotheses for a graph and party set:
// part-size balance, the per-party determinant condition, the unique
// zero-eigenvector condition, perfect-matching sufficiency, random weight
// assignment, and the dangling-pair reduction calculus.

// Multiplicity of the zero eigenvalue: eigenvalues with
// |λ| < tol·max(1, ‖A‖₂) classify as zero.  Throws NotHermitian.
int nullity(const Eigen::MatrixXcd& m, double tol = kZeroEigTol);

// Unit-norm kernel vector, phase-normalized so the first nonzero
// coordinate is real positive.  Throws DegenerateKernel unless the
// nullity is exactly 1.
Eigen::VectorXcd zero_eigenvector(const Eigen::MatrixXcd& m, double tol = kZeroEigTol);

// Graph overload: additionally snaps V2 coordinates below kSnapTol to
// exact zero (for balanced graphs the kernel lives on V1) and
// renormalizes.
Eigen::VectorXcd zero_eigenvector(const WeightedGraph& g, double tol = kZeroEigTol);

// det(A_{G−p}) by pivoted LU.  When G−p has no perfect matching the
// determinant is structurally zero and exact 0 is returned.  Throws
// PartyPlacement unless p ∈ V1.
Complex det_without(const WeightedGraph& g, int p);

// Squared magnitude of the weight product along one perfect matching of
// G−p — the natural unit of det(A_{G−p}), which by the generalized Laplace
// identity equals ±|det B̃_p|², a signed sum of such matching terms.
// Returns 1.0 when G−p has no perfect matching (the determinant is then
// structurally zero anyway).
double matching_scale_without(const WeightedGraph& g, int p);

// Scale-aware nonzero test: |det| > kDetTol · ref_scale.  With ref_scale
// from matching_scale_without, a determinant is declared zero only when it
// sits twelve digits below a generic matching monomial — exact structural
// or symbolic cancellation — rather than merely being an honestly small
// product of sub-unit weights.  Unit weights reduce to |det| > kDetTol.
bool det_is_nonzero(Complex det, double ref_scale);

struct MatchingResult {
    bool exists = false;
    std::vector<std::pair<int, int>> pairs; // (V1 vertex, V2 vertex), original ids
    std::string reason;                     // set when exists is false
};

// Perfect matching in G−p.  Since |V1∖{p}| = |V2| and V1 is independent,
// any perfect matching uses only V1–V2 edges, so an augmenting-path
// search on the bipartite restriction is exact.  Unbalanced graphs report
// false with a reason.  Throws PartyPlacement unless p ∈ V1.
MatchingResult has_matching_without(const WeightedGraph& g, int p);

// Multiply every edge weight by an independent uniform draw from (0,2],
// deterministically in (seed, edge position).  Structure, parts and
// parties are unchanged.
WeightedGraph randomize_weights(const WeightedGraph& g, std::uint64_t seed);

struct PartyCheck {
    int party = -1;
    Complex det_value = 0.0;
    bool det_nonzero = false;
    bool matching_exists = false;
};

struct ViabilityReport {
    bool balanced = false;  // |V1| = |V2| + 1
    bool connected = false;
    std::vector<PartyCheck> per_party;
    int zero_space_dim = 0;
    Eigen::VectorXcd zero_vector; // present iff zero_space_dim == 1
    bool zero_support_ok = false; // kernel amplitude nonzero on every party
    bool viable = false;
};

// Evaluate every transfer-theorem hypothesis; failures are reported, not
// thrown.  Throws InvalidParameter when the graph has no parties.
ViabilityReport check_viability(const WeightedGraph& g);

// Repeatedly remove a dangling pair (degree-1 vertex v and its neighbor
// u, both outside the party set) while the remainder stays connected.
// Nullity is preserved at every step.  The log records removed pairs in
// original ids, lowest-id dangler first.
struct ReductionLog {
    std::vector<std::pair<int, int>> removed_pairs; // (dangler v, neighbor u)
};

std::pair<WeightedGraph, ReductionLog> reduce_dangling(const WeightedGraph& g);

// Attach a new vertex u with the given edges into the existing graph,
// plus a new dangling vertex v adjacent only to u (v lands in the part
// opposite to u, preserving balance).  Nullity is unchanged.  With
// new_party, v joins the party set provided the extended kernel gives it
// nonzero amplitude z_v = −(1/w_vu)·(b·z̃); otherwise PartyUnsupported.
struct ExtendSpec {
    bool u_in_v1 = false;
    std::vector<std::pair<int, Complex>> u_edges; // (existing vertex, weight)
    Complex w_vu = 1.0;                           // weight of the dangling edge
};

struct ExtensionResult {
    WeightedGraph graph;
    int u = -1; // new ids in the extended graph
    int v = -1;
};

ExtensionResult extend_dangling(const WeightedGraph& g, const ExtendSpec& spec,
                                bool new_party);

} // namespace ctap

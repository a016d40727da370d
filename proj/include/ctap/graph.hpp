#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace ctap {

using Complex = std::complex<double>;

// Scale-aware numeric thresholds used across the library.  The paper works
// in exact arithmetic; floating point needs explicit cutoffs, pinned here
// once so every module classifies zeros the same way.
inline constexpr double kZeroEigTol = 1e-9;   // |λ| < tol·max(1,‖A‖₂) is a zero eigenvalue
inline constexpr double kDetTol = 1e-12;      // |det| > tol·(‖A‖_max)^dim is nonzero
inline constexpr double kSnapTol = 1e-8;      // kernel amplitudes below this snap to 0
inline constexpr double kUnitarityTol = 1e-8; // accepted propagator defect
inline constexpr double kHermTol = 1e-12;     // hermiticity slack, relative to ‖A‖_max

// One undirected edge with a complex weight.  Stored canonically with
// u <= v; constructing (v, u, w) is the same edge with weight conj(w).
struct Edge {
    int u = 0;
    int v = 0;
    Complex w = 1.0;
};

// A weighted semi-bipartite graph: parts V1 (ids 0..n1-1) and V2
// (ids n1..n1+n2-1), no edges inside V1, edges and real-weight self-loops
// inside V2 allowed.  Parties are transfer endpoints and must lie in V1.
// Immutable after construction; safe to share across threads.
class WeightedGraph {
public:
    WeightedGraph() = default;

    // Validates and canonicalizes: edges are conjugate-flipped to u <= v,
    // then sorted by (u, v); parties are sorted.  Throws
    // SemiBipartiteViolation / DuplicateEdge / NoSuchVertex /
    // PartyPlacement / InvalidParameter on bad input.
    static WeightedGraph build(int n1, int n2, std::vector<Edge> edges,
                               std::vector<int> parties,
                               std::vector<std::string> labels = {});

    int n1() const { return n1_; }
    int n2() const { return n2_; }
    int size() const { return n1_ + n2_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& parties() const { return parties_; }
    const std::vector<std::string>& labels() const { return labels_; }

    bool in_v1(int v) const { return v >= 0 && v < n1_; }
    bool has_vertex(int v) const { return v >= 0 && v < size(); }
    bool is_real() const; // all weights have zero imaginary part

    // Neighbor lists of the underlying undirected graph (self-loops once).
    std::vector<std::vector<int>> adjacency_list() const;

    // Structural degree per vertex; a self-loop contributes 2.
    std::vector<int> degrees() const;

    bool operator==(const WeightedGraph& o) const;

private:
    int n1_ = 0;
    int n2_ = 0;
    std::vector<Edge> edges_;
    std::vector<int> parties_;
    std::vector<std::string> labels_;
};

// Hermitian adjacency matrix in the paper's block form [[0, B], [B†, C]]:
// V1 rows/columns first, zero V1×V1 block by construction.
Eigen::MatrixXcd adjacency(const WeightedGraph& g);

// Largest |entry| of the adjacency matrix (0 for an edgeless graph).
double max_abs_weight(const WeightedGraph& g);

// Result of removing one vertex: the remaining graph with contiguous ids
// plus the old-id → new-id map (-1 marks the removed vertex).
struct DeletionResult {
    WeightedGraph graph;
    std::vector<int> old_to_new;
};

// Remove vertex p and all incident edges; surviving vertices keep their
// part, ids are re-packed V1-first.  Throws NoSuchVertex.
DeletionResult delete_vertex(const WeightedGraph& g, int p);

// True iff the underlying undirected graph is connected.  The empty graph
// is not connected (documented convention); a single vertex is.
bool is_connected(const WeightedGraph& g);

// ------- graph text format -------
//
//   graph v1=<n1> v2=<n2>
//   party <id> [<id> ...]
//   edge <u> <v> <re> [<im>]
//
// Lines beginning '#' are comments.  Serialization is canonical: one
// sorted party line (omitted when empty), edges sorted by (u, v), and the
// imaginary part omitted when zero.

std::string serialize(const WeightedGraph& g);
void serialize(const WeightedGraph& g, std::ostream& out);
WeightedGraph parse_graph(std::istream& in);
WeightedGraph parse_graph(const std::string& text);
WeightedGraph load_graph_file(const std::string& path);
void save_graph_file(const WeightedGraph& g, const std::string& path);

} // namespace ctap

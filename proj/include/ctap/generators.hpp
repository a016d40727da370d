#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ctap/graph.hpp"

namespace ctap {

// Graph families from the numerical studies.  Every generator returns a
// balanced semi-bipartite graph (|V1| = |V2| + 1) with unit weights and a
// canonical party set; generation is a pure function of its parameters
// (and seed, for the random family).

// Path on n vertices (n odd), parties = both endpoints.  V1 = even
// positions, V2 = odd positions, numbered V1-first.
WeightedGraph path(int n);

// Star: `arms` linear chains of length `arm_length` joined at a center.
// V1 is whichever distance-parity class satisfies |V1| = |V2| + 1
// (InvalidParameter when neither does, e.g. odd arms·arm_length).
// Parties = arm endpoints whenever the endpoints land in V1.
WeightedGraph star(int arms, int arm_length);

// Complete arity-ary tree of the given depth with every edge subdivided
// by a V2 vertex.  V1 = original tree vertices, V2 = edge vertices,
// parties = leaves of the original tree.
WeightedGraph subdivided_tree(int arity, int depth);

// Honeycomb patch of k×k two-site unit cells with the top-right corner
// site removed: |V| = 2k² − 1, max degree 3, bipartite with |V1| = k².
// Cell (i, j) holds sites A(i,j) ∈ V1 and B(i,j) ∈ V2; bonds are
// A(i,j)–B(i,j), B(i,j)–A(i+1,j) and B(i,j)–A(i,j+1), and the removed
// corner site is B(k−1,k−1).  This orientation keeps the removed site's
// color class the same for every k, which is what makes the gap decay
// parity-consistent.  Parties default to two maximally distant V1 sites.
WeightedGraph hex_grid(int k);

// k×k square grid, k odd; V1 = the corners' checkerboard class of size
// (k²+1)/2.  Parties default to two maximally distant V1 sites.
WeightedGraph square_grid(int k);

// Random bipartite graph on parts of size m+1 (V1) and m (V2); each of
// the (m+1)·m cross edges is present independently with probability p,
// deterministically in (seed, edge slot).  Parties default to two
// maximally distant V1 vertices (empty when no two are connected).
WeightedGraph random_bipartite(int m, double p, std::uint64_t seed);

// Two maximally distant V1 vertices by breadth-first search, ties broken
// by lowest ids; {0} for a single-V1-vertex graph, {} when no two V1
// vertices are connected.
std::vector<int> default_parties(const WeightedGraph& g);

// CLI-facing family dispatch.
struct FamilySpec {
    std::string family; // path | star | subdivided_tree | hex_grid | square_grid | random_bipartite
    std::map<std::string, double> params;
    std::uint64_t seed = 0;
};

WeightedGraph from_family(const FamilySpec& spec);

} // namespace ctap

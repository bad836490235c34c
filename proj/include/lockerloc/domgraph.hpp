#ifndef LOCKERLOC_DOMGRAPH_HPP
#define LOCKERLOC_DOMGRAPH_HPP

#include <string>
#include <utility>
#include <vector>

#include "lockerloc/instance.hpp"

namespace lockerloc {

// Dominance relation of one zone as a DAG: vertices are lockers, an edge
// (j, k) means a_ij > (1+gamma) * a_ik. Edges run from strictly larger to
// strictly smaller attraction, so the graph is acyclic; the relation is
// transitive for gamma >= 0 and all implied edges are stored.
struct DominanceGraph {
    int zone = 0;
    int vertex_count = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> out_edges; // adjacency, ascending targets

    bool has_edge(int from, int to) const;
};

// A dominance chain: consecutive vertices (and by transitivity every ordered
// pair) satisfy the dominance inequality, so at most one member of the
// sequence can be offered to the zone.
struct PathInequality {
    int zone = 0;
    std::vector<int> vertices;
};

DominanceGraph build(const Instance& instance, int zone);

// Deterministic Kahn order; among ready vertices the lowest locker id comes
// first. Throws contract_error if a cycle is detected.
std::vector<int> topological_order(const DominanceGraph& graph);

// Maximum-cardinality path by DP over the topological order; ties are broken
// toward the lowest-id predecessor so results are reproducible.
PathInequality longest_path(const DominanceGraph& graph);

// The longest path plus up to `extra` further vertex-disjoint paths, found by
// removing each returned path's vertices and repeating. Paths of fewer than
// two vertices are not returned.
std::vector<PathInequality> longest_paths(const DominanceGraph& graph, int extra);

// t*(t-1)/2 for a chain of t vertices: the number of ordered dominance pairs
// the chain implies.
long long implied_pair_count(const PathInequality& path);

std::string to_dot(const DominanceGraph& graph);

} // namespace lockerloc

#endif

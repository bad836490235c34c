#include "lockerloc/domgraph.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

#include "lockerloc/errors.hpp"

namespace lockerloc {

bool DominanceGraph::has_edge(int from, int to) const {
    const auto& targets = out_edges[from];
    return std::binary_search(targets.begin(), targets.end(), to);
}

DominanceGraph build(const Instance& instance, int zone) {
    if (zone < 0 || zone >= instance.zone_count())
        throw contract_error("zone index out of range");
    const int n = instance.locker_count();
    DominanceGraph graph;
    graph.zone = zone;
    graph.vertex_count = n;
    graph.out_edges.assign(n, {});
    const double factor = 1.0 + instance.gamma();
    for (int j = 0; j < n; ++j) {
        const double a_j = instance.attraction(zone, j);
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            if (a_j > factor * instance.attraction(zone, k)) {
                graph.edges.emplace_back(j, k);
                graph.out_edges[j].push_back(k);
            }
        }
    }
    return graph;
}

std::vector<int> topological_order(const DominanceGraph& graph) {
    const int n = graph.vertex_count;
    std::vector<int> in_degree(n, 0);
    for (const auto& [from, to] : graph.edges) {
        (void)from;
        ++in_degree[to];
    }
    // Min-heap on vertex id: among ready vertices, lowest id first.
    std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
    for (int v = 0; v < n; ++v)
        if (in_degree[v] == 0) ready.push(v);

    std::vector<int> order;
    order.reserve(n);
    while (!ready.empty()) {
        const int v = ready.top();
        ready.pop();
        order.push_back(v);
        for (int w : graph.out_edges[v])
            if (--in_degree[w] == 0) ready.push(w);
    }
    if (static_cast<int>(order.size()) != n)
        throw contract_error("dominance graph contains a cycle");
    return order;
}

PathInequality longest_path(const DominanceGraph& graph) {
    const int n = graph.vertex_count;
    PathInequality path;
    path.zone = graph.zone;
    if (n == 0) return path;

    const std::vector<int> order = topological_order(graph);

    // Longest path ending at each vertex; predecessor ties resolved toward
    // the lowest id.
    std::vector<int> length(n, 1);
    std::vector<int> predecessor(n, -1);
    for (int v : order) {
        for (int w : graph.out_edges[v]) {
            if (length[v] + 1 > length[w] ||
                (length[v] + 1 == length[w] && predecessor[w] != -1 && v < predecessor[w])) {
                length[w] = length[v] + 1;
                predecessor[w] = v;
            }
        }
    }

    int best = 0;
    for (int v = 1; v < n; ++v)
        if (length[v] > length[best]) best = v; // ties keep the lowest id

    for (int v = best; v != -1; v = predecessor[v]) path.vertices.push_back(v);
    std::reverse(path.vertices.begin(), path.vertices.end());
    return path;
}

std::vector<PathInequality> longest_paths(const DominanceGraph& graph, int extra) {
    std::vector<PathInequality> paths;
    DominanceGraph remaining = graph;
    for (int round = 0; round <= extra; ++round) {
        const PathInequality path = longest_path(remaining);
        if (path.vertices.size() < 2) break;
        paths.push_back(path);
        // Strip the used vertices and continue on what is left.
        std::vector<std::uint8_t> used(graph.vertex_count, 0);
        for (const PathInequality& p : paths)
            for (int v : p.vertices) used[v] = 1;
        DominanceGraph next;
        next.zone = graph.zone;
        next.vertex_count = graph.vertex_count;
        next.out_edges.assign(graph.vertex_count, {});
        for (const auto& [from, to] : graph.edges) {
            if (used[from] || used[to]) continue;
            next.edges.emplace_back(from, to);
            next.out_edges[from].push_back(to);
        }
        // Used vertices stay in the vertex set but are isolated, so later
        // rounds cannot pick them (single-vertex paths are dropped).
        remaining = std::move(next);
    }
    return paths;
}

long long implied_pair_count(const PathInequality& path) {
    const long long t = static_cast<long long>(path.vertices.size());
    return t * (t - 1) / 2;
}

std::string to_dot(const DominanceGraph& graph) {
    std::ostringstream out;
    out << "digraph dominance_zone_" << graph.zone << " {\n";
    out << "  rankdir=LR;\n";
    for (int v = 0; v < graph.vertex_count; ++v)
        out << "  v" << v << " [label=\"" << (v + 1) << "\"];\n";
    for (const auto& [from, to] : graph.edges)
        out << "  v" << from << " -> v" << to << ";\n";
    out << "}\n";
    return out.str();
}

} // namespace lockerloc

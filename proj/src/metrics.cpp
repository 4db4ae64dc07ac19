#include "treecut/metrics.hpp"

#include <algorithm>
#include <deque>

namespace treecut {

namespace {

// Farthest vertex from `start` in the undirected tree, with its distance.
std::pair<Vertex, std::size_t> farthest_from(const RootedTree& tree, Vertex start) {
    std::vector<std::size_t> dist(tree.size(), SIZE_MAX);
    std::deque<Vertex> queue{start};
    dist[static_cast<std::size_t>(start)] = 0;
    Vertex best = start;
    while (!queue.empty()) {
        const Vertex v = queue.front();
        queue.pop_front();
        const std::size_t dv = dist[static_cast<std::size_t>(v)];
        if (dv > dist[static_cast<std::size_t>(best)]) best = v;
        for (Vertex w : tree.neighbors(v)) {
            if (dist[static_cast<std::size_t>(w)] != SIZE_MAX) continue;
            dist[static_cast<std::size_t>(w)] = dv + 1;
            queue.push_back(w);
        }
    }
    return {best, dist[static_cast<std::size_t>(best)]};
}

}  // namespace

TreeMetrics compute_metrics(const RootedTree& tree) {
    const std::size_t n = tree.size();
    TreeMetrics m;
    m.depth.assign(n, 0);
    m.subtree_size.assign(n, 1);
    m.path_load.assign(n, 0);
    m.degree.resize(n);

    const auto order = tree.bfs_order();
    for (Vertex v : order) {
        if (v == tree.root()) continue;
        const auto p = static_cast<std::size_t>(tree.parent(v));
        m.depth[static_cast<std::size_t>(v)] = m.depth[p] + 1;
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (*it == tree.root()) continue;
        m.subtree_size[static_cast<std::size_t>(tree.parent(*it))] += m.subtree_size[static_cast<std::size_t>(*it)];
    }
    for (Vertex v : order) {
        if (v == tree.root()) continue;
        const auto i = static_cast<std::size_t>(v);
        m.path_load[i] = m.path_load[static_cast<std::size_t>(tree.parent(v))] + m.subtree_size[i];
    }
    for (std::size_t v = 0; v < n; ++v) {
        m.degree[v] = tree.degree(static_cast<Vertex>(v));
        m.max_degree = std::max(m.max_degree, m.degree[v]);
        m.height = std::max(m.height, m.depth[v]);
    }

    const auto [end, unused] = farthest_from(tree, tree.root());
    (void)unused;
    m.diameter = farthest_from(tree, end).second;

    m.tail_size.assign(m.height + 1, 0);
    for (std::size_t v = 0; v < n; ++v) m.tail_size[m.depth[v]] += m.subtree_size[v];
    return m;
}

EdgeLoad max_edge_load(const TreeMetrics& metrics) {
    EdgeLoad best;
    for (std::size_t v = 0; v < metrics.depth.size(); ++v) {
        if (metrics.depth[v] == 0) continue;
        const std::uint64_t load = static_cast<std::uint64_t>(metrics.depth[v]) * metrics.subtree_size[v];
        if (best.edge == kNoVertex || load > best.value) best = {load, static_cast<Vertex>(v)};
    }
    return best;
}

PathLoad max_path_load(const TreeMetrics& metrics) {
    PathLoad best{0, 0};
    for (std::size_t v = 0; v < metrics.path_load.size(); ++v) {
        if (metrics.path_load[v] > best.value) best = {metrics.path_load[v], static_cast<Vertex>(v)};
    }
    if (best.value == 0) best.vertex = kNoVertex;
    return best;
}

TailProfile tail_profile(const TreeMetrics& metrics) {
    TailProfile out;
    out.weighted.resize(metrics.tail_size.size());
    for (std::size_t k = 0; k < metrics.tail_size.size(); ++k) {
        out.weighted[k] = static_cast<std::uint64_t>(k) * metrics.tail_size[k];
        if (k >= 1 && out.weighted[k] > out.max) {
            out.max = out.weighted[k];
            out.level = k;
        }
    }
    return out;
}

}  // namespace treecut

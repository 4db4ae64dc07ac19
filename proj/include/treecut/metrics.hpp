#pragma once

#include "treecut/tree.hpp"

#include <cstdint>
#include <vector>

namespace treecut {

/// Per-tree geometry, all relative to the tree's stored root.
///
/// depth[v] = |v|, the number of edges from the root.
/// subtree_size[v] = |T_v|, vertex count of the subtree below v (inclusive).
/// path_load[v] = sum of |T_e| over the edges e on the root-to-v path.
/// tail_size[k] = |V_k| = number of vertices at depth >= k, k = 0..height.
struct TreeMetrics {
    std::vector<std::size_t> depth;
    std::vector<std::size_t> subtree_size;
    std::vector<std::uint64_t> path_load;
    std::vector<std::size_t> degree;
    std::size_t max_degree = 0;
    std::size_t diameter = 0;
    std::size_t height = 0;
    std::vector<std::size_t> tail_size;
};

TreeMetrics compute_metrics(const RootedTree& tree);

/// max over edges of |e|*|T_e|, with |e| the depth of the lower endpoint.
/// `edge` is the lower endpoint of the maximising edge (smallest index on
/// ties), or kNoVertex for a single vertex.
struct EdgeLoad {
    std::uint64_t value = 0;
    Vertex edge = kNoVertex;
};
EdgeLoad max_edge_load(const TreeMetrics& metrics);

struct PathLoad {
    std::uint64_t value = 0;
    Vertex vertex = kNoVertex;
};
PathLoad max_path_load(const TreeMetrics& metrics);

/// weighted[k] = k*|V_k| for k = 0..height; max/level over k >= 1.
struct TailProfile {
    std::vector<std::uint64_t> weighted;
    std::uint64_t max = 0;
    std::size_t level = 0;
};
TailProfile tail_profile(const TreeMetrics& metrics);

}  // namespace treecut

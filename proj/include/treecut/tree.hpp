#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace treecut {

using Vertex = std::int32_t;
inline constexpr Vertex kNoVertex = -1;

/// Immutable rooted tree on dense vertex indices 0..n-1.
///
/// Children are stored in ascending index order (CSR layout). Every non-root
/// vertex v identifies the edge (parent(v), v); this is how edge-indexed
/// quantities are addressed throughout the library.
class RootedTree {
public:
    /// Validates and builds a tree. The root is the unique entry equal to
    /// kNoVertex. Throws treecut::Error with IndexOutOfRange, MultipleRoots,
    /// CycleDetected or Malformed.
    static RootedTree from_parents(std::vector<Vertex> parent);

    std::size_t size() const noexcept { return parent_.size(); }
    Vertex root() const noexcept { return root_; }
    Vertex parent(Vertex v) const { return parent_[static_cast<std::size_t>(v)]; }
    std::span<const Vertex> parents() const noexcept { return parent_; }

    std::span<const Vertex> children(Vertex v) const {
        const auto i = static_cast<std::size_t>(v);
        return {child_list_.data() + child_offset_[i], child_offset_[i + 1] - child_offset_[i]};
    }
    std::size_t child_count(Vertex v) const {
        const auto i = static_cast<std::size_t>(v);
        return child_offset_[i + 1] - child_offset_[i];
    }
    std::size_t degree(Vertex v) const { return child_count(v) + (v == root_ ? 0 : 1); }

    /// Breadth-first order from the root; children visited ascending.
    std::span<const Vertex> bfs_order() const noexcept { return order_; }

    /// Neighbours in the undirected tree: parent first (if any), then children.
    std::vector<Vertex> neighbors(Vertex v) const;

    bool operator==(const RootedTree& other) const { return parent_ == other.parent_; }

private:
    RootedTree() = default;

    Vertex root_ = kNoVertex;
    std::vector<Vertex> parent_;
    std::vector<std::size_t> child_offset_;
    std::vector<Vertex> child_list_;
    std::vector<Vertex> order_;
};

RootedTree from_parents(std::size_t n, std::span<const Vertex> parent);

/// Same undirected edge set, parent links re-oriented toward new_root.
RootedTree reroot(const RootedTree& tree, Vertex new_root);

/// Subtree induced by `keep` (must be connected and contain `new_root`),
/// relabelled densely in ascending order of original index. `original` (if
/// given) receives the map new index -> old index.
RootedTree induced_subtree(const RootedTree& tree, std::span<const Vertex> keep, Vertex new_root,
                           std::vector<Vertex>* original = nullptr);

/// Canonical text format: "n\n" followed by the n parent entries (root = -1).
std::string to_text(const RootedTree& tree);
RootedTree parse_tree_text(std::string_view text);

/// AHU canonical form of the unlabelled rooted shape; equal strings iff the
/// rooted trees are isomorphic.
std::string canonical_shape(const RootedTree& tree);

}  // namespace treecut

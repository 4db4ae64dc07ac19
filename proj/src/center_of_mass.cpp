#include "treecut/center_of_mass.hpp"

#include "treecut/error.hpp"
#include "treecut/metrics.hpp"

#include <algorithm>
#include <deque>

namespace treecut {

namespace {

struct Component {
    std::size_t size = 0;
    Vertex id = kNoVertex;           // smallest neighbour index in the group
    std::vector<Vertex> neighbours;  // one per original component
};

bool larger_first(const Component& a, const Component& b) {
    if (a.size != b.size) return a.size > b.size;
    return a.id < b.id;
}

// Sizes of the components of T - x, keyed by the neighbour of x they contain.
std::vector<Component> components_around(const RootedTree& tree, const std::vector<std::size_t>& subtree_size, Vertex x) {
    const std::size_t n = tree.size();
    std::vector<Component> comps;
    if (x != tree.root()) {
        comps.push_back({n - subtree_size[static_cast<std::size_t>(x)], tree.parent(x), {tree.parent(x)}});
    }
    for (Vertex c : tree.children(x)) comps.push_back({subtree_size[static_cast<std::size_t>(c)], c, {c}});
    std::sort(comps.begin(), comps.end(), larger_first);
    return comps;
}

// Appendix grouping; returns the neighbours whose components form side A.
std::vector<Vertex> group_side_a(std::vector<Component> comps, std::size_t n) {
    if (comps.size() <= 3 || 2 * comps.front().size > n) return comps.front().neighbours;
    while (comps.size() >= 4) {
        // comps is sorted larger-first; the two smallest (ties: smaller id)
        // are found by scanning rather than relying on the tail order.
        auto smallest = [&](std::size_t skip) {
            std::size_t best = SIZE_MAX;
            for (std::size_t i = 0; i < comps.size(); ++i) {
                if (i == skip) continue;
                if (best == SIZE_MAX || comps[i].size < comps[best].size ||
                    (comps[i].size == comps[best].size && comps[i].id < comps[best].id)) {
                    best = i;
                }
            }
            return best;
        };
        const std::size_t first = smallest(SIZE_MAX);
        const std::size_t second = smallest(first);
        Component merged;
        merged.size = comps[first].size + comps[second].size;
        merged.id = std::min(comps[first].id, comps[second].id);
        merged.neighbours = comps[first].neighbours;
        merged.neighbours.insert(merged.neighbours.end(), comps[second].neighbours.begin(), comps[second].neighbours.end());
        if (3 * merged.size >= n - 1) return merged.neighbours;
        comps.erase(comps.begin() + static_cast<std::ptrdiff_t>(std::max(first, second)));
        comps.erase(comps.begin() + static_cast<std::ptrdiff_t>(std::min(first, second)));
        comps.push_back(std::move(merged));
        std::sort(comps.begin(), comps.end(), larger_first);
    }
    return comps.front().neighbours;
}

CenterOfMass assemble(const RootedTree& tree, Vertex x, const std::vector<Vertex>& side_a) {
    const std::size_t n = tree.size();
    CenterOfMass out;
    out.vertex = x;
    if (n == 1) {
        out.part_a = out.part_b = {x};
        out.delta = 1.0;
        return out;
    }
    std::vector<char> in_a(n, 0);
    std::vector<char> seen(n, 0);
    seen[static_cast<std::size_t>(x)] = 1;
    std::deque<Vertex> queue(side_a.begin(), side_a.end());
    for (Vertex s : side_a) seen[static_cast<std::size_t>(s)] = 1;
    while (!queue.empty()) {
        const Vertex v = queue.front();
        queue.pop_front();
        in_a[static_cast<std::size_t>(v)] = 1;
        for (Vertex w : tree.neighbors(v)) {
            if (seen[static_cast<std::size_t>(w)]) continue;
            seen[static_cast<std::size_t>(w)] = 1;
            queue.push_back(w);
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (static_cast<Vertex>(v) == x) {
            out.part_a.push_back(x);
            out.part_b.push_back(x);
        } else if (in_a[v]) {
            out.part_a.push_back(static_cast<Vertex>(v));
        } else {
            out.part_b.push_back(static_cast<Vertex>(v));
        }
    }
    out.delta = static_cast<double>(std::min(out.part_a.size(), out.part_b.size())) / static_cast<double>(n);
    return out;
}

}  // namespace

CenterOfMass split_at(const RootedTree& tree, Vertex x) {
    require(x >= 0 && static_cast<std::size_t>(x) < tree.size(), ErrorCode::IndexOutOfRange, "split vertex out of range");
    if (tree.size() == 1) return assemble(tree, x, {});
    const auto metrics = compute_metrics(tree);
    return assemble(tree, x, group_side_a(components_around(tree, metrics.subtree_size, x), tree.size()));
}

CenterOfMass center_of_mass(const RootedTree& tree) {
    const std::size_t n = tree.size();
    if (n == 1) return assemble(tree, tree.root(), {});
    const auto metrics = compute_metrics(tree);
    for (std::size_t v = 0; v < n; ++v) {
        const auto comps = components_around(tree, metrics.subtree_size, static_cast<Vertex>(v));
        if (2 * comps.front().size <= n) {
            return assemble(tree, static_cast<Vertex>(v), group_side_a(comps, n));
        }
    }
    fail(ErrorCode::InvalidArgument, "no vertex separator found");  // unreachable for a valid tree
}

}  // namespace treecut

#pragma once

#include "treecut/tree.hpp"

#include <vector>

namespace treecut {

/// A split of the tree at `vertex` into two subtrees sharing only that
/// vertex. Both parts are sorted vertex lists; delta = min(|a|,|b|)/n.
struct CenterOfMass {
    Vertex vertex = kNoVertex;
    std::vector<Vertex> part_a;
    std::vector<Vertex> part_b;
    double delta = 0.0;
};

/// Finds a vertex separator (every component of T - x has at most n/2
/// vertices; smallest index wins) and groups its components into two sides:
///
///  * one component:   {x} + S1 against {x}
///  * two components:  each side takes one
///  * three:           largest component against the other two
///  * four or more:    take the two smallest S', S''. If |S'|+|S''| >= (n-1)/3
///                     they form one side, else merge them and repeat.
///
/// Components are ordered by size descending, ties by smallest neighbour
/// index. The result always has delta >= 1/3.
CenterOfMass center_of_mass(const RootedTree& tree);

/// Same grouping forced at vertex x. If some component of T - x holds more
/// than n/2 vertices it is split off against the rest.
CenterOfMass split_at(const RootedTree& tree, Vertex x);

}  // namespace treecut

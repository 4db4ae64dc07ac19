#pragma once

#include "treecut/tree.hpp"

#include <span>
#include <vector>

namespace treecut {

/// Birth-and-death chain on states 1..2n-1 (stored 0-based) obtained by
/// folding a spherically symmetric tree of height n-1 through its root:
/// state n is the root, state n-d the level-d vertices of one child's subtree
/// and state n+d those of another.
///
/// up[i] = r(x, x+1), down[i] = r(x, x-1) for x = i+1; the missing moves at
/// the two ends are 0.
struct BDChain {
    std::size_t n = 0;
    std::vector<std::size_t> degrees;  // deg_0..deg_{n-2} of the tree
    std::vector<double> up;
    std::vector<double> down;
    std::vector<double> stationary;  // detailed-balance solution, sums to 1
    double gap = 0.0;
    std::vector<double> eigenfunction;  // antisymmetric: f(x) = -f(2n-x)
    bool antisymmetrized = false;       // true when g - reversed(g) was needed
};

/// Builds the chain for tree degrees deg_0..deg_{h-1} (height h, n = h+1),
/// with stationary law and gap eigenfunction. Throws InvalidArgument if n < 2.
BDChain project(std::span<const std::size_t> degrees);

/// Fills gap and eigenfunction from the symmetrised tridiagonal generator.
void bd_spectrum(BDChain& chain);

/// max_x |pi(x) r(x,x+1) - pi(x+1) r(x+1,x)|.
double detailed_balance_residual(const BDChain& chain);

/// Level degrees of a spherically symmetric tree (throws DegreeMismatch if
/// the tree is not spherically symmetric about its root).
std::vector<std::size_t> level_degrees(const RootedTree& tree);

struct TreeProjection {
    RootedTree tree;             // rooted at the first branching point
    std::vector<Vertex> original;  // new index -> original index
    std::size_t stripped = 0;    // vertices removed above the branching point
    BDChain chain;
};

/// Strips the path from the root down to the first branching point, then
/// projects the remaining spherically symmetric tree.
TreeProjection project_tree(const RootedTree& tree);

struct Lift {
    std::vector<double> F;
    double residual = 0.0;  // ||(A - D)F + gap F||_inf
    Vertex x1 = kNoVertex;
    Vertex x2 = kNoVertex;
};

/// F = f(n - |v|) on T_{x1}, f(n + |v|) on T_{x2}, 0 elsewhere, for the first
/// two children x1 < x2 of the root. Throws DegreeMismatch if the tree does
/// not match the chain.
Lift lift(const RootedTree& tree, const BDChain& chain);

/// (1/(16 Delta)) sum_{i=1}^{n} 1/pi(i).
double cs_lower_bound(const BDChain& chain, std::size_t max_degree);

}  // namespace treecut

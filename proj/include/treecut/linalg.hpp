#pragma once

#include "treecut/tree.hpp"

#include <Eigen/Dense>

#include <functional>

namespace treecut {

/// Largest tree handled by dense O(n^3) eigendecompositions. Defaults to
/// 4096; the TREECUT_MAX_VERTICES environment variable overrides it.
std::size_t dense_vertex_cap();

/// Solves the Dirichlet problem (Q h)(v) = b(v) for v != ground, h(ground) = 0,
/// with Q = D - A the tree Laplacian, by leaf-to-ground elimination in O(n).
Eigen::VectorXd grounded_solve(const RootedTree& tree, Vertex ground, const Eigen::VectorXd& rhs);

/// Q^+ b: the mean-zero solution of Q x = b - mean(b).
Eigen::VectorXd laplacian_pseudo_solve(const RootedTree& tree, const Eigen::VectorXd& rhs);

struct LanczosResult {
    double value = 0.0;
    Eigen::VectorXd vector;
    std::size_t iterations = 0;
    double residual = 0.0;  // ||A x - value x|| for the returned unit vector
    bool converged = false;
};

struct LanczosOptions {
    double tolerance = 1e-10;  // relative Ritz residual target
    std::size_t max_iterations = 500;
    bool deflate_constants = false;  // keep iterates orthogonal to the all-ones vector
    std::uint64_t seed = 0x5eed5eedULL;
};

/// Top eigenpair of a symmetric positive semidefinite operator of dimension
/// `dim`, by Lanczos with full reorthogonalisation.
LanczosResult lanczos_top(std::size_t dim, const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                          const LanczosOptions& options = {});

}  // namespace treecut

#include "treecut/bdchain.hpp"

#include "treecut/error.hpp"
#include "treecut/metrics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace treecut {

namespace {

std::size_t idx(Vertex v) { return static_cast<std::size_t>(v); }

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

BDChain project(std::span<const std::size_t> degrees) {
    BDChain c;
    c.n = degrees.size() + 1;
    require(c.n >= 2, ErrorCode::InvalidArgument, "birth-and-death projection needs a tree of height >= 1 (n >= 2)");
    for (std::size_t k = 1; k < degrees.size(); ++k) {
        require(degrees[k] >= 2, ErrorCode::InvalidArgument, "interior degrees must be at least 2");
    }
    c.degrees.assign(degrees.begin(), degrees.end());
    const std::size_t n = c.n;
    const std::size_t states = 2 * n - 1;
    c.up.assign(states, 0.0);
    c.down.assign(states, 0.0);
    for (std::size_t x = 1; x <= states; ++x) {
        if (x < states) c.up[x - 1] = x >= n + 1 ? static_cast<double>(degrees[x - n] - 1) : 1.0;
        if (x > 1) c.down[x - 1] = x <= n - 1 ? static_cast<double>(degrees[n - x] - 1) : 1.0;
    }

    c.stationary.assign(states, 1.0);
    for (std::size_t i = 0; i + 1 < states; ++i) c.stationary[i + 1] = c.stationary[i] * c.up[i] / c.down[i + 1];
    double z = 0.0;
    for (double p : c.stationary) z += p;
    for (double& p : c.stationary) p /= z;

    bd_spectrum(c);
    return c;
}

void bd_spectrum(BDChain& c) {
    const std::size_t states = c.up.size();
    require(states >= 3, ErrorCode::InvalidArgument, "chain too small");
    Eigen::VectorXd diag(static_cast<Eigen::Index>(states));
    Eigen::VectorXd off(static_cast<Eigen::Index>(states - 1));
    for (std::size_t i = 0; i < states; ++i) diag[static_cast<Eigen::Index>(i)] = c.up[i] + c.down[i];
    for (std::size_t i = 0; i + 1 < states; ++i) off[static_cast<Eigen::Index>(i)] = -std::sqrt(c.up[i] * c.down[i + 1]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    require(solver.info() == Eigen::Success, ErrorCode::NotConverged, "tridiagonal eigensolver failed");
    c.gap = solver.eigenvalues()[1];

    std::vector<double> g(states);
    for (std::size_t i = 0; i < states; ++i) g[i] = solver.eigenvectors()(static_cast<Eigen::Index>(i), 1) / std::sqrt(c.stationary[i]);

    const double scale = max_abs(g);
    double asym = 0.0;
    for (std::size_t i = 0; i < states; ++i) asym = std::max(asym, std::abs(g[i] + g[states - 1 - i]));
    c.antisymmetrized = asym > 1e-10 * scale;
    if (c.antisymmetrized) {
        std::vector<double> h(states);
        for (std::size_t i = 0; i < states; ++i) h[i] = g[i] - g[states - 1 - i];
        require(max_abs(h) > 1e-10 * scale, ErrorCode::AntisymmetrizationFailed,
                "gap eigenfunction is symmetric; g - reversed(g) vanishes");
        g = std::move(h);
    }
    // unit sup norm, positive at state 1
    const double norm = max_abs(g) * (g.front() < 0.0 ? -1.0 : 1.0);
    for (double& x : g) x /= norm;
    g[states / 2] = 0.0;  // exact by antisymmetry
    c.eigenfunction = std::move(g);
}

double detailed_balance_residual(const BDChain& c) {
    double r = 0.0;
    for (std::size_t i = 0; i + 1 < c.up.size(); ++i) {
        r = std::max(r, std::abs(c.stationary[i] * c.up[i] - c.stationary[i + 1] * c.down[i + 1]));
    }
    return r;
}

std::vector<std::size_t> level_degrees(const RootedTree& tree) {
    const auto m = compute_metrics(tree);
    std::vector<std::size_t> deg(m.height, 0);
    std::vector<char> set(m.height, 0);
    for (std::size_t v = 0; v < tree.size(); ++v) {
        const std::size_t d = m.depth[v];
        if (d == m.height) {
            require(tree.child_count(static_cast<Vertex>(v)) == 0, ErrorCode::DegreeMismatch, "deepest level must consist of leaves");
            continue;
        }
        if (!set[d]) {
            deg[d] = m.degree[v];
            set[d] = 1;
        }
        require(deg[d] == m.degree[v], ErrorCode::DegreeMismatch, "tree is not spherically symmetric (level " + std::to_string(d) + ")");
    }
    return deg;
}

TreeProjection project_tree(const RootedTree& tree) {
    Vertex b = tree.root();
    std::size_t stripped = 0;
    while (tree.child_count(b) == 1) {
        b = tree.children(b)[0];
        ++stripped;
    }
    require(tree.child_count(b) >= 2, ErrorCode::InvalidArgument, "tree has no branching point");

    std::vector<Vertex> keep;
    std::vector<Vertex> stack{b};
    while (!stack.empty()) {
        const Vertex v = stack.back();
        stack.pop_back();
        keep.push_back(v);
        for (Vertex c : tree.children(v)) stack.push_back(c);
    }
    std::sort(keep.begin(), keep.end());
    std::vector<Vertex> original;
    auto sub = induced_subtree(tree, keep, b, &original);
    const auto degrees = level_degrees(sub);
    auto chain = project(degrees);
    return {std::move(sub), std::move(original), stripped, std::move(chain)};
}

Lift lift(const RootedTree& tree, const BDChain& chain) {
    const auto degrees = level_degrees(tree);
    require(degrees == chain.degrees, ErrorCode::DegreeMismatch, "tree degrees do not match the chain");
    require(tree.child_count(tree.root()) >= 2, ErrorCode::DegreeMismatch, "root needs at least two children to lift");
    const auto m = compute_metrics(tree);
    const std::size_t n = chain.n;

    Lift out;
    out.x1 = tree.children(tree.root())[0];
    out.x2 = tree.children(tree.root())[1];
    out.F.assign(tree.size(), 0.0);
    // branch[v] = the root child whose subtree contains v
    std::vector<Vertex> branch(tree.size(), kNoVertex);
    for (Vertex v : tree.bfs_order()) {
        if (v == tree.root()) continue;
        const Vertex p = tree.parent(v);
        branch[idx(v)] = p == tree.root() ? v : branch[idx(p)];
        const std::size_t d = m.depth[idx(v)];
        if (branch[idx(v)] == out.x1) out.F[idx(v)] = chain.eigenfunction[n - d - 1];
        if (branch[idx(v)] == out.x2) out.F[idx(v)] = chain.eigenfunction[n + d - 1];
    }

    for (std::size_t v = 0; v < tree.size(); ++v) {
        double lf = 0.0;
        for (Vertex w : tree.neighbors(static_cast<Vertex>(v))) lf += out.F[idx(w)] - out.F[v];
        out.residual = std::max(out.residual, std::abs(lf + chain.gap * out.F[v]));
    }
    return out;
}

double cs_lower_bound(const BDChain& chain, std::size_t max_degree) {
    require(max_degree >= 1, ErrorCode::InvalidArgument, "maximum degree must be positive");
    double s = 0.0;
    for (std::size_t i = 0; i < chain.n; ++i) s += 1.0 / chain.stationary[i];
    return s / (16.0 * static_cast<double>(max_degree));
}

}  // namespace treecut

#include "treecut/spectral.hpp"

#include "treecut/center_of_mass.hpp"
#include "treecut/error.hpp"
#include "treecut/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace treecut {

namespace {

std::size_t idx(Vertex v) { return static_cast<std::size_t>(v); }

void require_dense(std::size_t n, const char* what) {
    const std::size_t cap = dense_vertex_cap();
    if (n > cap) {
        fail(ErrorCode::SizeOverCap, std::string(what) + ": " + std::to_string(n) + " vertices exceeds the dense cap " + std::to_string(cap) +
                                         " (set TREECUT_MAX_VERTICES to raise it)");
    }
}

}  // namespace

Eigen::MatrixXd laplacian(const RootedTree& tree) {
    const auto n = static_cast<Eigen::Index>(tree.size());
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
    for (Vertex v = 0; v < static_cast<Vertex>(n); ++v) {
        q(v, v) = static_cast<double>(tree.degree(v));
        if (v == tree.root()) continue;
        q(v, tree.parent(v)) = -1.0;
        q(tree.parent(v), v) = -1.0;
    }
    return q;
}

Eigensystem eigensystem(const RootedTree& tree) {
    require_dense(tree.size(), "eigensystem");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian(tree));
    require(solver.info() == Eigen::Success, ErrorCode::NotConverged, "symmetric eigensolver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

SpectrumResult spectrum_from(const Eigensystem& system) {
    require(system.values.size() >= 2, ErrorCode::UndefinedGap, "spectral gap undefined for a single vertex");
    SpectrumResult out;
    out.eigenvalues.assign(system.values.begin(), system.values.end());
    out.gap = out.eigenvalues[1];
    out.t_rel = 1.0 / out.gap;
    return out;
}

SpectrumResult spectrum(const RootedTree& tree) {
    require(tree.size() >= 2, ErrorCode::UndefinedGap, "spectral gap undefined for a single vertex");
    require_dense(tree.size(), "spectrum");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian(tree), Eigen::EigenvaluesOnly);
    require(solver.info() == Eigen::Success, ErrorCode::NotConverged, "symmetric eigensolver failed");
    return spectrum_from({solver.eigenvalues(), {}});
}

GapEstimate iterative_gap(const RootedTree& tree, const LanczosOptions& options) {
    require(tree.size() >= 2, ErrorCode::UndefinedGap, "spectral gap undefined for a single vertex");
    LanczosOptions opts = options;
    opts.deflate_constants = true;
    const auto res = lanczos_top(tree.size(), [&](const Eigen::VectorXd& x) { return laplacian_pseudo_solve(tree, x); }, opts);
    GapEstimate out;
    out.t_rel = res.value;
    out.gap = 1.0 / res.value;
    out.iterations = res.iterations;
    out.residual = res.residual;
    return out;
}

double rayleigh(const RootedTree& tree, std::span<const double> f) {
    const std::size_t n = tree.size();
    require(f.size() == n, ErrorCode::InvalidArgument, "function must have one value per vertex");
    double mean = 0.0;
    for (double x : f) mean += x;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double x : f) var += (x - mean) * (x - mean);
    var /= static_cast<double>(n);
    require(var > 0.0, ErrorCode::DegenerateVariance, "Rayleigh quotient of a constant function");
    double dirichlet = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
        if (static_cast<Vertex>(v) == tree.root()) continue;
        const double d = f[v] - f[idx(tree.parent(static_cast<Vertex>(v)))];
        dirichlet += d * d;
    }
    dirichlet /= static_cast<double>(n);
    return dirichlet / var;
}

// ---------------------------------------------------------------------------

double hardy_constant(const RootedTree& tree, std::span<const Vertex> part) {
    const std::size_t n = tree.size();
    std::vector<char> in(n, 0);
    for (Vertex v : part) {
        require(v >= 0 && idx(v) < n, ErrorCode::IndexOutOfRange, "part vertex out of range");
        in[idx(v)] = 1;
    }
    require(in[idx(tree.root())], ErrorCode::InvalidArgument, "part must contain the root");
    for (Vertex v : part) {
        require(v == tree.root() || in[idx(tree.parent(v))], ErrorCode::InvalidArgument, "part must be a subtree containing the root");
    }

    // Part vertices in BFS order; size of T_e within the part.
    std::vector<Vertex> order;
    for (Vertex v : tree.bfs_order()) {
        if (in[idx(v)]) order.push_back(v);
    }
    std::vector<double> size(n, 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        size[idx(*it)] += 1.0;
        if (*it != tree.root()) size[idx(tree.parent(*it))] += size[idx(*it)];
    }
    const std::size_t m = order.size() - 1;  // edges of the part
    if (m == 0) return 0.0;

    std::vector<std::size_t> column(n, 0);  // edge (lower endpoint) -> column
    for (std::size_t i = 1; i < order.size(); ++i) column[idx(order[i])] = i - 1;

    if (m + 1 <= dense_vertex_cap()) {
        // (M^T M)(e, f) = |T_deeper ∩ part| for comparable e, f, else 0.
        Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
        for (std::size_t i = 1; i < order.size(); ++i) {
            const Vertex e = order[i];
            const auto ce = static_cast<Eigen::Index>(column[idx(e)]);
            for (Vertex f = e; f != tree.root(); f = tree.parent(f)) {
                const auto cf = static_cast<Eigen::Index>(column[idx(f)]);
                gram(ce, cf) = gram(cf, ce) = size[idx(e)];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
        require(solver.info() == Eigen::Success, ErrorCode::NotConverged, "Hardy eigensolver failed");
        return solver.eigenvalues()[static_cast<Eigen::Index>(m) - 1];
    }

    // Matrix-free: M g is a prefix sum down the part, M^T h a subtree sum.
    auto apply = [&](const Eigen::VectorXd& g) {
        std::vector<double> prefix(n, 0.0);
        for (std::size_t i = 1; i < order.size(); ++i) {
            const Vertex v = order[i];
            prefix[idx(v)] = prefix[idx(tree.parent(v))] + g[static_cast<Eigen::Index>(column[idx(v)])];
        }
        std::vector<double> below(n, 0.0);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            below[idx(*it)] += prefix[idx(*it)];
            if (*it != tree.root()) below[idx(tree.parent(*it))] += below[idx(*it)];
        }
        Eigen::VectorXd out(static_cast<Eigen::Index>(m));
        for (std::size_t i = 1; i < order.size(); ++i) out[static_cast<Eigen::Index>(i - 1)] = below[idx(order[i])];
        return out;
    };
    return lanczos_top(m, apply).value;
}

HardyCertificate hardy_interval(const RootedTree& tree) {
    require(tree.size() >= 2, ErrorCode::UndefinedGap, "Hardy interval undefined for a single vertex");
    const auto com = center_of_mass(tree);
    const auto rooted = reroot(tree, com.vertex);
    HardyCertificate out;
    out.center = com.vertex;
    out.delta = com.delta;
    out.a_part_a = hardy_constant(rooted, com.part_a);
    out.a_part_b = hardy_constant(rooted, com.part_b);
    out.A = std::max(out.a_part_a, out.a_part_b);
    out.gap_lower = 1.0 / out.A;
    out.gap_upper = 1.0 / (out.delta * out.A);
    out.t_rel_lower = out.delta * out.A;
    out.t_rel_upper = out.A;
    return out;
}

HardyLower hardy_lower(const RootedTree& tree) {
    HardyLower out;
    const auto com = center_of_mass(tree);
    out.center = com.vertex;
    out.delta = com.delta;
    if (tree.size() == 1) return out;

    const auto rooted = reroot(tree, com.vertex);
    const auto m = compute_metrics(rooted);
    const auto load = max_edge_load(m);
    out.max_edge_load = load.value;
    out.edge = load.edge;
    out.bound = com.delta * static_cast<double>(load.value);

    const auto depth = m.depth[idx(load.edge)];
    out.g_value = 1.0 / static_cast<double>(depth);
    for (Vertex u = load.edge; u != rooted.root(); u = rooted.parent(u)) out.path.push_back(u);
    std::reverse(out.path.begin(), out.path.end());

    // Evaluate both sides of the Hardy inequality for g explicitly.
    std::vector<double> g(rooted.size(), 0.0);
    for (Vertex u : out.path) g[idx(u)] = out.g_value;
    std::vector<double> prefix(rooted.size(), 0.0);
    for (Vertex v : rooted.bfs_order()) {
        if (v == rooted.root()) continue;
        prefix[idx(v)] = prefix[idx(rooted.parent(v))] + g[idx(v)];
    }
    for (double p : prefix) out.lhs += p * p;
    for (double x : g) out.rhs += x * x;
    return out;
}

// ---------------------------------------------------------------------------

std::vector<double> edge_weights(const RootedTree& tree, const WeightScheme& scheme) {
    const std::size_t n = tree.size();
    const auto m = compute_metrics(tree);
    std::vector<double> a(n, 0.0);
    switch (scheme.kind) {
        case WeightScheme::Kind::Subtree:
            for (std::size_t v = 0; v < n; ++v) a[v] = static_cast<double>(m.subtree_size[v]);
            break;
        case WeightScheme::Kind::InverseDepth:
            for (std::size_t v = 0; v < n; ++v) a[v] = m.depth[v] ? 1.0 / static_cast<double>(m.depth[v]) : 0.0;
            break;
        case WeightScheme::Kind::ReciprocalF:
            require(static_cast<bool>(scheme.f), ErrorCode::InvalidArgument, "reciprocal-f scheme needs a function");
            for (std::size_t v = 0; v < n; ++v) a[v] = m.depth[v] ? 1.0 / scheme.f(m.depth[v]) : 0.0;
            break;
        case WeightScheme::Kind::Retraction: {
            const Vertex end = scheme.spine_end;
            require(end >= 0 && idx(end) < n, ErrorCode::IndexOutOfRange, "retraction scheme needs a spine vertex");
            require(end != tree.root(), ErrorCode::InvalidArgument, "retraction spine vertex must differ from the root");
            std::vector<char> spine(n, 0);
            for (Vertex u = end; u != kNoVertex; u = tree.parent(u)) spine[idx(u)] = 1;
            // attach[u] = distance of the spine vertex that u hangs from
            std::vector<std::size_t> attach(n, 0);
            for (Vertex v : tree.bfs_order()) {
                if (v == tree.root()) continue;
                const auto i = idx(v);
                attach[i] = spine[i] ? m.depth[i] : attach[idx(tree.parent(v))];
                if (spine[i]) {
                    a[i] = 1.0 / std::sqrt(static_cast<double>(m.depth[i]));
                } else {
                    const double step = static_cast<double>(m.depth[i] - attach[i]);
                    a[i] = 1.0 / (std::sqrt(static_cast<double>(std::max<std::size_t>(attach[i], 1))) * step * step);
                }
            }
            break;
        }
        case WeightScheme::Kind::Custom:
            require(scheme.custom.size() == n, ErrorCode::InvalidArgument, "custom weights need one entry per vertex");
            a = scheme.custom;
            break;
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (static_cast<Vertex>(v) == tree.root()) continue;
        require(a[v] > 0.0 && std::isfinite(a[v]), ErrorCode::InvalidArgument, "edge weights must be positive");
    }
    return a;
}

double weighted_path_bound(const RootedTree& tree, const WeightScheme& scheme) {
    const std::size_t n = tree.size();
    if (n == 1) return 0.0;
    const auto a = edge_weights(tree, scheme);
    std::vector<double> prefix(n, 0.0);
    const auto order = tree.bfs_order();
    for (Vertex v : order) {
        if (v == tree.root()) continue;
        prefix[idx(v)] = prefix[idx(tree.parent(v))] + a[idx(v)];
    }
    std::vector<double> below(prefix);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (*it != tree.root()) below[idx(tree.parent(*it))] += below[idx(*it)];
    }
    double best = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
        if (static_cast<Vertex>(v) == tree.root()) continue;
        best = std::max(best, below[v] / a[v]);
    }
    return best;
}

double bound_cor24(const RootedTree& tree) {
    if (tree.size() == 1) return 0.0;
    const auto m = compute_metrics(tree);
    return (std::log(static_cast<double>(m.diameter)) + 1.0) * static_cast<double>(max_edge_load(m).value);
}

Cor25Bound bound_cor25(const RootedTree& tree, const std::function<double(std::size_t)>& f) {
    Cor25Bound out;
    const auto m = compute_metrics(tree);
    for (std::size_t k = 1; k <= m.height; ++k) {
        const double fk = f(k);
        require(fk > 0.0 && std::isfinite(fk), ErrorCode::InvalidArgument, "f must be positive");
        out.constant += 1.0 / fk;
    }
    double best = 0.0;
    for (std::size_t v = 0; v < tree.size(); ++v) {
        if (m.depth[v] == 0) continue;
        best = std::max(best, f(m.depth[v]) * static_cast<double>(m.subtree_size[v]));
    }
    out.bound = out.constant * best;
    return out;
}

double bound_cor26(const RootedTree& tree) { return static_cast<double>(max_path_load(compute_metrics(tree)).value); }

double bound_tail32(const RootedTree& tree) { return 32.0 * static_cast<double>(tail_profile(compute_metrics(tree)).max); }

BoundsReport all_bounds(const RootedTree& tree) {
    BoundsReport r;
    r.hardy_lower = hardy_lower(tree);
    r.hardy_interval = hardy_interval(tree);
    r.cor24 = bound_cor24(tree);
    r.cor24_weighted = weighted_path_bound(tree, WeightScheme::inverse_depth());
    r.cor25 = bound_cor25(tree, [](std::size_t k) { return static_cast<double>(k) * static_cast<double>(k); });
    r.cor26 = bound_cor26(tree);
    r.tail32 = bound_tail32(tree);
    r.min_upper = std::min({r.cor24, r.cor24_weighted, r.cor25.bound, r.cor26, r.tail32, r.hardy_interval.t_rel_upper});
    return r;
}

// ---------------------------------------------------------------------------

NuResult nu_exact(const RootedTree& tree, std::span<const Vertex> B) {
    const std::size_t k = B.size();
    require(k >= 1, ErrorCode::InvalidArgument, "B must be nonempty");
    require(k <= 12, ErrorCode::SizeOverCap, "nu_exact enumerates 2^|B| active sets; |B| <= 12");
    for (Vertex v : B) {
        require(v >= 0 && idx(v) < tree.size(), ErrorCode::IndexOutOfRange, "B vertex out of range");
        require(v != tree.root(), ErrorCode::InvalidArgument, "B must not contain the root");
    }
    std::vector<Vertex> b(B.begin(), B.end());
    std::sort(b.begin(), b.end());
    require(std::adjacent_find(b.begin(), b.end()) == b.end(), ErrorCode::InvalidArgument, "B has repeated vertices");

    const auto m = compute_metrics(tree);
    // G(u, v) = |l(u) ∩ l(v)| = depth of the lowest common ancestor.
    auto lca_depth = [&](Vertex u, Vertex v) {
        while (m.depth[idx(u)] > m.depth[idx(v)]) u = tree.parent(u);
        while (m.depth[idx(v)] > m.depth[idx(u)]) v = tree.parent(v);
        while (u != v) {
            u = tree.parent(u);
            v = tree.parent(v);
        }
        return static_cast<double>(m.depth[idx(u)]);
    };
    Eigen::MatrixXd G(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= i; ++j) G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = G(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = lca_depth(b[i], b[j]);
    }

    constexpr double kFeasTol = 1e-12;
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> best_set;
    Eigen::VectorXd best_y;
    for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
        std::vector<std::size_t> set;
        for (std::size_t i = 0; i < k; ++i) {
            if (mask & (1u << i)) set.push_back(i);
        }
        const auto s = static_cast<Eigen::Index>(set.size());
        Eigen::MatrixXd gs(s, s);
        for (Eigen::Index i = 0; i < s; ++i) {
            for (Eigen::Index j = 0; j < s; ++j) gs(i, j) = G(static_cast<Eigen::Index>(set[static_cast<std::size_t>(i)]), static_cast<Eigen::Index>(set[static_cast<std::size_t>(j)]));
        }
        const Eigen::VectorXd y = gs.ldlt().solve(Eigen::VectorXd::Ones(s));
        const double value = y.sum();
        if (value >= best) continue;
        bool feasible = true;
        for (std::size_t v = 0; v < k && feasible; ++v) {
            double lhs = 0.0;
            for (Eigen::Index i = 0; i < s; ++i) lhs += y[i] * G(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(set[static_cast<std::size_t>(i)]));
            feasible = lhs >= 1.0 - kFeasTol;
        }
        if (!feasible) continue;
        best = value;
        best_set = set;
        best_y = y;
    }

    NuResult out;
    out.value = best;
    out.f.assign(tree.size(), 0.0);
    for (std::size_t i = 0; i < best_set.size(); ++i) {
        const Vertex u = b[best_set[i]];
        out.active.push_back(u);
        for (Vertex w = u; w != tree.root(); w = tree.parent(w)) out.f[idx(w)] += best_y[static_cast<Eigen::Index>(i)];
    }
    return out;
}

}  // namespace treecut

#include "treecut/linalg.hpp"

#include "treecut/error.hpp"
#include "treecut/rng.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <deque>

namespace treecut {

std::size_t dense_vertex_cap() {
    constexpr std::size_t kDefault = 4096;
    const char* env = std::getenv("TREECUT_MAX_VERTICES");
    if (env == nullptr || *env == '\0') return kDefault;
    std::size_t value = 0;
    const char* end = env + std::strlen(env);
    const auto [ptr, ec] = std::from_chars(env, end, value);
    require(ec == std::errc() && ptr == end && value > 0, ErrorCode::InvalidArgument,
            std::string("TREECUT_MAX_VERTICES must be a positive integer, got '") + env + "'");
    return value;
}

Eigen::VectorXd grounded_solve(const RootedTree& tree, Vertex ground, const Eigen::VectorXd& rhs) {
    const std::size_t n = tree.size();
    require(ground >= 0 && static_cast<std::size_t>(ground) < n, ErrorCode::IndexOutOfRange, "ground vertex out of range");
    require(static_cast<std::size_t>(rhs.size()) == n, ErrorCode::InvalidArgument, "right-hand side has wrong length");

    // Orient the tree toward the ground vertex.
    std::vector<Vertex> up(n, kNoVertex);
    std::vector<Vertex> order;
    order.reserve(n);
    std::vector<char> seen(n, 0);
    std::deque<Vertex> queue{ground};
    seen[static_cast<std::size_t>(ground)] = 1;
    while (!queue.empty()) {
        const Vertex v = queue.front();
        queue.pop_front();
        order.push_back(v);
        for (Vertex w : tree.neighbors(v)) {
            if (seen[static_cast<std::size_t>(w)]) continue;
            seen[static_cast<std::size_t>(w)] = 1;
            up[static_cast<std::size_t>(w)] = v;
            queue.push_back(w);
        }
    }

    // x_v = alpha_v + beta_v x_up(v), eliminated from the leaves upward.
    std::vector<double> alpha(n, 0.0), beta(n, 0.0), pivot(n, 0.0), carry(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) pivot[i] = static_cast<double>(tree.degree(static_cast<Vertex>(i)));
    for (std::size_t i = 0; i < n; ++i) carry[i] = rhs[static_cast<Eigen::Index>(i)];
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const auto v = static_cast<std::size_t>(*it);
        if (*it == ground) continue;
        alpha[v] = carry[v] / pivot[v];
        beta[v] = 1.0 / pivot[v];
        const auto p = static_cast<std::size_t>(up[v]);
        carry[p] += alpha[v];
        pivot[p] -= beta[v];
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (Vertex v : order) {
        if (v == ground) continue;
        const auto i = static_cast<std::size_t>(v);
        x[v] = alpha[i] + beta[i] * x[up[i]];
    }
    return x;
}

Eigen::VectorXd laplacian_pseudo_solve(const RootedTree& tree, const Eigen::VectorXd& rhs) {
    const Eigen::VectorXd b = rhs.array() - rhs.mean();
    Eigen::VectorXd x = grounded_solve(tree, tree.root(), b);
    x.array() -= x.mean();
    return x;
}

LanczosResult lanczos_top(std::size_t dim, const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                          const LanczosOptions& options) {
    require(dim >= 1, ErrorCode::InvalidArgument, "Lanczos needs a nonempty operator");
    const auto n = static_cast<Eigen::Index>(dim);
    auto deflate = [&](Eigen::VectorXd& v) {
        if (options.deflate_constants) v.array() -= v.mean();
    };

    Eigen::VectorXd q(n);
    SplitMix64 rng(options.seed);
    for (Eigen::Index i = 0; i < n; ++i) q[i] = rng.uniform() - 0.5;
    deflate(q);
    require(q.norm() > 0.0, ErrorCode::InvalidArgument, "Lanczos start vector vanished (operator of dimension 1 after deflation?)");
    q.normalize();

    const std::size_t max_k = std::min<std::size_t>(options.max_iterations, dim);
    Eigen::MatrixXd basis(n, static_cast<Eigen::Index>(max_k));
    std::vector<double> diag, offdiag;
    LanczosResult out;
    double previous = 0.0;

    for (std::size_t k = 0; k < max_k; ++k) {
        basis.col(static_cast<Eigen::Index>(k)) = q;
        Eigen::VectorXd w = apply(q);
        deflate(w);
        const double a = q.dot(w);
        diag.push_back(a);
        // full reorthogonalisation (twice is enough)
        const auto cols = basis.leftCols(static_cast<Eigen::Index>(k + 1));
        for (int pass = 0; pass < 2; ++pass) w -= cols * (cols.transpose() * w);
        const double b = w.norm();

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
        Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(diag.data(), static_cast<Eigen::Index>(diag.size()));
        Eigen::VectorXd e = offdiag.empty() ? Eigen::VectorXd() : Eigen::Map<Eigen::VectorXd>(offdiag.data(), static_cast<Eigen::Index>(offdiag.size()));
        tri.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
        const Eigen::Index top = d.size() - 1;
        const double theta = tri.eigenvalues()[top];
        const double ritz_residual = std::abs(b * tri.eigenvectors()(top, top));

        out.iterations = k + 1;
        const bool exhausted = b <= 1e-14 * std::max(1.0, std::abs(theta)) || k + 1 == dim;
        if (exhausted || (k >= 2 && ritz_residual <= options.tolerance * std::abs(theta) &&
                          std::abs(theta - previous) <= options.tolerance * std::abs(theta))) {
            out.value = theta;
            out.vector = cols * tri.eigenvectors().col(top);
            out.vector.normalize();
            Eigen::VectorXd r = apply(out.vector);
            deflate(r);
            out.residual = (r - theta * out.vector).norm();
            out.converged = true;
            return out;
        }
        previous = theta;
        offdiag.push_back(b);
        q = w / b;
    }
    fail(ErrorCode::NotConverged, "Lanczos did not converge in " + std::to_string(max_k) + " iterations");
}

}  // namespace treecut

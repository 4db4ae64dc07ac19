#include "treecut/mixing.hpp"

#include "treecut/center_of_mass.hpp"
#include "treecut/error.hpp"
#include "treecut/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace treecut {

namespace {

constexpr double kRelTol = 1e-8;

void require_time(double t) {
    require(t >= 0.0 && std::isfinite(t), ErrorCode::InvalidArgument, "time must be finite and nonnegative");
}

// Below this a mode cannot affect any reportable distance; zeroing it keeps
// the products out of the (very slow) subnormal range.
constexpr double kNegligible = 1e-200;

Eigen::VectorXd flush(Eigen::VectorXd v) {
    for (auto& x : v) {
        if (std::abs(x) < kNegligible) x = 0.0;
    }
    return v;
}

// Coefficients e^{-t lambda_k} for the non-constant modes k = 1..n-1.
Eigen::VectorXd decay(const Eigensystem& s, double t) {
    const Eigen::Index n = s.values.size();
    return flush((-t * s.values.tail(n - 1).array()).exp().matrix());
}

}  // namespace

HeatKernel::HeatKernel(const RootedTree& tree) : system_(eigensystem(tree)) {}

HeatKernel::HeatKernel(Eigensystem system) : system_(std::move(system)) {
    require(system_.values.size() >= 1 && system_.vectors.rows() == system_.values.size() && system_.vectors.cols() == system_.values.size(),
            ErrorCode::InvalidArgument, "heat kernel needs a full eigensystem");
}

double HeatKernel::t_rel() const { return spectrum_from(system_).t_rel; }

Eigen::VectorXd HeatKernel::row(Vertex x, double t) const {
    require_time(t);
    const Eigen::Index n = system_.values.size();
    require(x >= 0 && x < n, ErrorCode::IndexOutOfRange, "start vertex out of range");
    Eigen::VectorXd out = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    if (n == 1) return out;
    const auto modes = system_.vectors.rightCols(n - 1);
    const Eigen::VectorXd c = flush(decay(system_, t).cwiseProduct(modes.row(x).transpose()));
    out += modes * c;
    return out;
}

double HeatKernel::distance_from(Vertex x, double t) const {
    require_time(t);
    const Eigen::Index n = system_.values.size();
    require(x >= 0 && x < n, ErrorCode::IndexOutOfRange, "start vertex out of range");
    if (t == 0.0) return 1.0 - 1.0 / static_cast<double>(n);
    if (n == 1) return 0.0;
    // Only the non-constant modes: P_t(x, .) - 1/n without cancellation.
    const auto modes = system_.vectors.rightCols(n - 1);
    const Eigen::VectorXd c = flush(decay(system_, t).cwiseProduct(modes.row(x).transpose()));
    return 0.5 * (modes * c).lpNorm<1>();
}

double HeatKernel::distance(double t, Vertex* worst) const {
    require_time(t);
    const Eigen::Index n = system_.values.size();
    if (t == 0.0 || n == 1) {
        if (worst) *worst = 0;
        return n == 1 ? 0.0 : 1.0 - 1.0 / static_cast<double>(n);
    }
    const auto modes = system_.vectors.rightCols(n - 1);
    const Eigen::MatrixXd scaled = modes * decay(system_, t).asDiagonal();
    const Eigen::MatrixXd diff = scaled * modes.transpose();
    Eigen::Index arg = 0;
    const double best = diff.cwiseAbs().rowwise().sum().maxCoeff(&arg);
    if (worst) *worst = static_cast<Vertex>(arg);
    return 0.5 * best;
}

double mixing_time_from(const HeatKernel& kernel, Vertex x, double epsilon) {
    require(epsilon > 0.0 && epsilon < 1.0, ErrorCode::InvalidArgument, "epsilon must lie in (0,1)");
    if (kernel.distance_from(x, 0.0) <= epsilon) return 0.0;
    double lo = 0.0;
    double hi = kernel.t_rel();
    while (kernel.distance_from(x, hi) > epsilon) {
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > kRelTol * hi) {
        const double mid = 0.5 * (lo + hi);
        (kernel.distance_from(x, mid) > epsilon ? lo : hi) = mid;
    }
    return hi;
}

MixingResult mixing_time(const HeatKernel& kernel, double epsilon) {
    require(epsilon > 0.0 && epsilon < 1.0, ErrorCode::InvalidArgument, "epsilon must lie in (0,1)");
    MixingResult out;
    out.epsilon = epsilon;
    const std::size_t n = kernel.size();
    out.worst_start = 0;
    if (n == 1 || epsilon >= 1.0 - 1.0 / static_cast<double>(n)) return out;

    // t_mix = max_x t_x since each start's distance is non-increasing in t.
    // Visit likely-worst starts first so most rows are dismissed by a single
    // evaluation at the running maximum.
    const double t_rel = kernel.t_rel();
    const auto& s = kernel.system();
    const Eigen::Index nn = s.values.size();
    const auto modes = s.vectors.rightCols(nn - 1);
    const Eigen::MatrixXd at_rel = (modes * decay(s, t_rel).asDiagonal()) * modes.transpose();
    const Eigen::VectorXd score = at_rel.cwiseAbs().rowwise().sum();
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return score[a] > score[b]; });

    double best = 0.0;
    for (Vertex x : order) {
        if (best > 0.0 && kernel.distance_from(x, best) <= epsilon) continue;
        // Starts symmetric to an earlier one differ only by rounding; their
        // t_x lies within the bisection tolerance of the running maximum.
        if (best > 0.0 && kernel.distance_from(x, best * (1.0 + kRelTol)) <= epsilon) continue;
        double lo = best;
        double hi = std::max(2.0 * lo, t_rel);
        while (kernel.distance_from(x, hi) > epsilon) {
            lo = hi;
            hi *= 2.0;
        }
        while (hi - lo > kRelTol * hi) {
            const double mid = 0.5 * (lo + hi);
            (kernel.distance_from(x, mid) > epsilon ? lo : hi) = mid;
        }
        best = hi;
        out.worst_start = x;
    }
    out.t_mix = best;
    return out;
}

MixingResult mixing_time(const RootedTree& tree, double epsilon) { return mixing_time(HeatKernel(tree), epsilon); }

std::vector<TvSample> tv_curve(const HeatKernel& kernel, double t_max, std::size_t samples, Vertex start) {
    require_time(t_max);
    require(samples >= 2, ErrorCode::InvalidArgument, "a curve needs at least two samples");
    std::vector<TvSample> out(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = t_max * static_cast<double>(i) / static_cast<double>(samples - 1);
        out[i] = {t, start == kNoVertex ? kernel.distance(t) : kernel.distance_from(start, t)};
    }
    return out;
}

// ---------------------------------------------------------------------------

HittingProfile hitting_profile(const RootedTree& tree, Vertex target) {
    const auto n = static_cast<Eigen::Index>(tree.size());
    HittingProfile out;
    out.target = target;
    const Eigen::VectorXd h = grounded_solve(tree, target, Eigen::VectorXd::Ones(n));
    out.expected.assign(h.begin(), h.end());
    out.max_vertex = target;
    for (Eigen::Index v = 0; v < n; ++v) {
        if (h[v] > out.max) {
            out.max = h[v];
            out.max_vertex = static_cast<Vertex>(v);
        }
    }
    return out;
}

Prop31Report mixing_upper_prop31(const RootedTree& tree) {
    Prop31Report r;
    if (tree.size() == 1) return r;
    const auto m = compute_metrics(tree);
    r.max_hitting = hitting_profile(tree, tree.root()).max;
    r.twice_max_path_load = 2.0 * static_cast<double>(max_path_load(m).value);
    r.size_times_diameter = static_cast<double>(tree.size()) * static_cast<double>(m.diameter);
    return r;
}

Prop32Report mixing_lower_prop32(const RootedTree& tree, double epsilon) {
    require(epsilon > 0.0 && epsilon < 1.0, ErrorCode::InvalidArgument, "epsilon must lie in (0,1)");
    Prop32Report r;
    r.epsilon = epsilon;
    const auto at_root = split_at(tree, tree.root());
    RootedTree rooted = tree;
    if (at_root.delta >= epsilon) {
        r.delta = at_root.delta;
        r.root = tree.root();
    } else {
        const auto com = center_of_mass(tree);
        require(com.delta >= epsilon, ErrorCode::InvalidArgument,
                "epsilon exceeds the center-of-mass delta " + std::to_string(com.delta));
        r.delta = com.delta;
        r.root = com.vertex;
        r.rerooted = true;
        rooted = reroot(tree, com.vertex);
    }
    if (tree.size() == 1) return r;
    const auto m = compute_metrics(rooted);
    r.max_hitting = hitting_profile(rooted, rooted.root()).max;
    r.max_path_load = max_path_load(m).value;
    r.max_degree = m.max_degree;
    r.hitting_bound = 0.5 * epsilon * r.max_hitting;
    r.path_bound = epsilon / (2.0 * static_cast<double>(r.max_degree)) * static_cast<double>(r.max_path_load);
    return r;
}

}  // namespace treecut

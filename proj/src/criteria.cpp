#include "treecut/criteria.hpp"

#include "treecut/error.hpp"
#include "treecut/linalg.hpp"
#include "treecut/metrics.hpp"
#include "treecut/mixing.hpp"
#include "treecut/rng.hpp"
#include "treecut/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

namespace treecut {

namespace {

constexpr const char* kFamilies[] = {"segment", "star", "binary", "spherical", "cor15", "peres-sousi",
                                     "remark53", "gw", "gw-survival", "gw-size", "kesten"};

std::size_t idx(Vertex v) { return static_cast<std::size_t>(v); }

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Verdict trend(std::string quantity, std::span<const double> x, std::span<const double> y, double threshold) {
    Verdict v;
    v.quantity = std::move(quantity);
    v.threshold = threshold;
    if (x.size() < 4) {
        v.fit.points = x.size();
        v.verdict = "insufficient data";
        return v;
    }
    v.fit = loglog_fit(x, y);
    return v;
}

FamilyRow aggregate(const std::vector<FamilyRow>& reps) {
    if (reps.size() == 1) return reps.front();
    FamilyRow out;
    out.n = reps.front().n;
    out.replicates = reps.size();
    auto med = [&](auto field) {
        std::vector<double> v;
        for (const auto& r : reps) v.push_back(field(r));
        return median(std::move(v));
    };
    out.vertices = med([](const FamilyRow& r) { return r.vertices; });
    out.t_rel = med([](const FamilyRow& r) { return r.t_rel; });
    out.hardy_lower = med([](const FamilyRow& r) { return r.hardy_lower; });
    out.min_upper = med([](const FamilyRow& r) { return r.min_upper; });
    out.max_edge_load = med([](const FamilyRow& r) { return r.max_edge_load; });
    out.max_path_load = med([](const FamilyRow& r) { return r.max_path_load; });
    out.tail_max = med([](const FamilyRow& r) { return r.tail_max; });
    out.max_degree = med([](const FamilyRow& r) { return r.max_degree; });
    out.q13 = med([](const FamilyRow& r) { return r.q13; });
    out.q16 = med([](const FamilyRow& r) { return r.q16; });
    const bool exact = std::all_of(reps.begin(), reps.end(), [](const FamilyRow& r) { return r.t_mix.has_value(); });
    out.mode = exact ? "exact" : "bounded";
    if (exact) {
        out.t_mix = med([](const FamilyRow& r) { return *r.t_mix; });
        out.ratio = med([](const FamilyRow& r) { return *r.ratio; });
    }
    out.sandwich_ok = std::all_of(reps.begin(), reps.end(), [](const FamilyRow& r) { return r.sandwich_ok; });
    return out;
}

}  // namespace

std::span<const char* const> family_names() { return kFamilies; }

bool FamilySpec::random() const {
    return family == "gw" || family == "gw-survival" || family == "gw-size" || family == "kesten";
}

void FamilySpec::validate() const {
    const bool known = std::any_of(std::begin(kFamilies), std::end(kFamilies), [&](const char* f) { return family == f; });
    require(known, ErrorCode::InvalidArgument, "unknown family '" + family + "'");
    require(!random() || offspring.has_value(), ErrorCode::InvalidArgument, "family '" + family + "' needs an offspring distribution");
    require(family != "spherical" || !degrees.empty(), ErrorCode::InvalidArgument, "family 'spherical' needs degrees");
}

RootedTree make_family_member(const FamilySpec& spec, std::size_t size, std::uint64_t seed) {
    spec.validate();
    const auto& f = spec.family;
    if (f == "segment") return segment(size);
    if (f == "star") return star(size);
    if (f == "binary") return spherically_symmetric(binary_degrees(size));
    if (f == "remark53") return spherically_symmetric(sparse_branching_degrees(size));
    if (f == "spherical") {
        require(size <= spec.degrees.size(), ErrorCode::InvalidArgument, "truncation level exceeds the number of degrees given");
        return spherically_symmetric(std::span(spec.degrees).first(size));
    }
    if (f == "cor15") return corollary15_family(size);
    if (f == "peres-sousi") return peres_sousi(static_cast<unsigned>(size), spec.gw.vertex_cap);
    if (f == "gw") return gw_tree(*spec.offspring, size, seed, spec.gw);
    if (f == "gw-survival") return gw_survival_truncated(*spec.offspring, size, seed, spec.gw);
    if (f == "gw-size") return gw_conditioned_size(*spec.offspring, size, seed, spec.gw).tree;
    return kesten_tree(*spec.offspring, size, seed, spec.gw);
}

double product_ratio(const RootedTree& tree, double epsilon) {
    const HeatKernel kernel(tree);
    return mixing_time(kernel, epsilon).t_mix / kernel.t_rel();
}

LogLogFit loglog_fit(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size() && x.size() >= 2, ErrorCode::InvalidArgument, "log-log fit needs at least two paired points");
    const std::size_t k = x.size();
    std::vector<double> lx(k), ly(k);
    for (std::size_t i = 0; i < k; ++i) {
        require(x[i] > 0.0 && y[i] > 0.0, ErrorCode::InvalidArgument, "log-log fit needs positive data");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(k);
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(k);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    require(sxx > 0.0, ErrorCode::DegenerateVariance, "log-log fit needs at least two distinct sizes");
    LogLogFit fit;
    fit.points = k;
    fit.slope = sxy / sxx;
    fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

// ---------------------------------------------------------------------------

FamilyRow analyse(const RootedTree& tree, std::size_t n, double epsilon) {
    require(tree.size() >= 2, ErrorCode::UndefinedGap, "family member has a single vertex");
    FamilyRow row;
    row.n = n;
    row.vertices = static_cast<double>(tree.size());
    const auto m = compute_metrics(tree);
    row.max_edge_load = static_cast<double>(max_edge_load(m).value);
    row.max_path_load = static_cast<double>(max_path_load(m).value);
    row.tail_max = static_cast<double>(tail_profile(m).max);
    row.max_degree = static_cast<double>(m.max_degree);
    row.q13 = row.max_path_load / row.max_edge_load;
    row.q16 = row.max_degree * row.tail_max / row.max_path_load;

    const auto bounds = all_bounds(tree);
    row.hardy_lower = bounds.hardy_lower.bound;
    row.min_upper = bounds.min_upper;

    if (tree.size() <= dense_vertex_cap()) {
        const HeatKernel kernel(tree);
        row.mode = "exact";
        row.t_rel = kernel.t_rel();
        row.t_mix = mixing_time(kernel, epsilon).t_mix;
        row.ratio = *row.t_mix / row.t_rel;
    } else {
        row.mode = "bounded";
        row.t_rel = iterative_gap(tree).t_rel;
    }
    constexpr double kRel = 1e-8;
    row.sandwich_ok = row.hardy_lower <= row.t_rel * (1.0 + kRel) && row.t_rel <= row.min_upper * (1.0 + kRel);
    return row;
}

FamilyReport sweep(const FamilySpec& spec, std::span<const std::size_t> sizes, const SweepOptions& options) {
    spec.validate();
    require(!sizes.empty(), ErrorCode::InvalidArgument, "sweep needs at least one size");
    require(options.epsilon > 0.0 && options.epsilon < 1.0, ErrorCode::InvalidArgument, "epsilon must lie in (0,1)");
    std::vector<std::size_t> sorted(sizes.begin(), sizes.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    const std::size_t reps = spec.random() ? std::max<std::size_t>(options.replicates, 1) : 1;
    struct Task {
        std::size_t size;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    SplitMix64 stream(options.seed);
    for (std::size_t s : sorted) {
        for (std::size_t r = 0; r < reps; ++r) tasks.push_back({s, spec.random() ? stream.next() : options.seed});
    }

    std::vector<FamilyRow> results(tasks.size());
    std::vector<std::exception_ptr> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            try {
                results[i] = analyse(make_family_member(spec, tasks[i].size, tasks[i].seed), tasks[i].size, options.epsilon);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, tasks.size());
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    FamilyReport report;
    report.family = spec.family;
    report.epsilon = options.epsilon;
    report.seed = options.seed;
    for (std::size_t i = 0; i < tasks.size(); i += reps) {
        report.rows.push_back(aggregate({results.begin() + static_cast<std::ptrdiff_t>(i), results.begin() + static_cast<std::ptrdiff_t>(i + reps)}));
    }
    report.ratio_trend = check_ratio(report.rows, options.threshold);
    report.thm13 = check_thm13(report.rows, options.threshold);
    report.thm16 = check_thm16(report.rows, options.threshold);
    return report;
}

Verdict check_ratio(std::span<const FamilyRow> rows, double threshold) {
    std::vector<double> x, y;
    for (const auto& r : rows) {
        if (!r.ratio) continue;
        x.push_back(r.vertices);
        y.push_back(*r.ratio);
    }
    auto v = trend("t_mix/t_rel", x, y, threshold);
    if (v.verdict.empty()) v.verdict = v.fit.slope < threshold ? "consistent with no cutoff" : "ratio growing (cutoff-like)";
    return v;
}

Verdict check_thm13(std::span<const FamilyRow> rows, double threshold) {
    std::vector<double> x, y;
    for (const auto& r : rows) {
        x.push_back(r.vertices);
        y.push_back(r.q13);
    }
    auto v = trend("max_path_load/max_edge_load", x, y, threshold);
    if (v.verdict.empty()) v.verdict = v.fit.slope < threshold ? "consistent with no cutoff" : "criterion inapplicable";
    return v;
}

Verdict check_thm16(std::span<const FamilyRow> rows, double threshold) {
    std::vector<double> x, y;
    for (const auto& r : rows) {
        x.push_back(r.vertices);
        y.push_back(r.q16);
    }
    auto v = trend("max_degree*tail_max/max_path_load", x, y, threshold);
    if (v.verdict.empty()) v.verdict = v.fit.slope <= -threshold ? "cutoff predicted" : "criterion inconclusive";
    return v;
}

Thm14Report check_thm14(const RootedTree& tree, Vertex spine_end) {
    require(spine_end >= 0 && idx(spine_end) < tree.size(), ErrorCode::IndexOutOfRange, "spine vertex out of range");
    const auto m = compute_metrics(tree);
    Thm14Report r;
    r.spine_end = spine_end;
    r.spine_load = static_cast<double>(m.path_load[idx(spine_end)]);
    r.max_path_load = static_cast<double>(max_path_load(m).value);
    r.vertices = static_cast<double>(tree.size());
    for (Vertex u = spine_end; u != tree.root(); u = tree.parent(u)) {
        r.spine_edge_max = std::max(r.spine_edge_max, static_cast<double>(m.depth[idx(u)] * m.subtree_size[idx(u)]));
    }
    return r;
}

Thm14Trend thm14_trend(std::span<const Thm14Report> reports, double threshold) {
    std::vector<double> x, dom, cmp, hyp;
    for (const auto& r : reports) {
        x.push_back(r.vertices);
        dom.push_back(r.spine_load / r.vertices);
        cmp.push_back(r.spine_load / r.max_path_load);
        hyp.push_back(r.spine_edge_max / r.max_path_load);
    }
    Thm14Trend t;
    t.dominance = trend("spine_load/|V|", x, dom, threshold);
    if (t.dominance.verdict.empty()) t.dominance.verdict = t.dominance.fit.slope > threshold ? "growing" : "not growing";
    t.comparable = trend("spine_load/max_path_load", x, cmp, threshold);
    if (t.comparable.verdict.empty()) t.comparable.verdict = std::abs(t.comparable.fit.slope) < threshold ? "comparable" : "not comparable";
    t.hyperbolic = trend("spine_edge_max/max_path_load", x, hyp, threshold);
    if (t.hyperbolic.verdict.empty()) t.hyperbolic.verdict = t.hyperbolic.fit.slope < -threshold ? "decaying" : "not decaying";
    return t;
}

double retraction_alpha(const RootedTree& tree, Vertex spine_end) {
    require(spine_end >= 0 && idx(spine_end) < tree.size(), ErrorCode::IndexOutOfRange, "spine vertex out of range");
    const auto m = compute_metrics(tree);
    std::vector<char> spine(tree.size(), 0);
    for (Vertex u = spine_end; u != kNoVertex; u = tree.parent(u)) spine[idx(u)] = 1;
    // D(e) = |T_e| + max over child edges, bottom-up.
    std::vector<double> D(tree.size(), 0.0);
    const auto order = tree.bfs_order();
    double alpha = 1.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const auto v = idx(*it);
        double deepest = 0.0;
        for (Vertex c : tree.children(*it)) deepest = std::max(deepest, D[idx(c)]);
        D[v] = static_cast<double>(m.subtree_size[v]) + deepest;
        if (*it != tree.root() && !spine[v]) alpha = std::max(alpha, D[v] / static_cast<double>(m.subtree_size[v]));
    }
    return alpha;
}

}  // namespace treecut

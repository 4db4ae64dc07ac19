#include "treecut/generators.hpp"

#include "treecut/error.hpp"
#include "treecut/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace treecut {

namespace {

Vertex as_vertex(std::size_t i) { return static_cast<Vertex>(i); }

void check_cap(std::size_t size, std::size_t cap, const char* what) {
    if (size > cap) {
        fail(ErrorCode::SizeOverCap, std::string(what) + ": " + std::to_string(size) + " vertices exceeds cap " + std::to_string(cap));
    }
}

// Appends binary_of_size(m) below `anchor`: if `root_is_anchor`, heap slot 0
// is the anchor itself, otherwise slot 0 is a fresh child of the anchor.
void attach_binary(std::vector<Vertex>& parent, Vertex anchor, std::size_t m, bool root_is_anchor) {
    if (m == 0) return;
    std::vector<Vertex> slot(m);
    std::size_t j = 0;
    if (root_is_anchor) {
        slot[0] = anchor;
        j = 1;
    }
    for (; j < m; ++j) {
        slot[j] = as_vertex(parent.size());
        parent.push_back(j == 0 ? anchor : slot[(j - 1) / 2]);
    }
}

std::vector<Vertex> segment_parents(std::size_t edges) {
    std::vector<Vertex> parent(edges + 1);
    parent[0] = kNoVertex;
    for (std::size_t i = 1; i <= edges; ++i) parent[i] = as_vertex(i - 1);
    return parent;
}

std::vector<Vertex> root_path(const RootedTree& tree, Vertex v) {
    std::vector<Vertex> path;
    for (Vertex u = v; u != kNoVertex; u = tree.parent(u)) path.push_back(u);
    std::reverse(path.begin(), path.end());
    return path;
}

double parse_double(std::string_view s) {
    double value = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, value);
    require(ec == std::errc() && ptr == end, ErrorCode::InvalidArgument, "bad number in offspring spec: '" + std::string(s) + "'");
    return value;
}

// Inverse CDF over a pmf callable invoked for k = 0, 1, 2, ... in order.
// Stops once the tail is numerically empty so u near 1 cannot loop forever.
template <class Pmf>
std::size_t inverse_cdf(double u, Pmf&& pmf, double mean, std::size_t support_end) {
    double cdf = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t k = 0; k < support_end; ++k) {
        const double p = pmf(k);
        if (p > 0.0) last_positive = k;
        cdf += p;
        if (u < cdf) return k;
        if (p == 0.0 && static_cast<double>(k) > mean + 1.0 && cdf > 0.5) return last_positive;
    }
    return last_positive;
}

constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

struct Growth {
    std::vector<Vertex> parent;
    std::size_t height = 0;
    bool overflow = false;  // stopped because size exceeded `stop_above`
};

// Breadth-first Galton-Watson growth. Vertices at generation max_gen draw
// nothing. Stops early (overflow) once the size exceeds stop_above.
Growth grow(const OffspringDistribution& mu, std::size_t max_gen, SplitMix64& rng, std::size_t stop_above) {
    Growth g;
    g.parent.push_back(kNoVertex);
    std::vector<std::size_t> gen{0};
    for (std::size_t head = 0; head < g.parent.size(); ++head) {
        if (gen[head] >= max_gen) continue;
        const std::size_t count = mu.sample(rng);
        for (std::size_t c = 0; c < count; ++c) {
            g.parent.push_back(as_vertex(head));
            gen.push_back(gen[head] + 1);
            g.height = std::max(g.height, gen[head] + 1);
            if (g.parent.size() > stop_above) {
                g.overflow = true;
                return g;
            }
        }
    }
    return g;
}

}  // namespace

// ---------------------------------------------------------------------------

RootedTree segment(std::size_t edges) { return RootedTree::from_parents(segment_parents(edges)); }

RootedTree star(std::size_t leaves) {
    std::vector<Vertex> parent(leaves + 1, 0);
    parent[0] = kNoVertex;
    return RootedTree::from_parents(std::move(parent));
}

RootedTree binary_of_size(std::size_t vertices) {
    require(vertices >= 1, ErrorCode::InvalidArgument, "binary_of_size needs at least one vertex");
    std::vector<Vertex> parent(vertices);
    parent[0] = kNoVertex;
    for (std::size_t j = 1; j < vertices; ++j) parent[j] = as_vertex((j - 1) / 2);
    return RootedTree::from_parents(std::move(parent));
}

RootedTree spherically_symmetric(std::span<const std::size_t> degrees) {
    std::vector<Vertex> parent{kNoVertex};
    std::size_t level_begin = 0;
    std::size_t level_end = 1;
    for (std::size_t k = 0; k < degrees.size(); ++k) {
        const std::size_t children = k == 0 ? degrees[0] : degrees[k] - 1;
        if (k == 0) {
            require(degrees[0] >= 1, ErrorCode::InvalidArgument, "root degree must be at least 1");
        } else {
            require(degrees[k] >= 2, ErrorCode::InvalidArgument, "interior degree must be at least 2 (level " + std::to_string(k) + ")");
        }
        const long double next = static_cast<long double>(level_end - level_begin) * static_cast<long double>(children);
        require(next + static_cast<long double>(parent.size()) <= 5.0e8L, ErrorCode::SizeOverCap, "spherically symmetric tree too large");
        for (std::size_t v = level_begin; v < level_end; ++v) {
            for (std::size_t c = 0; c < children; ++c) parent.push_back(as_vertex(v));
        }
        level_begin = level_end;
        level_end = parent.size();
    }
    return RootedTree::from_parents(std::move(parent));
}

std::vector<std::size_t> binary_degrees(std::size_t height) {
    std::vector<std::size_t> d(height, 3);
    if (height > 0) d[0] = 2;
    return d;
}

std::vector<std::size_t> sparse_branching_degrees(std::size_t n) {
    std::vector<std::size_t> d(n, 2);
    for (std::size_t p = 1; p - 1 < n; p *= 2) d[p - 1] = 3;
    return d;
}

std::vector<std::size_t> hanging_sizes(const RootedTree& tree, Vertex v) {
    require(v >= 0 && static_cast<std::size_t>(v) < tree.size(), ErrorCode::IndexOutOfRange, "retraction vertex out of range");
    const auto m = compute_metrics(tree);
    const auto path = root_path(tree, v);
    std::vector<std::size_t> sizes(path.size());
    for (std::size_t i = 0; i < path.size(); ++i) {
        sizes[i] = m.subtree_size[static_cast<std::size_t>(path[i])];
        if (i + 1 < path.size()) sizes[i] -= m.subtree_size[static_cast<std::size_t>(path[i + 1])];
    }
    return sizes;
}

RootedTree retraction(const RootedTree& tree, Vertex v) {
    require(v != tree.root(), ErrorCode::InvalidArgument, "retraction vertex must differ from the root");
    const auto sizes = hanging_sizes(tree, v);
    auto parent = segment_parents(sizes.size() - 1);
    for (std::size_t i = 0; i < sizes.size(); ++i) attach_binary(parent, as_vertex(i), sizes[i], true);
    return RootedTree::from_parents(std::move(parent));
}

RootedTree corollary15_family(std::size_t n) {
    auto parent = segment_parents(n);
    for (std::size_t i = 0; i <= n; ++i) attach_binary(parent, as_vertex(i), n / ((i + 1) * (i + 1)), false);
    return RootedTree::from_parents(std::move(parent));
}

RootedTree peres_sousi(unsigned k, std::size_t vertex_cap) {
    require(k >= 1, ErrorCode::InvalidArgument, "peres_sousi needs k >= 1");
    // n_k = 2^(2^k); the root tree has n_k^3 = 2^(3*2^k) vertices.
    if (k >= 5 || 3ULL << k > 62) {
        fail(ErrorCode::SizeOverCap, "peres_sousi k=" + std::to_string(k) + " exceeds the vertex cap");
    }
    auto n_of = [](unsigned i) { return std::uint64_t{1} << (std::uint64_t{1} << i); };
    const std::uint64_t nk = n_of(k);
    const std::uint64_t big = nk * nk * nk;
    std::uint64_t total = nk + 1 + big;
    for (unsigned i = k / 2; i <= k; ++i) total += big / n_of(i);
    check_cap(total, vertex_cap, "peres_sousi");

    auto parent = segment_parents(nk);
    attach_binary(parent, 0, big, false);
    for (unsigned i = k / 2; i <= k; ++i) attach_binary(parent, as_vertex(n_of(i)), big / n_of(i), false);
    return RootedTree::from_parents(std::move(parent));
}

// ---------------------------------------------------------------------------
// Offspring distributions

OffspringDistribution OffspringDistribution::geometric(double p) {
    require(p > 0.0 && p <= 1.0, ErrorCode::InvalidArgument, "geometric parameter must lie in (0,1]");
    OffspringDistribution d;
    d.kind_ = Kind::Geometric;
    d.parameter_ = p;
    d.mean_ = (1.0 - p) / p;
    d.variance_ = (1.0 - p) / (p * p);
    return d;
}

OffspringDistribution OffspringDistribution::poisson(double lambda) {
    require(lambda >= 0.0 && lambda <= 700.0, ErrorCode::InvalidArgument, "poisson mean must lie in [0,700]");
    OffspringDistribution d;
    d.kind_ = Kind::Poisson;
    d.parameter_ = lambda;
    d.mean_ = lambda;
    d.variance_ = lambda;
    return d;
}

OffspringDistribution OffspringDistribution::table(std::vector<double> probabilities) {
    require(!probabilities.empty(), ErrorCode::InvalidArgument, "empty offspring table");
    double total = 0.0;
    for (double p : probabilities) {
        require(p >= 0.0 && std::isfinite(p), ErrorCode::InvalidArgument, "offspring probabilities must be nonnegative");
        total += p;
    }
    require(std::abs(total - 1.0) <= 1e-12, ErrorCode::InvalidArgument, "offspring probabilities must sum to 1");
    OffspringDistribution d;
    d.kind_ = Kind::Table;
    double m = 0.0, m2 = 0.0;
    for (std::size_t j = 0; j < probabilities.size(); ++j) {
        m += static_cast<double>(j) * probabilities[j];
        m2 += static_cast<double>(j * j) * probabilities[j];
    }
    d.mean_ = m;
    d.variance_ = std::max(0.0, m2 - m * m);
    d.table_ = std::move(probabilities);
    return d;
}

OffspringDistribution OffspringDistribution::point_mass(std::size_t j) {
    std::vector<double> t(j + 1, 0.0);
    t[j] = 1.0;
    return table(std::move(t));
}

OffspringDistribution OffspringDistribution::parse(std::string_view spec) {
    const auto colon = spec.find(':');
    require(colon != std::string_view::npos, ErrorCode::InvalidArgument, "offspring spec must be kind:params, got '" + std::string(spec) + "'");
    const auto kind = spec.substr(0, colon);
    const auto rest = spec.substr(colon + 1);
    if (kind == "geom" || kind == "geometric") return geometric(parse_double(rest));
    if (kind == "poisson") return poisson(parse_double(rest));
    if (kind == "point") return point_mass(static_cast<std::size_t>(parse_double(rest)));
    if (kind == "table") {
        std::vector<double> probs;
        std::size_t start = 0;
        while (start <= rest.size()) {
            const auto comma = rest.find(',', start);
            const auto piece = rest.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            probs.push_back(parse_double(piece));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return table(std::move(probs));
    }
    fail(ErrorCode::InvalidArgument, "unknown offspring kind '" + std::string(kind) + "'");
}

double OffspringDistribution::pmf(std::size_t j) const {
    switch (kind_) {
        case Kind::Geometric:
            return parameter_ * std::pow(1.0 - parameter_, static_cast<double>(j));
        case Kind::Poisson: {
            double p = std::exp(-parameter_);
            for (std::size_t i = 1; i <= j; ++i) p *= parameter_ / static_cast<double>(i);
            return p;
        }
        case Kind::Table:
            return j < table_.size() ? table_[j] : 0.0;
    }
    return 0.0;
}

std::string OffspringDistribution::to_string() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
        case Kind::Geometric: os << "geom:" << parameter_; break;
        case Kind::Poisson: os << "poisson:" << parameter_; break;
        case Kind::Table:
            os << "table:";
            for (std::size_t j = 0; j < table_.size(); ++j) os << (j ? "," : "") << table_[j];
            break;
    }
    return os.str();
}

std::size_t OffspringDistribution::sample(SplitMix64& rng) const {
    const double u = rng.uniform();
    switch (kind_) {
        case Kind::Geometric: {
            // pmf advanced multiplicatively so every port sees the same sums
            double p = parameter_;
            return inverse_cdf(u, [&](std::size_t j) {
                if (j > 0) p *= 1.0 - parameter_;
                return p;
            }, mean_, kUnbounded);
        }
        case Kind::Poisson: {
            double p = std::exp(-parameter_);
            return inverse_cdf(u, [&](std::size_t j) {
                if (j > 0) p *= parameter_ / static_cast<double>(j);
                return p;
            }, mean_, kUnbounded);
        }
        case Kind::Table:
            return inverse_cdf(u, [&](std::size_t j) { return table_[j]; }, mean_, table_.size());
    }
    return 0;
}

std::size_t OffspringDistribution::sample_size_biased(SplitMix64& rng) const {
    require(mean_ > 0.0, ErrorCode::InvalidArgument, "size-biased law needs positive mean");
    const double u = rng.uniform();
    switch (kind_) {
        case Kind::Geometric: {
            double p = parameter_;
            return inverse_cdf(u, [&](std::size_t j) {
                if (j > 0) p *= 1.0 - parameter_;
                return static_cast<double>(j) * p / mean_;
            }, mean_ + 1.0, kUnbounded);
        }
        case Kind::Poisson: {
            double p = std::exp(-parameter_);
            return inverse_cdf(u, [&](std::size_t j) {
                if (j > 0) p *= parameter_ / static_cast<double>(j);
                return static_cast<double>(j) * p / mean_;
            }, mean_ + 1.0, kUnbounded);
        }
        case Kind::Table:
            return inverse_cdf(u, [&](std::size_t j) { return static_cast<double>(j) * table_[j] / mean_; }, mean_, table_.size());
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Random families

RootedTree gw_tree(const OffspringDistribution& mu, std::size_t max_gen, std::uint64_t seed, const GwOptions& options) {
    SplitMix64 rng(seed);
    auto g = grow(mu, max_gen, rng, options.vertex_cap);
    if (g.overflow) fail(ErrorCode::SizeOverCap, "Galton-Watson tree exceeds vertex cap " + std::to_string(options.vertex_cap));
    return RootedTree::from_parents(std::move(g.parent));
}

RootedTree gw_survival_truncated(const OffspringDistribution& mu, std::size_t n, std::uint64_t seed, const GwOptions& options) {
    require(mu.mean() > 1.0, ErrorCode::InvalidArgument, "survival conditioning needs a supercritical law (mean > 1)");
    SplitMix64 rng(seed);
    for (std::size_t attempt = 0; attempt < options.attempt_cap; ++attempt) {
        auto g = grow(mu, n, rng, options.vertex_cap);
        if (g.overflow) fail(ErrorCode::SizeOverCap, "Galton-Watson tree exceeds vertex cap " + std::to_string(options.vertex_cap));
        if (g.height == n) return RootedTree::from_parents(std::move(g.parent));
    }
    fail(ErrorCode::AttemptCapExceeded, "no survival to generation " + std::to_string(n) + " in " + std::to_string(options.attempt_cap) +
                                            " attempts (survival probability estimate < " + std::to_string(1.0 / static_cast<double>(options.attempt_cap)) + ")");
}

LabeledTree gw_conditioned_size(const OffspringDistribution& mu, std::size_t n, std::uint64_t seed, const GwOptions& options, bool reroot_at_label_one) {
    require(n >= 1, ErrorCode::InvalidArgument, "conditioned size must be at least 1");
    check_cap(n, options.vertex_cap, "gw_conditioned_size");
    SplitMix64 rng(seed);
    for (std::size_t attempt = 0; attempt < options.attempt_cap; ++attempt) {
        auto g = grow(mu, kUnbounded, rng, n);
        if (g.overflow || g.parent.size() != n) continue;
        std::vector<std::size_t> labels(n);
        std::iota(labels.begin(), labels.end(), std::size_t{1});
        for (std::size_t i = n - 1; i >= 1; --i) std::swap(labels[i], labels[rng.below(i + 1)]);
        auto tree = RootedTree::from_parents(std::move(g.parent));
        if (reroot_at_label_one) {
            const auto it = std::find(labels.begin(), labels.end(), std::size_t{1});
            tree = reroot(tree, as_vertex(static_cast<std::size_t>(it - labels.begin())));
        }
        return {std::move(tree), std::move(labels)};
    }
    fail(ErrorCode::AttemptCapExceeded, "no tree with exactly " + std::to_string(n) + " vertices in " + std::to_string(options.attempt_cap) + " attempts");
}

RootedTree kesten_tree(const OffspringDistribution& mu, std::size_t n, std::uint64_t seed, const GwOptions& options) {
    require(mu.mean() <= 1.0, ErrorCode::InvalidArgument, "Kesten tree needs a (sub)critical law (mean <= 1)");
    require(mu.mean() > 0.0, ErrorCode::InvalidArgument, "Kesten tree needs a positive mean");
    SplitMix64 rng(seed);
    std::vector<Vertex> parent{kNoVertex};
    std::vector<std::size_t> gen{0};
    std::vector<char> spine{1};
    for (std::size_t head = 0; head < parent.size(); ++head) {
        if (gen[head] >= n) continue;
        const bool on_spine = spine[head] != 0;
        const std::size_t count = on_spine ? mu.sample_size_biased(rng) : mu.sample(rng);
        const std::size_t heir = on_spine ? static_cast<std::size_t>(rng.below(count)) : count;
        for (std::size_t c = 0; c < count; ++c) {
            parent.push_back(as_vertex(head));
            gen.push_back(gen[head] + 1);
            spine.push_back(c == heir ? 1 : 0);
        }
        check_cap(parent.size(), options.vertex_cap, "kesten_tree");
    }
    return RootedTree::from_parents(std::move(parent));
}

// ---------------------------------------------------------------------------
// Contours

std::vector<std::size_t> identity_labels(std::size_t n) {
    std::vector<std::size_t> labels(n);
    std::iota(labels.begin(), labels.end(), std::size_t{1});
    return labels;
}

Contour contour(const RootedTree& tree, std::span<const std::size_t> labels) {
    const std::size_t n = tree.size();
    require(labels.size() == n, ErrorCode::InvalidArgument, "labels must have one entry per vertex");
    std::vector<char> used(n + 1, 0);
    for (std::size_t l : labels) {
        require(l >= 1 && l <= n && !used[l], ErrorCode::InvalidArgument, "labels must be a permutation of 1..n");
        used[l] = 1;
    }

    Contour out;
    out.steps.reserve(2 * n - 1);
    out.depths.reserve(2 * n - 1);
    struct Frame {
        Vertex v;
        std::vector<Vertex> kids;
        std::size_t next = 0;
    };
    auto frame_for = [&](Vertex v) {
        Frame f{v, {tree.children(v).begin(), tree.children(v).end()}, 0};
        std::sort(f.kids.begin(), f.kids.end(), [&](Vertex a, Vertex b) {
            return labels[static_cast<std::size_t>(a)] < labels[static_cast<std::size_t>(b)];
        });
        return f;
    };
    std::vector<Frame> stack;
    stack.push_back(frame_for(tree.root()));
    out.steps.push_back(tree.root());
    out.depths.push_back(0);
    while (!stack.empty()) {
        Frame& top = stack.back();
        if (top.next < top.kids.size()) {
            const Vertex c = top.kids[top.next++];
            out.steps.push_back(c);
            out.depths.push_back(stack.size());
            stack.push_back(frame_for(c));
        } else {
            stack.pop_back();
            if (!stack.empty()) {
                out.steps.push_back(stack.back().v);
                out.depths.push_back(stack.size() - 1);
            }
        }
    }
    return out;
}

std::vector<ContourPoint> normalized_contour(const Contour& c, double scale) {
    require(scale > 0.0, ErrorCode::InvalidArgument, "contour scale must be positive");
    const std::size_t len = c.depths.size();
    const std::size_t n = (len + 1) / 2;
    const double two_n = 2.0 * static_cast<double>(n);
    const double factor = scale / std::sqrt(static_cast<double>(n));
    std::vector<ContourPoint> table;
    table.reserve(len + 2);
    table.push_back({0.0, 0.0});
    for (std::size_t i = 1; i <= len; ++i) table.push_back({static_cast<double>(i) / two_n, factor * static_cast<double>(c.depths[i - 1])});
    table.push_back({1.0, 0.0});
    return table;
}

double evaluate_contour(std::span<const ContourPoint> table, double x) {
    require(!table.empty(), ErrorCode::InvalidArgument, "empty contour table");
    if (x <= table.front().x) return table.front().y;
    if (x >= table.back().x) return table.back().y;
    const auto it = std::upper_bound(table.begin(), table.end(), x, [](double value, const ContourPoint& p) { return value < p.x; });
    const auto& b = *it;
    const auto& a = *(it - 1);
    const double w = (x - a.x) / (b.x - a.x);
    return a.y + w * (b.y - a.y);
}

}  // namespace treecut

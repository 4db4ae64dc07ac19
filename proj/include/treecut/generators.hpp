#pragma once

#include "treecut/rng.hpp"
#include "treecut/tree.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace treecut {

// ---------------------------------------------------------------------------
// Deterministic families
// ---------------------------------------------------------------------------

/// Path with `edges` edges (vertices at distances 0..edges), rooted at an end.
RootedTree segment(std::size_t edges);

/// Star rooted at its centre.
RootedTree star(std::size_t leaves);

/// Complete binary tree on exactly `vertices` vertices, filled level by
/// level, left to right (heap order: vertex j has parent (j-1)/2).
RootedTree binary_of_size(std::size_t vertices);

/// Spherically symmetric tree truncated at level n = degrees.size(): the root
/// has degrees[0] children, a level-k vertex (1 <= k < n) has degrees[k]-1.
/// Vertices are numbered in breadth-first order.
RootedTree spherically_symmetric(std::span<const std::size_t> degrees);

/// Degrees (2,3,3,...,3) of length `height`: the binary tree of that height.
std::vector<std::size_t> binary_degrees(std::size_t height);

/// deg_i = 3 when i = 2^j - 1, else 2, for i = 0..n-1.
std::vector<std::size_t> sparse_branching_degrees(std::size_t n);

/// v-retraction: the root-to-v path becomes a segment rooted at one end, and
/// at distance i the piece hanging off the path at v_i (v_i included) is
/// replaced by binary_of_size of the same vertex count, rooted at the
/// segment vertex. Segment vertices are 0..|v|, then the binary pieces in
/// order of i.
RootedTree retraction(const RootedTree& tree, Vertex v);

/// Sizes |T̄_i|, i = 0..|v|, of the pieces hanging off the root-to-v path.
std::vector<std::size_t> hanging_sizes(const RootedTree& tree, Vertex v);

/// Segment of n edges with binary_of_size(floor(n/(i+1)^2)) attached (as new
/// vertices below a fresh child) at distance i, for i = 0..n.
RootedTree corollary15_family(std::size_t n);

/// Segment of length n_k = 2^(2^k) with binary_of_size(n_k^3) attached at the
/// root and binary_of_size(n_k^3/n_i) at distance n_i, i = k/2..k.
RootedTree peres_sousi(unsigned k, std::size_t vertex_cap = 1'000'000);

// ---------------------------------------------------------------------------
// Offspring distributions and random families
// ---------------------------------------------------------------------------

class OffspringDistribution {
public:
    enum class Kind { Geometric, Poisson, Table };

    /// P(j) = p (1-p)^j, j >= 0.
    static OffspringDistribution geometric(double p);
    static OffspringDistribution poisson(double lambda);
    /// P(j) = probabilities[j]; must sum to 1 within 1e-12.
    static OffspringDistribution table(std::vector<double> probabilities);
    static OffspringDistribution point_mass(std::size_t j);
    /// "geom:0.5", "poisson:1.0" or "table:0.25,0.5,0.25".
    static OffspringDistribution parse(std::string_view spec);

    Kind kind() const noexcept { return kind_; }
    double parameter() const noexcept { return parameter_; }
    const std::vector<double>& probabilities() const noexcept { return table_; }
    double mean() const noexcept { return mean_; }
    double variance() const noexcept { return variance_; }
    double pmf(std::size_t j) const;
    std::string to_string() const;

    /// Inverse-CDF draw from one uniform.
    std::size_t sample(SplitMix64& rng) const;
    /// Draw from the size-biased law j*P(j)/mean (mean > 0).
    std::size_t sample_size_biased(SplitMix64& rng) const;

private:
    OffspringDistribution() = default;

    Kind kind_ = Kind::Table;
    double parameter_ = 0.0;
    std::vector<double> table_;
    double mean_ = 0.0;
    double variance_ = 0.0;
};

struct GwOptions {
    std::size_t vertex_cap = 1'000'000;
    std::size_t attempt_cap = 1'000'000;
};

/// Galton-Watson genealogy truncated at generation max_gen, built breadth
/// first; vertices at generation max_gen draw no offspring.
RootedTree gw_tree(const OffspringDistribution& mu, std::size_t max_gen, std::uint64_t seed,
                   const GwOptions& options = {});

/// Rejection sampling until the tree survives to generation n (mean > 1).
RootedTree gw_survival_truncated(const OffspringDistribution& mu, std::size_t n, std::uint64_t seed,
                                 const GwOptions& options = {});

/// labels[v] in 1..n, a uniform random permutation.
struct LabeledTree {
    RootedTree tree;
    std::vector<std::size_t> labels;
};

/// Rejection sampling until the total progeny is exactly n, then uniform
/// labels. The tree stays rooted at the progenitor unless
/// reroot_at_label_one is set.
LabeledTree gw_conditioned_size(const OffspringDistribution& mu, std::size_t n, std::uint64_t seed,
                                const GwOptions& options = {}, bool reroot_at_label_one = false);

/// Kesten tree truncated at generation n (mean <= 1): spine vertices draw a
/// size-biased number of children, one of them (uniform) continues the spine.
RootedTree kesten_tree(const OffspringDistribution& mu, std::size_t n, std::uint64_t seed,
                       const GwOptions& options = {});

// ---------------------------------------------------------------------------
// Contour functions
// ---------------------------------------------------------------------------

struct Contour {
    std::vector<Vertex> steps;        // s(1..2n-1)
    std::vector<std::size_t> depths;  // |s(i)|
};

/// Depth-first walk visiting children in ascending label order.
Contour contour(const RootedTree& tree, std::span<const std::size_t> labels);

/// Ascending index labels 1..n.
std::vector<std::size_t> identity_labels(std::size_t n);

struct ContourPoint {
    double x = 0.0;
    double y = 0.0;
};

/// Sample table of the normalised contour on [0,1]: (0,0), then
/// (i/2n, c n^{-1/2} |s(i)|) for i = 1..2n-1, then (1,0).
std::vector<ContourPoint> normalized_contour(const Contour& contour, double c);

/// Linear interpolation in a normalised-contour table.
double evaluate_contour(std::span<const ContourPoint> table, double x);

}  // namespace treecut

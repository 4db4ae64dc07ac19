#pragma once

#include "treecut/linalg.hpp"
#include "treecut/tree.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace treecut {

/// Q = D - A. The walk generator is -Q; the stationary law is uniform.
Eigen::MatrixXd laplacian(const RootedTree& tree);

/// Full eigendecomposition of Q, eigenvalues ascending, orthonormal columns.
struct Eigensystem {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

/// Throws SizeOverCap above dense_vertex_cap().
Eigensystem eigensystem(const RootedTree& tree);

struct SpectrumResult {
    std::vector<double> eigenvalues;  // ascending
    double gap = 0.0;                 // second-smallest eigenvalue
    double t_rel = 0.0;               // 1 / gap
};

/// Throws UndefinedGap for a single vertex.
SpectrumResult spectrum(const RootedTree& tree);
SpectrumResult spectrum_from(const Eigensystem& system);

/// Gap-only path for large trees: Lanczos on the pseudo-inverse Q^+, whose
/// top eigenvalue on the mean-zero subspace is t_rel. Each application is an
/// O(n) tree solve.
struct GapEstimate {
    double gap = 0.0;
    double t_rel = 0.0;
    std::size_t iterations = 0;
    double residual = 0.0;  // ||Q^+ x - t_rel x|| for the Ritz vector
};
GapEstimate iterative_gap(const RootedTree& tree, const LanczosOptions& options = {});

/// Dirichlet form over variance, both normalised by 1/n.
double rayleigh(const RootedTree& tree, std::span<const double> f);

// ---------------------------------------------------------------------------
// Hardy constants

/// Optimal A in  sum_{v in part} (sum_{e in l(v)} g(e))^2 <= A sum_e g(e)^2,
/// i.e. the top eigenvalue of M^T M for the ancestor-incidence matrix M of the
/// part. The part must be connected and contain the tree's root. Dense below
/// the cap, Lanczos above it.
double hardy_constant(const RootedTree& tree, std::span<const Vertex> part);

struct HardyCertificate {
    Vertex center = kNoVertex;
    double delta = 0.0;
    double a_part_a = 0.0;
    double a_part_b = 0.0;
    double A = 0.0;           // max of the two parts
    double gap_lower = 0.0;   // 1/A
    double gap_upper = 0.0;   // 1/(delta A)
    double t_rel_lower = 0.0; // delta A
    double t_rel_upper = 0.0; // A
};

/// Splits at the center of mass (whatever the stored root) and assembles
/// gap in [1/A, 1/(delta A)].
HardyCertificate hardy_interval(const RootedTree& tree);

/// delta * max|e||T_e| with the tree rooted at its center of mass, plus the
/// explicit test function g(e) = 1/|e*| on the root path of the maximising
/// edge and both sides of the Hardy inequality evaluated for it.
struct HardyLower {
    double bound = 0.0;
    double delta = 0.0;
    Vertex center = kNoVertex;
    std::uint64_t max_edge_load = 0;
    Vertex edge = kNoVertex;          // lower endpoint, oriented away from center
    std::vector<Vertex> path;         // lower endpoints of the edges carrying g
    double g_value = 0.0;
    double lhs = 0.0;                 // sum_v (sum_{e in l(v)} g(e))^2
    double rhs = 0.0;                 // sum_e g(e)^2
};
HardyLower hardy_lower(const RootedTree& tree);

// ---------------------------------------------------------------------------
// Weighted-path upper bounds on t_rel (valid for any root)

struct WeightScheme {
    enum class Kind { Subtree, InverseDepth, ReciprocalF, Retraction, Custom };
    Kind kind = Kind::Subtree;
    std::function<double(std::size_t)> f;  // ReciprocalF: a_e = 1/f(|e|)
    Vertex spine_end = kNoVertex;          // Retraction: the vertex v of the v-retraction
    std::vector<double> custom;            // Custom: a_e indexed by lower endpoint

    static WeightScheme subtree() { return {}; }
    static WeightScheme inverse_depth() { return {Kind::InverseDepth, {}, kNoVertex, {}}; }
    static WeightScheme reciprocal(std::function<double(std::size_t)> fn) { return {Kind::ReciprocalF, std::move(fn), kNoVertex, {}}; }
    static WeightScheme retraction(Vertex v) { return {Kind::Retraction, {}, v, {}}; }
    static WeightScheme from_table(std::vector<double> a) { return {Kind::Custom, {}, kNoVertex, std::move(a)}; }
};

/// Edge weights a_e indexed by lower endpoint (root entry unused, 0).
std::vector<double> edge_weights(const RootedTree& tree, const WeightScheme& scheme);

/// max_e a_e^{-1} sum_{v in T_e} sum_{e' in l(v)} a_{e'}, in O(n).
double weighted_path_bound(const RootedTree& tree, const WeightScheme& scheme);

/// (ln(diam) + 1) * max|e||T_e|.
double bound_cor24(const RootedTree& tree);

/// C * max_e f(|e|)|T_e| with C = sum_{k=1}^{height} 1/f(k).
struct Cor25Bound {
    double bound = 0.0;
    double constant = 0.0;
};
Cor25Bound bound_cor25(const RootedTree& tree, const std::function<double(std::size_t)>& f);

/// max_v sum_{e in l(v)} |T_e|.
double bound_cor26(const RootedTree& tree);

/// 32 * max_{k>=1} k|V_k|.
double bound_tail32(const RootedTree& tree);

struct BoundsReport {
    HardyLower hardy_lower;
    HardyCertificate hardy_interval;
    double cor24 = 0.0;
    double cor24_weighted = 0.0;  // the same scheme evaluated exactly
    Cor25Bound cor25;             // f(k) = k^2
    double cor26 = 0.0;
    double tail32 = 0.0;
    double min_upper = 0.0;
};
BoundsReport all_bounds(const RootedTree& tree);

// ---------------------------------------------------------------------------

/// nu_B = min sum_e f(e)^2 subject to sum_{e in l(v)} f(e) >= 1 for v in B,
/// by enumerating active sets (|B| <= 12).
struct NuResult {
    double value = 0.0;
    std::vector<Vertex> active;  // binding constraints of the optimum
    std::vector<double> f;       // optimal f indexed by lower endpoint
};
NuResult nu_exact(const RootedTree& tree, std::span<const Vertex> B);

}  // namespace treecut

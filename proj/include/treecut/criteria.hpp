#pragma once

#include "treecut/generators.hpp"
#include "treecut/tree.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace treecut {

/// A named tree family. The size parameter passed alongside means:
///   segment      edges                 star        leaves
///   binary       height                spherical   truncation level (degrees prefix)
///   cor15        n of the corollary    peres-sousi k
///   remark53     truncation level      gw          max generation
///   gw-survival  surviving generation  gw-size     vertex count
///   kesten       spine length
struct FamilySpec {
    std::string family;
    std::optional<OffspringDistribution> offspring;  // random families
    std::vector<std::size_t> degrees;                // spherical
    GwOptions gw;

    bool random() const;
    /// Throws InvalidArgument for unknown names or missing parameters.
    void validate() const;
};

/// Family names accepted by FamilySpec.
std::span<const char* const> family_names();

RootedTree make_family_member(const FamilySpec& spec, std::size_t size, std::uint64_t seed);

/// t_mix(eps) * gap, exact.
double product_ratio(const RootedTree& tree, double epsilon);

struct LogLogFit {
    double slope = 0.0;
    double r2 = 0.0;
    std::size_t points = 0;
};
/// Least-squares fit of log y against log x (all entries positive). R^2 is 1
/// when log y has no variance.
LogLogFit loglog_fit(std::span<const double> x, std::span<const double> y);

struct Verdict {
    std::string quantity;
    LogLogFit fit;
    double threshold = 0.05;
    std::string verdict;  // "insufficient data" below 4 sizes
    std::string label = "diagnostic";
};

struct FamilyRow {
    std::size_t n = 0;
    double vertices = 0.0;
    std::string mode;  // "exact" or "bounded"
    double t_rel = 0.0;
    std::optional<double> t_mix;
    std::optional<double> ratio;  // t_mix / t_rel
    double hardy_lower = 0.0;
    double min_upper = 0.0;
    bool sandwich_ok = true;
    double max_edge_load = 0.0;
    double max_path_load = 0.0;
    double tail_max = 0.0;
    double max_degree = 0.0;
    double q13 = 0.0;  // max_path_load / max_edge_load
    double q16 = 0.0;  // Delta * tail_max / max_path_load
    std::size_t replicates = 1;
};

struct FamilyReport {
    std::string family;
    double epsilon = 0.25;
    std::uint64_t seed = 0;
    std::vector<FamilyRow> rows;  // sorted by n
    Verdict ratio_trend;
    Verdict thm13;
    Verdict thm16;
};

struct SweepOptions {
    double epsilon = 0.25;
    std::uint64_t seed = 0;
    std::size_t replicates = 1;  // per size, random families only
    std::size_t jobs = 1;
    double threshold = 0.05;
};

/// Analyses one tree: exact spectra and mixing below the dense cap, the
/// iterative gap with the bound pair above it.
FamilyRow analyse(const RootedTree& tree, std::size_t n, double epsilon);

/// Rows for every size (replicates aggregated by median), then trends.
/// Per-instance seeds are drawn in order (size-major, then replicate) from
/// SplitMix64(options.seed).
FamilyReport sweep(const FamilySpec& spec, std::span<const std::size_t> sizes, const SweepOptions& options);

/// Theorem-1.3 style quotient trend: bounded path/edge load ratio suggests no cutoff.
Verdict check_thm13(std::span<const FamilyRow> rows, double threshold = 0.05);
/// Theorem-1.6 style quotient trend: Delta * tail_max / path load -> 0 predicts cutoff.
Verdict check_thm16(std::span<const FamilyRow> rows, double threshold = 0.05);
/// Product-ratio trend: slope below threshold is consistent with no cutoff.
Verdict check_ratio(std::span<const FamilyRow> rows, double threshold = 0.05);

struct Thm14Report {
    Vertex spine_end = kNoVertex;
    double spine_load = 0.0;      // sum_{e in l(v*)} |T_e|
    double max_path_load = 0.0;
    double vertices = 0.0;
    double spine_edge_max = 0.0;  // max_{e in l(v*)} |e||T_e|
};
Thm14Report check_thm14(const RootedTree& tree, Vertex spine_end);

/// Trends over a family of Thm14Reports: spine_load/|V| should grow,
/// spine_load/max_path_load stay bounded, spine_edge_max/max_path_load decay.
struct Thm14Trend {
    Verdict dominance;    // spine_load / |V|
    Verdict comparable;   // spine_load / max_path_load
    Verdict hyperbolic;   // spine_edge_max / max_path_load
};
Thm14Trend thm14_trend(std::span<const Thm14Report> reports, double threshold = 0.05);

/// max over edges e off the root-to-spine_end path of D(e)/|T_e|, where
/// D(e) = max over v in T_e of the sum of |T_f| for edges f from e down to v.
/// 1 when every edge lies on the path.
double retraction_alpha(const RootedTree& tree, Vertex spine_end);

}  // namespace treecut

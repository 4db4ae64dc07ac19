#pragma once

#include "treecut/spectral.hpp"
#include "treecut/tree.hpp"

#include <cstdint>
#include <vector>

namespace treecut {

/// Cached eigendecomposition of Q for repeated heat-kernel queries. Immutable
/// after construction; safe for concurrent reads.
class HeatKernel {
public:
    explicit HeatKernel(const RootedTree& tree);
    explicit HeatKernel(Eigensystem system);

    std::size_t size() const noexcept { return static_cast<std::size_t>(system_.values.size()); }
    const Eigensystem& system() const noexcept { return system_; }
    double t_rel() const;

    /// ||P_t(x, .) - pi||_TV.
    double distance_from(Vertex x, double t) const;
    /// d(t) = max_x ||P_t(x, .) - pi||_TV, with the maximising start.
    double distance(double t, Vertex* worst = nullptr) const;
    /// Row P_t(x, .).
    Eigen::VectorXd row(Vertex x, double t) const;

private:
    Eigensystem system_;
};

struct TvSample {
    double t = 0.0;
    double tv = 0.0;
};

struct MixingResult {
    double epsilon = 0.0;
    double t_mix = 0.0;
    Vertex worst_start = kNoVertex;
    std::vector<TvSample> tv_curve;
};

/// Worst-start eps-mixing time by bisection (relative tolerance 1e-8) on the
/// monotone d(t); 0 when eps >= 1 - 1/n.
MixingResult mixing_time(const HeatKernel& kernel, double epsilon);
MixingResult mixing_time(const RootedTree& tree, double epsilon);

/// Mixing time from a fixed start x.
double mixing_time_from(const HeatKernel& kernel, Vertex x, double epsilon);

/// `samples` evenly spaced points of d(t) on [0, t_max] (or of the distance
/// from a fixed start when start != kNoVertex).
std::vector<TvSample> tv_curve(const HeatKernel& kernel, double t_max, std::size_t samples, Vertex start = kNoVertex);

struct HittingProfile {
    Vertex target = kNoVertex;
    std::vector<double> expected;  // E_v[tau_hit(target)]
    Vertex max_vertex = kNoVertex;
    double max = 0.0;
};

/// Exact expected hitting times of `target` by the linear system
/// (Q restricted to V \ {target}) h = 1.
HittingProfile hitting_profile(const RootedTree& tree, Vertex target);

struct Prop31Report {
    double max_hitting = 0.0;           // max_v E_v[tau_hit(o)]
    double twice_max_path_load = 0.0;   // 2 max_v sum_{e in l(v)} |T_e|
    double size_times_diameter = 0.0;   // |V| diam
};
/// Orders of the mixing upper bound (the universal constant is unknown).
Prop31Report mixing_upper_prop31(const RootedTree& tree);

struct Prop32Report {
    double epsilon = 0.0;
    double delta = 0.0;
    Vertex root = kNoVertex;  // root used (rerooted at the center of mass if needed)
    bool rerooted = false;
    double max_hitting = 0.0;
    std::uint64_t max_path_load = 0;
    std::size_t max_degree = 0;
    double hitting_bound = 0.0;  // (eps/2) max_v E_v[tau_hit(o)]
    double path_bound = 0.0;     // (eps/(2 Delta)) max path load
};
/// Lower bounds on t_mix(eps/2). Uses the stored root when it is a
/// delta-center with delta >= eps, otherwise the center of mass.
Prop32Report mixing_lower_prop32(const RootedTree& tree, double epsilon);

}  // namespace treecut

#include "oracles.hpp"

#include "treecut/center_of_mass.hpp"
#include "treecut/generators.hpp"
#include "treecut/metrics.hpp"
#include "treecut/mixing.hpp"

#include <doctest.h>

#include <numbers>

using namespace treecut;

namespace {

RootedTree to_tree(const std::vector<int>& p) { return RootedTree::from_parents({p.begin(), p.end()}); }

}  // namespace

TEST_CASE("two-point space closed form") {
    // d(t) = e^{-2t}/2, so t_mix(eps) = ln(1/(2 eps))/2.
    const HeatKernel k(segment(1));
    CHECK(k.distance(0.3) == doctest::Approx(0.5 * std::exp(-0.6)));
    CHECK(mixing_time(k, 0.25).t_mix == doctest::Approx(std::numbers::ln2 / 2).epsilon(1e-8));
    CHECK(mixing_time(k, 0.1).t_mix == doctest::Approx(std::log(5.0) / 2).epsilon(1e-8));
    CHECK(mixing_time(k, 0.6).t_mix == 0.0);
    CHECK_THROWS(mixing_time(k, 0.0));
    CHECK_THROWS(k.distance_from(0, -1.0));
}

TEST_CASE("heat kernel against uniformisation") {
    std::mt19937_64 gen(53);
    for (int rep = 0; rep < 10; ++rep) {
        const auto p = oracle::random_tree(3 + rep, gen);
        const HeatKernel k(to_tree(p));
        for (double t : {0.1, 0.7, 2.5}) {
            for (int x = 0; x < static_cast<int>(p.size()); x += 2) {
                CHECK(k.distance_from(x, t) == doctest::Approx(oracle::tv_uniformised(p, x, t)).epsilon(1e-9));
            }
        }
        const auto row = k.row(0, 1.0);
        CHECK(row.sum() == doctest::Approx(1.0));
        CHECK(row.minCoeff() >= 0.0);
    }
}

TEST_CASE("worst start equals the maximum over single starts") {
    std::mt19937_64 gen(59);
    for (int rep = 0; rep < 12; ++rep) {
        const auto t = to_tree(oracle::random_tree(4 + 2 * rep, gen));
        const HeatKernel k(t);
        for (double eps : {0.25, 0.1}) {
            double best = 0.0;
            for (Vertex x = 0; x < static_cast<Vertex>(t.size()); ++x) best = std::max(best, mixing_time_from(k, x, eps));
            const auto mix = mixing_time(k, eps);
            CHECK(mix.t_mix == doctest::Approx(best).epsilon(1e-7));
            CHECK(mixing_time_from(k, mix.worst_start, eps) == doctest::Approx(mix.t_mix).epsilon(1e-7));
            Vertex worst = kNoVertex;
            CHECK(k.distance(mix.t_mix * (1 - 1e-6), &worst) > eps);
            CHECK(k.distance(mix.t_mix * (1 + 1e-6)) <= eps);
        }
    }
}

TEST_CASE("tv curve is non-increasing") {
    const HeatKernel k(spherically_symmetric(binary_degrees(4)));
    const auto curve = tv_curve(k, 50.0, 60);
    REQUIRE(curve.size() == 60);
    CHECK(curve.front().tv == doctest::Approx(1.0 - 1.0 / 31.0));
    for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].tv <= curve[i - 1].tv + 1e-12);
    const auto from_root = tv_curve(k, 50.0, 5, 0);
    for (const auto& s : from_root) CHECK(s.tv <= k.distance(s.t) + 1e-12);
}

TEST_CASE("hitting times equal path loads") {
    std::mt19937_64 gen(61);
    for (int rep = 0; rep < 30; ++rep) {
        const auto p = oracle::random_tree(2 + rep, gen);
        const auto t = to_tree(p);
        const auto h = hitting_profile(t, t.root());
        const auto ref = oracle::hitting_times(p, oracle::root_of(p));
        const auto m = compute_metrics(t);
        for (std::size_t v = 0; v < t.size(); ++v) {
            CHECK(h.expected[v] == doctest::Approx(ref[v]).epsilon(1e-10));
            CHECK(h.expected[v] == doctest::Approx(static_cast<double>(m.path_load[v])).epsilon(1e-10));
        }
        const Vertex other = static_cast<Vertex>(rep % t.size());
        const auto h2 = hitting_profile(t, other);
        const auto ref2 = oracle::hitting_times(p, other);
        for (std::size_t v = 0; v < t.size(); ++v) CHECK(h2.expected[v] == doctest::Approx(ref2[v]).epsilon(1e-10));
    }
}

TEST_CASE("mixing bounds in terms of path loads") {
    std::mt19937_64 gen(67);
    for (int rep = 0; rep < 15; ++rep) {
        const auto t = to_tree(oracle::random_tree(3 + 2 * rep, gen));
        const auto up = mixing_upper_prop31(t);
        CHECK(up.max_hitting <= up.twice_max_path_load);
        CHECK(up.twice_max_path_load <= 2 * up.size_times_diameter);

        const double delta = center_of_mass(t).delta;
        for (double eps : {delta, delta / 2}) {
            const auto low = mixing_lower_prop32(t, eps);
            const double t_mix = mixing_time(t, eps / 2).t_mix;
            CHECK(t_mix >= low.hitting_bound * (1 - 1e-8));
            CHECK(low.hitting_bound >= low.path_bound * (1 - 1e-12));
        }
    }
    CHECK_THROWS(mixing_lower_prop32(segment(4), 0.9));
}

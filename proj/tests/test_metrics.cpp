#include "oracles.hpp"

#include "treecut/center_of_mass.hpp"
#include "treecut/generators.hpp"
#include "treecut/metrics.hpp"

#include <doctest.h>

#include <numeric>

using namespace treecut;

namespace {

RootedTree to_tree(const std::vector<int>& p) { return RootedTree::from_parents({p.begin(), p.end()}); }

// The 16-vertex tree with a marked spine o=v0, v1, v2, v3 used in the
// retraction tests: pieces of size 6, 5, 3, 2 hang off the spine.
RootedTree retraction_example() {
    // 0..3 spine; 4-8 below 0 (4-5-{6,7,8}); 9-12 below 1 (9,10; 9-11, 10-12);
    // 13-14 below 2 (13-14); 15 below 3.
    return RootedTree::from_parents({-1, 0, 1, 2, 0, 4, 5, 5, 5, 1, 1, 9, 10, 2, 13, 3});
}

}  // namespace

TEST_CASE("metrics agree with brute force on random trees") {
    std::mt19937_64 gen(11);
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t n = 1 + rep % 40;
        const auto p = oracle::random_tree(n, gen);
        const auto t = to_tree(p);
        const auto m = compute_metrics(t);
        const auto adj = oracle::adjacency(p);
        const auto d = oracle::bfs_distance(adj, oracle::root_of(p));

        std::size_t diameter = 0;
        for (std::size_t v = 0; v < n; ++v) {
            const auto dv = oracle::bfs_distance(adj, static_cast<int>(v));
            diameter = std::max<std::size_t>(diameter, static_cast<std::size_t>(*std::max_element(dv.begin(), dv.end())));
        }
        CHECK(m.diameter == diameter);
        CHECK(m.height == static_cast<std::size_t>(*std::max_element(d.begin(), d.end())));
        for (std::size_t v = 0; v < n; ++v) {
            CHECK(m.depth[v] == static_cast<std::size_t>(d[v]));
            CHECK(m.subtree_size[v] == oracle::subtree_size(p, static_cast<int>(v)));
            CHECK(m.degree[v] == adj[v].size());
        }
        for (std::size_t k = 0; k <= m.height; ++k) {
            const auto count = static_cast<std::size_t>(std::count_if(d.begin(), d.end(), [&](int x) { return x >= static_cast<int>(k); }));
            CHECK(m.tail_size[k] == count);
        }
        CHECK(max_edge_load(m).value == oracle::max_edge_load(p));
        CHECK(max_path_load(m).value == oracle::max_path_load(p));
    }
}

TEST_CASE("sum of depths equals sum of subtree sizes over edges") {
    const auto t = retraction_example();
    const auto m = compute_metrics(t);
    const auto depth_sum = std::accumulate(m.depth.begin(), m.depth.end(), std::size_t{0});
    std::size_t edge_sum = 0;
    for (std::size_t v = 0; v < t.size(); ++v) {
        if (t.parent(static_cast<Vertex>(v)) != kNoVertex) edge_sum += m.subtree_size[v];
    }
    CHECK(depth_sum == edge_sum);
    CHECK(depth_sum == 39);
}

TEST_CASE("edge load, path load and tail on a segment") {
    const auto m = compute_metrics(segment(4));
    CHECK(max_edge_load(m).value == 6);  // |e| |T_e| = k (5-k), max at k = 2,3
    CHECK(max_edge_load(m).edge == 2);
    CHECK(max_path_load(m).value == 4 + 3 + 2 + 1);
    CHECK(max_path_load(m).vertex == 4);
    const auto tail = tail_profile(m);
    CHECK(tail.weighted == std::vector<std::uint64_t>{0, 4, 6, 6, 4});
    CHECK(tail.max == 6);
    CHECK(tail.level == 2);

    const auto single = compute_metrics(segment(0));
    CHECK(max_edge_load(single).edge == kNoVertex);
    CHECK(tail_profile(single).max == 0);
}

TEST_CASE("center of mass against exhaustive search") {
    std::mt19937_64 gen(5);
    for (int rep = 0; rep < 80; ++rep) {
        const std::size_t n = 1 + rep % 30;
        const auto p = oracle::random_tree(n, gen);
        const auto t = to_tree(p);
        const auto com = center_of_mass(t);

        Vertex expected = kNoVertex;
        for (std::size_t x = 0; x < n && expected == kNoVertex; ++x) {
            if (2 * oracle::largest_component_without(p, static_cast<int>(x)) <= n) expected = static_cast<Vertex>(x);
        }
        CHECK(com.vertex == expected);
        if (n >= 2) CHECK(com.delta >= 1.0 / 3.0 - 1e-12);

        // two connected parts covering V, sharing only the center
        std::vector<int> cover(n, 0);
        for (Vertex v : com.part_a) ++cover[static_cast<std::size_t>(v)];
        for (Vertex v : com.part_b) ++cover[static_cast<std::size_t>(v)];
        for (std::size_t v = 0; v < n; ++v) CHECK(cover[v] == (static_cast<Vertex>(v) == com.vertex ? 2 : 1));
        for (const auto* part : {&com.part_a, &com.part_b}) {
            CHECK(std::binary_search(part->begin(), part->end(), com.vertex));
            CHECK_NOTHROW(induced_subtree(t, *part, com.vertex));
        }
        const double small = static_cast<double>(std::min(com.part_a.size(), com.part_b.size()));
        CHECK(com.delta == doctest::Approx(small / static_cast<double>(n)));
    }
}

TEST_CASE("split_at at a leaf") {
    const auto s = split_at(segment(5), 0);
    CHECK(std::min(s.part_a.size(), s.part_b.size()) == 1);
    CHECK(s.delta == doctest::Approx(1.0 / 6.0));
}

#include "oracles.hpp"

#include "treecut/error.hpp"
#include "treecut/generators.hpp"
#include "treecut/metrics.hpp"
#include "treecut/rng.hpp"

#include <doctest.h>

#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

using namespace treecut;

namespace {

std::string fixture(const std::string& name) {
    std::ifstream f(std::string(TREECUT_FIXTURE_DIR) + "/" + name, std::ios::binary);
    REQUIRE(f);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::size_t> level_sizes(const RootedTree& t) {
    const auto m = compute_metrics(t);
    std::vector<std::size_t> sizes(m.height + 1, 0);
    for (std::size_t d : m.depth) ++sizes[d];
    return sizes;
}

// Sites labelled 1..14 (vertex = label - 1), rooted at label 1.
RootedTree labelled_example() {
    std::vector<Vertex> p(14, kNoVertex);
    auto edge = [&](int up, int down) { p[static_cast<std::size_t>(down - 1)] = up - 1; };
    for (int c : {3, 4, 7, 14}) edge(1, c);
    edge(3, 13);
    for (int c : {2, 9, 10}) edge(13, c);
    edge(10, 11);
    edge(4, 12);
    edge(7, 5);
    edge(5, 8);
    edge(14, 6);
    return RootedTree::from_parents(p);
}

}  // namespace

TEST_CASE("splitmix64 reference outputs") {
    std::istringstream in(fixture("splitmix64.txt"));
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::uint64_t seed = 0, want = 0;
        ls >> seed;
        SplitMix64 rng(seed);
        while (ls >> want) CHECK(rng.next() == want);
        ++rows;
    }
    CHECK(rows == 2);

    static_assert(SplitMix64(1234567).next() == 6457827717110365317ULL);
    SplitMix64 a(9);
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
}

TEST_CASE("deterministic families") {
    CHECK(to_text(segment(3)) == "4\n-1 0 1 2\n");
    CHECK(star(5).child_count(0) == 5);
    const auto b = binary_of_size(10);
    for (Vertex v = 1; v < 10; ++v) CHECK(b.parent(v) == (v - 1) / 2);

    const std::vector<std::size_t> deg{3, 4, 2, 3};
    const auto s = spherically_symmetric(deg);
    const auto sizes = level_sizes(s);
    REQUIRE(sizes.size() == 5);
    CHECK(sizes[1] == 3);
    for (std::size_t k = 1; k < 4; ++k) CHECK(sizes[k + 1] == sizes[k] * (deg[k] - 1));

    CHECK(binary_degrees(4) == std::vector<std::size_t>{2, 3, 3, 3});
    CHECK(spherically_symmetric(binary_degrees(4)).size() == 31);
    CHECK(sparse_branching_degrees(8) == std::vector<std::size_t>{3, 3, 2, 3, 2, 2, 2, 3});
}

TEST_CASE("retraction of the 16-vertex example") {
    const auto g = RootedTree::from_parents({-1, 0, 1, 2, 0, 4, 5, 5, 5, 1, 1, 9, 10, 2, 13, 3});
    CHECK(hanging_sizes(g, 3) == std::vector<std::size_t>{6, 5, 3, 2});
    const auto r = retraction(g, 3);
    CHECK(r.size() == 16);
    CHECK(hanging_sizes(r, 3) == std::vector<std::size_t>{6, 5, 3, 2});
    // expected shape: spine 0-1-2-3 with level-filled binary pieces
    const auto expected = RootedTree::from_parents({-1, 0, 1, 2, 0, 0, 4, 4, 5, 1, 1, 9, 9, 2, 2, 3});
    CHECK(canonical_shape(r) == canonical_shape(expected));
    CHECK_THROWS_AS(retraction(g, 0), Error);
}

TEST_CASE("retraction preserves counts on random trees") {
    std::mt19937_64 gen(3);
    for (int rep = 0; rep < 30; ++rep) {
        const auto p = oracle::random_tree(2 + rep, gen);
        const auto t = RootedTree::from_parents({p.begin(), p.end()});
        const Vertex v = t.root() == 0 ? 1 : 0;
        const auto sizes = hanging_sizes(t, v);
        CHECK(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}) == t.size());
        const auto r = retraction(t, v);
        CHECK(r.size() == t.size());
        CHECK(hanging_sizes(r, static_cast<Vertex>(sizes.size() - 1)) == sizes);
    }
}

TEST_CASE("cor15 and peres-sousi vertex counts") {
    for (std::size_t n : {1, 5, 64, 100}) {
        std::size_t expected = n + 1;
        for (std::size_t i = 0; i <= n; ++i) expected += n / ((i + 1) * (i + 1));
        CHECK(corollary15_family(n).size() == expected);
    }
    CHECK(corollary15_family(64).size() == 161);
    CHECK(peres_sousi(1).size() == 5 + 64 + 64 / 2 + 64 / 4);
    CHECK(peres_sousi(2).size() == 17 + 4096 + 1024 + 256);
    CHECK_THROWS_AS(peres_sousi(3, 1000), Error);
    try {
        peres_sousi(5);
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::Resource);
    }
}

TEST_CASE("offspring distributions") {
    const auto g = OffspringDistribution::parse("geom:0.25");
    CHECK(g.mean() == doctest::Approx(3.0));
    CHECK(g.variance() == doctest::Approx(12.0));
    CHECK(g.pmf(2) == doctest::Approx(0.25 * 0.75 * 0.75));
    const auto p = OffspringDistribution::parse("poisson:1.5");
    CHECK(p.pmf(3) == doctest::Approx(std::exp(-1.5) * 1.5 * 1.5 * 1.5 / 6));
    const auto t = OffspringDistribution::parse("table:0.25,0.5,0.25");
    CHECK(t.mean() == doctest::Approx(1.0));
    CHECK(t.variance() == doctest::Approx(0.5));
    CHECK(OffspringDistribution::point_mass(2).mean() == 2.0);
    CHECK_THROWS_AS(OffspringDistribution::parse("table:0.5,0.4"), Error);
    CHECK_THROWS_AS(OffspringDistribution::parse("zipf:2"), Error);
    CHECK_THROWS_AS(OffspringDistribution::parse("geom:0"), Error);

    // sample moments with a fixed seed (loose, deterministic)
    for (const auto& mu : {g, p, t}) {
        SplitMix64 rng(77);
        double s = 0, sb = 0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) s += static_cast<double>(mu.sample(rng));
        for (int i = 0; i < n; ++i) sb += static_cast<double>(mu.sample_size_biased(rng));
        CHECK(s / n == doctest::Approx(mu.mean()).epsilon(0.02));
        const double second = mu.variance() + mu.mean() * mu.mean();
        CHECK(sb / n == doctest::Approx(second / mu.mean()).epsilon(0.02));
    }
}

TEST_CASE("random generators reproduce committed fixtures") {
    const auto geom = OffspringDistribution::geometric(0.5);
    CHECK(to_text(gw_tree(geom, 8, 12)) == fixture("gw_geom0.5_g8_s12.txt"));
    CHECK(to_text(gw_tree(OffspringDistribution::poisson(1.2), 6, 1)) == fixture("gw_poisson1.2_g6_s1.txt"));
    CHECK(to_text(gw_survival_truncated(OffspringDistribution::poisson(1.5), 6, 7)) == fixture("gwsurv_poisson1.5_n6_s7.txt"));
    CHECK(to_text(gw_conditioned_size(geom, 40, 11).tree) == fixture("gwsize_geom0.5_n40_s11.txt"));
    CHECK(to_text(gw_conditioned_size(geom, 40, 11, {}, true).tree) == fixture("gwsize_geom0.5_n40_s11_label1.txt"));
    CHECK(to_text(kesten_tree(OffspringDistribution::parse("table:0.25,0.5,0.25"), 12, 3)) == fixture("kesten_table_n12_s3.txt"));
    CHECK(to_text(kesten_tree(geom, 10, 99)) == fixture("kesten_geom0.5_n10_s99.txt"));
}

TEST_CASE("random generator contracts") {
    const auto geom = OffspringDistribution::geometric(0.5);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto s = gw_survival_truncated(OffspringDistribution::poisson(2.0), 5, seed);
        CHECK(compute_metrics(s).height == 5);

        const auto lt = gw_conditioned_size(geom, 25, seed);
        CHECK(lt.tree.size() == 25);
        std::vector<std::size_t> sorted = lt.labels;
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == identity_labels(25));
        const auto rr = gw_conditioned_size(geom, 25, seed, {}, true);
        CHECK(rr.labels == lt.labels);
        CHECK(rr.labels[static_cast<std::size_t>(rr.tree.root())] == 1);

        const auto k = kesten_tree(geom, 9, seed);
        CHECK(compute_metrics(k).height == 9);

        CHECK(gw_tree(geom, 6, seed) == gw_tree(geom, 6, seed));
    }
    GwOptions tight;
    tight.attempt_cap = 1;
    CHECK_THROWS_AS(gw_survival_truncated(OffspringDistribution::parse("table:0.9,0,0.1"), 30, 1, tight), Error);
    CHECK_THROWS_AS(gw_survival_truncated(geom, 3, 1), Error);  // mean 1 is not supercritical
    GwOptions small;
    small.vertex_cap = 10;
    CHECK_THROWS_AS(gw_tree(OffspringDistribution::point_mass(2), 10, 1, small), Error);
}

TEST_CASE("contour of the labelled 14-site example") {
    const auto t = labelled_example();
    const auto c = contour(t, identity_labels(14));
    const std::vector<std::size_t> expected{0, 1, 2, 3, 2, 3, 2, 3, 4, 3, 2, 1, 0, 1, 2, 1, 0, 1, 2, 3, 2, 1, 0, 1, 2, 1, 0};
    CHECK(c.depths == expected);
    CHECK(c.steps.size() == 27);
    CHECK(c.steps[3] == 1);  // the site labelled 2

    const auto table = normalized_contour(c, 2.0);
    REQUIRE(table.size() == 29);
    CHECK(table.front().x == 0.0);
    CHECK(table.back().x == 1.0);
    CHECK(table[9].x == doctest::Approx(9.0 / 28.0));
    CHECK(table[9].y == doctest::Approx(2.0 * 4.0 / std::sqrt(14.0)));
    CHECK(evaluate_contour(table, 8.5 / 28.0) == doctest::Approx(2.0 * 3.5 / std::sqrt(14.0)));
}

TEST_CASE("contour visits every edge twice") {
    std::mt19937_64 gen(19);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 1 + rep * 3;
        const auto p = oracle::random_tree(n, gen);
        const auto t = RootedTree::from_parents({p.begin(), p.end()});
        std::vector<std::size_t> labels(n);
        std::iota(labels.begin(), labels.end(), 1);
        std::shuffle(labels.begin(), labels.end(), gen);
        const auto c = contour(t, labels);
        REQUIRE(c.steps.size() == 2 * n - 1);
        std::map<std::pair<int, int>, int> seen;
        std::size_t ups = 0, downs = 0;
        for (std::size_t i = 0; i + 1 < c.steps.size(); ++i) {
            const auto a = c.steps[i], b = c.steps[i + 1];
            CHECK((t.parent(a) == b || t.parent(b) == a));
            ++seen[std::minmax(a, b)];
            (c.depths[i + 1] > c.depths[i] ? ups : downs) += 1;
        }
        CHECK(ups == n - 1);
        CHECK(downs == n - 1);
        for (const auto& [e, count] : seen) CHECK(count == 2);
    }
    const std::vector<std::size_t> bad{1, 1};
    CHECK_THROWS_AS(contour(segment(1), bad), Error);
}

#include "treecut/criteria.hpp"
#include "treecut/error.hpp"
#include "treecut/generators.hpp"
#include "treecut/metrics.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

#include <stdlib.h>

using namespace treecut;

TEST_CASE("log-log fit") {
    const std::vector<double> x{1, 2, 4, 8, 16};
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * std::pow(v, 1.5));
    const auto f = loglog_fit(x, y);
    CHECK(f.slope == doctest::Approx(1.5));
    CHECK(f.r2 == doctest::Approx(1.0));
    CHECK(f.points == 5);
    const std::vector<double> flat(5, 2.0);
    CHECK(loglog_fit(x, flat).slope == doctest::Approx(0.0));
    CHECK(loglog_fit(x, flat).r2 == 1.0);
    const std::vector<double> same(5, 4.0);
    CHECK_THROWS_AS(loglog_fit(same, y), Error);
    const std::vector<double> neg{1, -1, 2, 3, 4};
    CHECK_THROWS_AS(loglog_fit(x, neg), Error);
}

TEST_CASE("product ratio of the two-point space") {
    CHECK(product_ratio(segment(1), 0.25) == doctest::Approx(std::numbers::ln2).epsilon(1e-8));
}

TEST_CASE("family dispatch") {
    FamilySpec spec{"segment", {}, {}, {}};
    CHECK(make_family_member(spec, 5, 0) == segment(5));
    spec.family = "binary";
    CHECK(make_family_member(spec, 3, 0).size() == 15);
    spec.family = "spherical";
    spec.degrees = {3, 3, 3};
    CHECK(make_family_member(spec, 2, 0).size() == 1 + 3 + 6);
    CHECK_THROWS_AS(make_family_member(spec, 4, 0), Error);
    spec.family = "gw";
    CHECK_THROWS_AS(spec.validate(), Error);
    spec.offspring = OffspringDistribution::geometric(0.5);
    CHECK(spec.random());
    CHECK(make_family_member(spec, 6, 12) == gw_tree(*spec.offspring, 6, 12));
    spec.family = "trees";
    CHECK_THROWS_AS(spec.validate(), Error);
    CHECK(family_names().size() == 11);
}

TEST_CASE("segments and binary trees show no cutoff") {
    const std::vector<std::size_t> seg{8, 16, 32, 64};
    const auto s = sweep({"segment", {}, {}, {}}, seg, {});
    REQUIRE(s.rows.size() == 4);
    for (const auto& r : s.rows) {
        CHECK(r.mode == "exact");
        CHECK(r.sandwich_ok);
        CHECK(*r.ratio > 0.0);
    }
    CHECK(s.ratio_trend.verdict == "consistent with no cutoff");
    CHECK(s.thm13.verdict == "consistent with no cutoff");
    CHECK(s.thm13.label == "diagnostic");
    CHECK(s.thm16.verdict != "cutoff predicted");
    CHECK(std::abs(s.thm13.fit.slope) < 0.05);

    const std::vector<std::size_t> heights{5, 6, 7, 8};
    const auto b = sweep({"binary", {}, {}, {}}, heights, {});
    CHECK(b.ratio_trend.verdict == "consistent with no cutoff");
    CHECK(b.thm13.verdict == "consistent with no cutoff");

    const std::vector<std::size_t> leaves{4, 8, 16, 32};
    const auto st = sweep({"star", {}, {}, {}}, leaves, {});
    CHECK(st.thm13.verdict == "consistent with no cutoff");
    CHECK(st.thm16.verdict != "cutoff predicted");
}

TEST_CASE("cor15 sweep: path load outgrows edge load, ratio increases") {
    const std::vector<std::size_t> sizes{16, 32, 64, 128};
    const auto r = sweep({"cor15", {}, {}, {}}, sizes, {});
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
        CHECK(*r.rows[i].ratio > *r.rows[i - 1].ratio);
        CHECK(r.rows[i].q13 >= r.rows[i - 1].q13 * 0.99);
    }
    const std::vector<std::size_t> two{64, 128};
    CHECK(sweep({"cor15", {}, {}, {}}, two, {}).thm13.verdict == "insufficient data");
}

TEST_CASE("sweep results do not depend on the worker count") {
    FamilySpec spec{"gw-size", OffspringDistribution::geometric(0.5), {}, {}};
    const std::vector<std::size_t> sizes{10, 14, 18};
    SweepOptions one;
    one.seed = 5;
    one.replicates = 3;
    SweepOptions many = one;
    many.jobs = 4;
    const auto a = sweep(spec, sizes, one);
    const auto b = sweep(spec, sizes, many);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].vertices == sizes[i]);
        CHECK(a.rows[i].replicates == 3);
        CHECK(a.rows[i].t_rel == b.rows[i].t_rel);
        CHECK(*a.rows[i].ratio == *b.rows[i].ratio);
    }
}

TEST_CASE("bounded rows above the dense cap") {
    const auto exact = analyse(segment(80), 80, 0.25);
    ::setenv("TREECUT_MAX_VERTICES", "50", 1);
    const auto row = analyse(segment(80), 80, 0.25);
    ::unsetenv("TREECUT_MAX_VERTICES");
    CHECK(exact.mode == "exact");
    CHECK(row.mode == "bounded");
    CHECK_FALSE(row.t_mix.has_value());
    CHECK(row.sandwich_ok);
    CHECK(row.t_rel == doctest::Approx(exact.t_rel).epsilon(1e-9));
    CHECK(row.hardy_lower <= row.t_rel);
    // on a segment the Hardy interval's upper end is attained
    CHECK(row.t_rel <= row.min_upper * (1 + 1e-9));
}

TEST_CASE("spine conditions") {
    const std::size_t n = 64;
    const auto t = corollary15_family(n);
    const auto r = check_thm14(t, static_cast<Vertex>(n));
    CHECK(r.spine_load == r.max_path_load);
    CHECK(r.vertices == static_cast<double>(t.size()));

    const auto seg = check_thm14(segment(20), 20);
    CHECK(seg.spine_load == doctest::Approx(20.0 * 21 / 2));

    std::vector<Thm14Report> reports;
    for (std::size_t m : {16, 32, 64, 128}) reports.push_back(check_thm14(segment(m), static_cast<Vertex>(m)));
    const auto trend = thm14_trend(reports);
    CHECK(trend.comparable.verdict == "comparable");
    CHECK(trend.dominance.verdict == "growing");
}

TEST_CASE("retraction alpha") {
    // spine 0..5; a path of length L hangs below vertex 2
    for (std::size_t len : {1, 3, 6}) {
        std::vector<Vertex> p{kNoVertex, 0, 1, 2, 3, 4};
        Vertex prev = 2;
        for (std::size_t i = 0; i < len; ++i) {
            p.push_back(prev);
            prev = static_cast<Vertex>(p.size() - 1);
        }
        const auto t = RootedTree::from_parents(p);
        CHECK(retraction_alpha(t, 5) == doctest::Approx((static_cast<double>(len) + 1) / 2));
    }
    CHECK(retraction_alpha(segment(7), 7) == 1.0);
    // perfect binary pieces stay below 2; heap-filled ones with a partial
    // last level reach about 2.4
    const auto perfect = RootedTree::from_parents({-1, 0, 1, 1, 2, 2, 3, 3, 0});
    CHECK(retraction_alpha(perfect, 8) < 2.0);
    CHECK(retraction_alpha(corollary15_family(40), 40) <= 2.5);
    const auto g = RootedTree::from_parents({-1, 0, 1, 2, 0, 4, 5, 5, 5, 1, 1, 9, 10, 2, 13, 3});
    CHECK(retraction_alpha(retraction(g, 3), 3) <= 2.0);
}

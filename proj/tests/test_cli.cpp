#include "treecut/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = treecut::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "treecut_cli_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

}  // namespace

TEST_CASE("cli: gen emits the canonical text format") {
    const auto r = call({"gen", "--family", "segment", "--n", "3"});
    CHECK(r.code == 0);
    CHECK(r.out == "4\n-1 0 1 2\n");
}

TEST_CASE("cli: mix on a two-point file") {
    const auto path = scratch("p2.txt");
    write(path, "2\n-1 0\n");
    const auto r = call({"mix", "--input", path.string(), "--eps", "0.25"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["schema"] == "treecut/1");
    CHECK(j["t_mix"].get<double>() == doctest::Approx(std::numbers::ln2 / 2).epsilon(1e-8));

    const auto c = call({"mix", "--input", path.string(), "--curve", "3", "--t-max", "1"});
    REQUIRE(c.code == 0);
    std::ostringstream expected;
    char line[64];
    expected << "t,tv\n";
    for (double t : {0.0, 0.5, 1.0}) {
        std::snprintf(line, sizeof line, "%.12g,%.12g\n", t, 0.5 * std::exp(-2 * t));
        expected << line;
    }
    CHECK(c.out == expected.str());

    const auto s = call({"mix", "--input", path.string(), "--start", "1"});
    CHECK(nlohmann::json::parse(s.out)["start"] == 1);
    CHECK(call({"mix", "--input", path.string(), "--start", "7"}).code == 2);
}

TEST_CASE("cli: exit codes") {
    CHECK(call({"gen", "--family", "nope", "--n", "3"}).code == 2);
    CHECK(call({"gen", "--family", "gw", "--n", "3", "--offspring", "geom:0.5"}).code == 2);  // no seed
    CHECK(call({"gen", "--family", "peres-sousi", "--k", "5"}).code == 3);
    CHECK(call({"metrics"}).code == 2);
    CHECK(call({"bogus"}).code == 2);
    CHECK(call({"--help"}).code == 0);
    const auto bad = scratch("bad.txt");
    write(bad, "3\n-1 0 7\n");
    const auto r = call({"metrics", "--input", bad.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("index_out_of_range") != std::string::npos);
    CHECK(call({"metrics", "--input", scratch("missing.txt").string()}).code == 2);
    CHECK(call({"metrics", "--input", bad.string(), "--family", "segment"}).code == 2);
}

TEST_CASE("cli: gen -> file -> metrics round trip and determinism") {
    const std::vector<std::string> family{"--family", "gw-size", "--offspring", "geom:0.5", "--n", "30", "--seed", "4"};
    auto gen_args = std::vector<std::string>{"gen"};
    gen_args.insert(gen_args.end(), family.begin(), family.end());
    const auto tree = call(gen_args);
    REQUIRE(tree.code == 0);
    CHECK(call(gen_args).out == tree.out);

    const auto path = scratch("gw.txt");
    write(path, tree.out);
    auto metric_args = std::vector<std::string>{"metrics"};
    metric_args.insert(metric_args.end(), family.begin(), family.end());
    const auto direct = call(metric_args);
    const auto via_file = call({"metrics", "--input", path.string()});
    REQUIRE(direct.code == 0);
    CHECK(direct.out == via_file.out);
    CHECK(nlohmann::json::parse(direct.out)["vertices"] == 30);
}

TEST_CASE("cli: spectrum, bounds and bdchain") {
    const auto s = nlohmann::json::parse(call({"spectrum", "--family", "star", "--n", "4"}).out);
    CHECK(s["gap"].get<double>() == doctest::Approx(1.0));
    CHECK(s["eigenvalues"].size() == 5);
    const auto it = nlohmann::json::parse(call({"spectrum", "--family", "segment", "--n", "30", "--iterative"}).out);
    CHECK(it["mode"] == "iterative");
    CHECK(it["t_rel"].get<double>() == doctest::Approx(1.0 / (4 * std::pow(std::sin(std::numbers::pi / 62), 2))));

    const auto b = nlohmann::json::parse(call({"bounds", "--family", "cor15", "--n", "16"}).out);
    CHECK(b["sandwich_ok"] == true);
    for (const char* key : {"hardy_lower", "cor24", "cor25", "cor26", "tail32", "hardy_interval"}) CHECK(b["bounds"].contains(key));

    const auto d = nlohmann::json::parse(call({"bdchain", "--degrees", "2,3,3"}).out);
    CHECK(d["n"] == 4);
    CHECK(d["lift_residual"].get<double>() < 1e-8);
    CHECK(d["rates"]["up"].size() == 7);
    CHECK(call({"bdchain", "--family", "segment", "--n", "4"}).code == 2);
}

TEST_CASE("cli: sweep") {
    const auto r = call({"sweep", "--family", "cor15", "--sizes", "64,128"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["rows"].size() == 2);
    CHECK(j["rows"][1]["ratio"].get<double>() > j["rows"][0]["ratio"].get<double>());
    CHECK(j["trends"]["ratio"]["verdict"] == "insufficient data");
    CHECK(j["trends"]["thm16"]["label"] == "diagnostic");

    const auto csv_path = scratch("report.csv");
    CHECK(call({"sweep", "--family", "segment", "--sizes", "4,8", "--out", csv_path.string()}).code == 0);
    std::ifstream f(csv_path);
    std::string header;
    std::getline(f, header);
    CHECK(header.rfind("n,vertices,mode,t_rel,t_mix,ratio", 0) == 0);

    CHECK(call({"sweep", "--family", "gw-size", "--sizes", "10", "--offspring", "geom:0.5"}).code == 2);
    CHECK(call({"sweep", "--family", "segment"}).code == 2);
}

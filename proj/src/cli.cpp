#include "treecut/cli.hpp"

#include "treecut/bdchain.hpp"
#include "treecut/center_of_mass.hpp"
#include "treecut/criteria.hpp"
#include "treecut/error.hpp"
#include "treecut/generators.hpp"
#include "treecut/metrics.hpp"
#include "treecut/mixing.hpp"
#include "treecut/spectral.hpp"
#include "treecut/tree.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace treecut::cli {

namespace {

using nlohmann::ordered_json;

constexpr const char* kSchema = "treecut/1";

ordered_json header(const std::string& subcommand) {
    ordered_json j;
    j["schema"] = kSchema;
    j["subcommand"] = subcommand;
    return j;
}

std::string g12(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void add_source(CLI::App* sub, RunConfig& c) {
    auto* in = sub->add_option("--input", c.input, "Tree text file ('-' for stdin)");
    auto* fam = sub->add_option("--family", c.family, "Named family")->excludes(in);
    in->excludes(fam);
    sub->add_option("--n", c.n, "Family size parameter");
    sub->add_option("--k", c.k, "Peres-Sousi index");
    sub->add_option("--degrees", c.degrees, "Level degrees, comma separated")->delimiter(',');
    sub->add_option("--offspring", c.offspring, "Offspring law: geom:p | poisson:l | table:p0,p1,...");
    sub->add_option("--seed", c.seed, "Seed (random families)");
    sub->add_flag("--reroot-label-one", c.reroot_label_one, "gw-size: root at the vertex labelled 1");
}

void add_out(CLI::App* sub, RunConfig& c) { sub->add_option("--out", c.out, "Output path (default stdout)"); }

std::string read_all(const std::string& path) {
    if (path == "-") {
        return {std::istreambuf_iterator<char>(std::cin), {}};
    }
    std::ifstream f(path, std::ios::binary);
    require(static_cast<bool>(f), ErrorCode::InvalidArgument, "cannot read '" + path + "'");
    return {std::istreambuf_iterator<char>(f), {}};
}

FamilySpec family_spec(const RunConfig& c) {
    FamilySpec spec;
    spec.family = *c.family;
    spec.degrees = c.degrees;
    if (c.offspring) spec.offspring = OffspringDistribution::parse(*c.offspring);
    spec.validate();
    require(!spec.random() || c.seed.has_value(), ErrorCode::InvalidArgument, "family '" + spec.family + "' needs --seed");
    return spec;
}

RootedTree load_tree(const RunConfig& c) {
    if (c.input) return parse_tree_text(read_all(*c.input));
    require(c.family.has_value(), ErrorCode::InvalidArgument, "give exactly one of --input or --family");
    const auto spec = family_spec(c);
    const std::uint64_t seed = c.seed.value_or(0);
    if (spec.family == "gw-size") {
        require(c.n.has_value(), ErrorCode::InvalidArgument, "family 'gw-size' needs --n");
        return gw_conditioned_size(*spec.offspring, *c.n, seed, spec.gw, c.reroot_label_one).tree;
    }
    std::optional<std::size_t> size = spec.family == "peres-sousi" ? (c.k ? c.k : c.n) : c.n;
    if (!size && spec.family == "spherical") size = c.degrees.size();
    require(size.has_value(), ErrorCode::InvalidArgument,
            "family '" + spec.family + "' needs " + (spec.family == "peres-sousi" ? "--k" : "--n"));
    return make_family_member(spec, *size, seed);
}

class Sink {
public:
    Sink(const RunConfig& c, std::ostream& fallback) {
        if (c.out) {
            file_.open(*c.out, std::ios::binary);
            require(static_cast<bool>(file_), ErrorCode::InvalidArgument, "cannot write '" + *c.out + "'");
        }
        os_ = c.out ? static_cast<std::ostream*>(&file_) : &fallback;
    }
    std::ostream& operator*() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

void emit(const RunConfig& c, std::ostream& out, const ordered_json& j) {
    Sink s(c, out);
    *s << j.dump(2) << '\n';
}

// --------------------------------------------------------------------------

int cmd_gen(const RunConfig& c, std::ostream& out) {
    Sink s(c, out);
    *s << to_text(load_tree(c));
    return kOk;
}

int cmd_metrics(const RunConfig& c, std::ostream& out) {
    const auto tree = load_tree(c);
    const auto m = compute_metrics(tree);
    const auto edge = max_edge_load(m);
    const auto path = max_path_load(m);
    const auto tail = tail_profile(m);
    const auto com = center_of_mass(tree);
    auto j = header("metrics");
    j["vertices"] = tree.size();
    j["root"] = tree.root();
    j["height"] = m.height;
    j["diameter"] = m.diameter;
    j["max_degree"] = m.max_degree;
    j["max_edge_load"] = {{"value", edge.value}, {"edge", edge.edge}};
    j["max_path_load"] = {{"value", path.value}, {"vertex", path.vertex}};
    j["tail_max"] = {{"value", tail.max}, {"level", tail.level}};
    j["tail_sizes"] = m.tail_size;
    j["center_of_mass"] = {{"vertex", com.vertex}, {"delta", com.delta}};
    j["root_delta"] = split_at(tree, tree.root()).delta;
    emit(c, out, j);
    return kOk;
}

struct Relaxation {
    std::string mode;
    double gap = 0.0;
    double t_rel = 0.0;
    std::optional<SpectrumResult> dense;
    std::optional<GapEstimate> iterative;
};

Relaxation relaxation(const RunConfig& c, const RootedTree& tree) {
    Relaxation r;
    if (c.iterative || tree.size() > dense_vertex_cap()) {
        require(tree.size() >= 2, ErrorCode::UndefinedGap, "gap undefined for a single vertex");
        LanczosOptions opts;
        opts.tolerance = c.lanczos_tol;
        r.iterative = iterative_gap(tree, opts);
        r.mode = "iterative";
        r.gap = r.iterative->gap;
        r.t_rel = r.iterative->t_rel;
    } else {
        r.dense = spectrum(tree);
        r.mode = "dense";
        r.gap = r.dense->gap;
        r.t_rel = r.dense->t_rel;
    }
    return r;
}

int cmd_spectrum(const RunConfig& c, std::ostream& out) {
    const auto tree = load_tree(c);
    const auto r = relaxation(c, tree);
    auto j = header("spectrum");
    j["vertices"] = tree.size();
    j["mode"] = r.mode;
    j["gap"] = r.gap;
    j["t_rel"] = r.t_rel;
    if (r.iterative) {
        j["iterations"] = r.iterative->iterations;
        j["residual"] = r.iterative->residual;
    }
    if (r.dense && c.eigenvalues) j["eigenvalues"] = r.dense->eigenvalues;
    emit(c, out, j);
    return kOk;
}

int cmd_bounds(const RunConfig& c, std::ostream& out) {
    const auto tree = load_tree(c);
    const auto r = relaxation(c, tree);
    const auto b = all_bounds(tree);
    auto j = header("bounds");
    j["vertices"] = tree.size();
    j["mode"] = r.mode;
    j["gap"] = r.gap;
    j["t_rel"] = r.t_rel;
    ordered_json bj;
    bj["hardy_lower"] = {{"bound", b.hardy_lower.bound},
                         {"delta", b.hardy_lower.delta},
                         {"center", b.hardy_lower.center},
                         {"max_edge_load", b.hardy_lower.max_edge_load},
                         {"edge", b.hardy_lower.edge}};
    bj["cor24"] = b.cor24;
    bj["cor24_weighted"] = b.cor24_weighted;
    bj["cor25"] = {{"bound", b.cor25.bound}, {"constant", b.cor25.constant}};
    bj["cor26"] = b.cor26;
    bj["tail32"] = b.tail32;
    bj["hardy_interval"] = {{"center", b.hardy_interval.center},
                            {"delta", b.hardy_interval.delta},
                            {"A", b.hardy_interval.A},
                            {"t_rel_lower", b.hardy_interval.t_rel_lower},
                            {"t_rel_upper", b.hardy_interval.t_rel_upper},
                            {"gap_lower", b.hardy_interval.gap_lower},
                            {"gap_upper", b.hardy_interval.gap_upper}};
    bj["min_upper"] = b.min_upper;
    j["bounds"] = bj;
    constexpr double kRel = 1e-8;
    j["sandwich_ok"] = b.hardy_lower.bound <= r.t_rel * (1 + kRel) && r.t_rel <= b.min_upper * (1 + kRel);
    emit(c, out, j);
    return kOk;
}

Vertex parse_start(const std::string& s, std::size_t n) {
    long long v = -1;
    std::istringstream is(s);
    require(static_cast<bool>(is >> v) && is.eof() && v >= 0 && static_cast<std::size_t>(v) < n, ErrorCode::InvalidArgument,
            "--start must be 'worst' or a vertex index below " + std::to_string(n));
    return static_cast<Vertex>(v);
}

int cmd_mix(const RunConfig& c, std::ostream& out) {
    const auto tree = load_tree(c);
    const HeatKernel kernel(tree);
    const bool worst = c.start == "worst";
    const Vertex start = worst ? kNoVertex : parse_start(c.start, tree.size());
    MixingResult mix;
    if (worst) {
        mix = mixing_time(kernel, c.epsilon);
    } else {
        mix.epsilon = c.epsilon;
        mix.t_mix = mixing_time_from(kernel, start, c.epsilon);
        mix.worst_start = start;
    }
    const double t_rel = tree.size() >= 2 ? kernel.t_rel() : 0.0;

    if (c.curve > 0) {
        const double t_max = c.t_max.value_or(mix.t_mix > 0.0 ? 2.0 * mix.t_mix : std::max(t_rel, 1.0));
        const auto curve = tv_curve(kernel, t_max, c.curve, start);
        Sink s(c, out);
        *s << "t,tv\n";
        for (const auto& p : curve) *s << g12(p.t) << ',' << g12(p.tv) << '\n';
        return kOk;
    }
    auto j = header("mix");
    j["vertices"] = tree.size();
    j["epsilon"] = c.epsilon;
    if (worst) {
        j["start"] = "worst";
    } else {
        j["start"] = start;
    }
    j["t_mix"] = mix.t_mix;
    j["worst_start"] = mix.worst_start;
    j["t_rel"] = t_rel;
    j["ratio"] = t_rel > 0.0 ? mix.t_mix / t_rel : 0.0;
    emit(c, out, j);
    return kOk;
}

int cmd_bdchain(const RunConfig& c, std::ostream& out) {
    const bool bare_degrees = !c.input && !c.family && !c.degrees.empty();
    const RootedTree tree = bare_degrees ? spherically_symmetric(c.degrees) : load_tree(c);
    const auto p = project_tree(tree);
    const auto l = lift(p.tree, p.chain);
    const auto m = compute_metrics(p.tree);
    const auto& ch = p.chain;
    auto j = header("bdchain");
    j["n"] = ch.n;
    j["stripped"] = p.stripped;
    j["degrees"] = ch.degrees;
    j["rates"] = {{"up", ch.up}, {"down", ch.down}};
    j["stationary"] = ch.stationary;
    j["gap"] = ch.gap;
    j["eigenfunction"] = ch.eigenfunction;
    j["antisymmetrized"] = ch.antisymmetrized;
    j["cs_bound"] = cs_lower_bound(ch, m.max_degree);
    j["lift_residual"] = l.residual;
    j["detailed_balance_residual"] = detailed_balance_residual(ch);
    emit(c, out, j);
    return kOk;
}

ordered_json verdict_json(const Verdict& v) {
    ordered_json j;
    j["quantity"] = v.quantity;
    if (v.fit.points >= 4) {
        j["slope"] = v.fit.slope;
        j["r2"] = v.fit.r2;
    } else {
        j["slope"] = nullptr;
        j["r2"] = nullptr;
    }
    j["points"] = v.fit.points;
    j["threshold"] = v.threshold;
    j["verdict"] = v.verdict;
    j["label"] = v.label;
    return j;
}

template <class T>
ordered_json opt(const std::optional<T>& x) {
    return x ? ordered_json(*x) : ordered_json(nullptr);
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
    require(c.family.has_value(), ErrorCode::InvalidArgument, "sweep needs --family");
    require(!c.sizes.empty(), ErrorCode::InvalidArgument, "sweep needs --sizes");
    const auto spec = family_spec(c);
    SweepOptions opts;
    opts.epsilon = c.epsilon;
    opts.seed = c.seed.value_or(0);
    opts.replicates = c.replicates;
    opts.jobs = c.jobs;
    opts.threshold = c.threshold;
    const auto report = sweep(spec, c.sizes, opts);

    if (c.format == "csv") {
        Sink s(c, out);
        *s << "n,vertices,mode,t_rel,t_mix,ratio,hardy_lower,min_upper,sandwich_ok,max_edge_load,max_path_load,tail_max,"
              "max_degree,q13,q16,replicates\n";
        for (const auto& r : report.rows) {
            *s << r.n << ',' << g12(r.vertices) << ',' << r.mode << ',' << g12(r.t_rel) << ',' << (r.t_mix ? g12(*r.t_mix) : "")
               << ',' << (r.ratio ? g12(*r.ratio) : "") << ',' << g12(r.hardy_lower) << ',' << g12(r.min_upper) << ','
               << (r.sandwich_ok ? "true" : "false") << ',' << g12(r.max_edge_load) << ',' << g12(r.max_path_load) << ','
               << g12(r.tail_max) << ',' << g12(r.max_degree) << ',' << g12(r.q13) << ',' << g12(r.q16) << ',' << r.replicates
               << '\n';
        }
        return kOk;
    }
    auto j = header("sweep");
    j["family"] = report.family;
    j["offspring"] = spec.offspring ? ordered_json(spec.offspring->to_string()) : ordered_json(nullptr);
    j["epsilon"] = report.epsilon;
    j["seed"] = report.seed;
    j["replicates"] = c.replicates;
    auto rows = ordered_json::array();
    for (const auto& r : report.rows) {
        ordered_json row;
        row["n"] = r.n;
        row["vertices"] = r.vertices;
        row["mode"] = r.mode;
        row["t_rel"] = r.t_rel;
        row["t_mix"] = opt(r.t_mix);
        row["ratio"] = opt(r.ratio);
        row["hardy_lower"] = r.hardy_lower;
        row["min_upper"] = r.min_upper;
        row["sandwich_ok"] = r.sandwich_ok;
        row["max_edge_load"] = r.max_edge_load;
        row["max_path_load"] = r.max_path_load;
        row["tail_max"] = r.tail_max;
        row["max_degree"] = r.max_degree;
        row["q13"] = r.q13;
        row["q16"] = r.q16;
        row["replicates"] = r.replicates;
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    j["trends"] = {{"ratio", verdict_json(report.ratio_trend)},
                   {"thm13", verdict_json(report.thm13)},
                   {"thm16", verdict_json(report.thm16)}};
    emit(c, out, j);
    return kOk;
}

int exit_code(const Error& e) {
    switch (e.category()) {
        case ErrorCategory::Validation: return kValidation;
        case ErrorCategory::Resource: return kResource;
        case ErrorCategory::Numerical: return kFailure;
    }
    return kFailure;
}

}  // namespace

std::optional<int> parse(std::span<const std::string> args, RunConfig& c, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mixing, relaxation and cutoff diagnostics for random walks on trees", "treecut"};
    app.require_subcommand(1);
    auto families = std::string("Families: ");
    for (const char* f : family_names()) families += std::string(f) + " ";
    app.footer(families);

    auto* gen = app.add_subcommand("gen", "Emit a tree in the canonical text format");
    add_source(gen, c);
    add_out(gen, c);

    auto* metrics = app.add_subcommand("metrics", "Depths, loads, tail profile, center of mass");
    add_source(metrics, c);
    add_out(metrics, c);

    auto* spec = app.add_subcommand("spectrum", "Laplacian spectrum, gap and relaxation time");
    add_source(spec, c);
    add_out(spec, c);
    spec->add_flag("--iterative", c.iterative, "Gap only, by Lanczos on the pseudo-inverse");
    spec->add_flag("!--no-eigenvalues", c.eigenvalues, "Omit the eigenvalue list");
    spec->add_option("--lanczos-tol", c.lanczos_tol, "Relative Ritz residual target")->capture_default_str();

    auto* bounds = app.add_subcommand("bounds", "Relaxation time with every lower/upper bound");
    add_source(bounds, c);
    add_out(bounds, c);
    bounds->add_flag("--iterative", c.iterative, "Gap by Lanczos even below the dense cap");
    bounds->add_option("--lanczos-tol", c.lanczos_tol, "Relative Ritz residual target")->capture_default_str();

    auto* mix = app.add_subcommand("mix", "Exact worst-start mixing time and TV curves");
    add_source(mix, c);
    add_out(mix, c);
    mix->add_option("--eps", c.epsilon, "TV threshold")->capture_default_str();
    mix->add_option("--curve", c.curve, "Emit an N-sample CSV curve t,tv instead of JSON");
    mix->add_option("--start", c.start, "Start vertex or 'worst'")->capture_default_str();
    mix->add_option("--t-max", c.t_max, "Curve horizon (default 2 t_mix)");

    auto* bd = app.add_subcommand("bdchain", "Birth-and-death projection of a spherically symmetric tree");
    add_source(bd, c);
    add_out(bd, c);

    auto* sw = app.add_subcommand("sweep", "Cutoff diagnostics over a family of sizes");
    sw->add_option("--family", c.family, "Named family")->required();
    sw->add_option("--sizes", c.sizes, "Comma-separated sizes")->delimiter(',')->required();
    sw->add_option("--degrees", c.degrees, "Level degrees (spherical)")->delimiter(',');
    sw->add_option("--offspring", c.offspring, "Offspring law (random families)");
    sw->add_option("--seed", c.seed, "Master seed");
    sw->add_option("--eps", c.epsilon, "TV threshold")->capture_default_str();
    sw->add_option("--replicates", c.replicates, "Instances per size (random families)")->capture_default_str();
    sw->add_option("--jobs", c.jobs, "Worker threads")->capture_default_str();
    sw->add_option("--threshold", c.threshold, "Log-log slope threshold")->capture_default_str();
    auto* fmt = sw->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    add_out(sw, c);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kValidation;
    }
    c.subcommand = app.get_subcommands().front()->get_name();
    if (c.subcommand == "sweep" && fmt->count() == 0 && c.out && c.out->ends_with(".csv")) c.format = "csv";
    return std::nullopt;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
    try {
        if (c.subcommand == "gen") return cmd_gen(c, out);
        if (c.subcommand == "metrics") return cmd_metrics(c, out);
        if (c.subcommand == "spectrum") return cmd_spectrum(c, out);
        if (c.subcommand == "bounds") return cmd_bounds(c, out);
        if (c.subcommand == "mix") return cmd_mix(c, out);
        if (c.subcommand == "bdchain") return cmd_bdchain(c, out);
        if (c.subcommand == "sweep") return cmd_sweep(c, out);
        err << "error: unknown subcommand '" << c.subcommand << "'\n";
        return kValidation;
    } catch (const Error& e) {
        err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
        return exit_code(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    if (auto code = parse(args, c, out, err)) return *code;
    return run(c, out, err);
}

}  // namespace treecut::cli

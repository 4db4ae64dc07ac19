#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace treecut::cli {

/// Parsed command line. Exactly one of `input` / `family` is set for the
/// tree-consuming subcommands; `sweep` always takes a family.
struct RunConfig {
    std::string subcommand;
    std::optional<std::string> input;   // tree text file, "-" for stdin
    std::optional<std::string> family;
    std::optional<std::size_t> n;
    std::optional<std::size_t> k;
    std::vector<std::size_t> degrees;
    std::optional<std::string> offspring;
    std::optional<std::uint64_t> seed;
    bool reroot_label_one = false;
    double epsilon = 0.25;
    std::string format = "json";        // json | csv | text
    std::optional<std::string> out;     // output path, stdout when absent
    // mix
    std::size_t curve = 0;
    std::string start = "worst";
    std::optional<double> t_max;
    // spectrum
    bool iterative = false;
    bool eigenvalues = true;
    double lanczos_tol = 1e-10;
    // sweep
    std::vector<std::size_t> sizes;
    std::size_t replicates = 1;
    std::size_t jobs = 1;
    double threshold = 0.05;
};

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;     // numerical failure or I/O
inline constexpr int kValidation = 2;  // bad flags, malformed input, unknown family
inline constexpr int kResource = 3;    // size or attempt cap exceeded

/// Parses argv-style arguments (without the program name). Returns the exit
/// code when parsing ends the run (--help, errors), otherwise nullopt.
std::optional<int> parse(std::span<const std::string> args, RunConfig& config, std::ostream& out, std::ostream& err);

/// Executes a parsed configuration.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse + run.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace treecut::cli

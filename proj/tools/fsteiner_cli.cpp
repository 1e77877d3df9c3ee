// fsteiner: leaves, trees, Steiner trees and lemma checks for the
// two-map self-similar tree.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "fsteiner/io.hpp"
#include "fsteiner/kernels.hpp"
#include "fsteiner/lemmas.hpp"
#include "fsteiner/smt.hpp"
#include "fsteiner/tree.hpp"

namespace {

enum ExitCode { kOk = 0, kAssertFailed = 1, kUsage = 2, kIo = 3 };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    double lambda = fsteiner::kTheoremThreshold;
    int depth = 0;
    std::string format;
    std::string out;
    std::uint64_t seed = 20240229;
    int threads = 0;
    bool assert_mode = false;
};

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw IoError("cannot write to standard output");
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    f.close();
    if (!f) throw IoError("failed writing '" + path + "'");
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << f.rdbuf();
    if (f.bad()) throw IoError("failed reading '" + path + "'");
    return ss.str();
}

/// Open interval (0, 1/2); CLI::Range would admit the endpoints.
const CLI::Validator kLambdaRange(
    [](std::string& s) -> std::string {
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(s, &used);
            if (used != s.size()) return "lambda must be a number";
        } catch (const std::exception&) {
            return "lambda must be a number";
        }
        if (!std::isfinite(v) || !(v > 0.0) || !(v < 0.5)) return "lambda must lie in the open interval (0, 0.5)";
        return {};
    },
    "in (0, 0.5)", "lambda");

void add_common(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--lambda", cfg.lambda, "Contraction ratio of the two maps")
        ->check(kLambdaRange)
        ->capture_default_str();
    cmd->add_option("--out", cfg.out, "Output file (default: standard output)");
    cmd->add_option("--threads", cfg.threads, "OpenMP threads (0: runtime default)")->check(CLI::Range(0, 1024));
}

int run_leaves(const RunConfig& cfg) {
    const fsteiner::IfsParams params(cfg.lambda);
    const fsteiner::LeafSet leaves = fsteiner::generate_leaves(params, cfg.depth);
    emit(cfg.format == "json" ? fsteiner::io::leaves_json(leaves, params) : fsteiner::io::leaves_csv(leaves), cfg.out);
    return kOk;
}

int run_tree(const RunConfig& cfg) {
    const fsteiner::IfsParams params(cfg.lambda);
    const fsteiner::TruncatedTree tree = fsteiner::build_tree(params, cfg.depth);
    emit(cfg.format == "svg" ? fsteiner::io::tree_svg(tree) : fsteiner::io::tree_json(tree), cfg.out);
    return kOk;
}

int run_solve(const RunConfig& cfg, const std::string& input, const std::string& svg_path) {
    fsteiner::TerminalSpec spec;
    const std::string text = slurp(input);
    try {
        spec = fsteiner::io::parse_terminal_spec(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string(e.what()) + " (in '" + input + "')");
    }
    if (spec.topology_terminals() > fsteiner::kMaxEnumeratedTerminals) {
        throw UsageError("'" + input + "' has " + std::to_string(spec.topology_terminals()) +
                         " terminals (counting the line foot); exhaustive solving is capped at " +
                         std::to_string(fsteiner::kMaxEnumeratedTerminals));
    }
    const fsteiner::SteinerTree tree = spec.line ? fsteiner::solve_with_line(spec) : fsteiner::solve(spec);
    const fsteiner::MinimizerReport report = fsteiner::validate_minimizer(tree, spec);
    if (cfg.format == "svg") {
        emit(fsteiner::io::steiner_svg(tree, spec), cfg.out);
    } else {
        emit(fsteiner::io::steiner_json(tree, report), cfg.out);
    }
    if (!svg_path.empty()) emit(fsteiner::io::steiner_svg(tree, spec), svg_path);
    return cfg.assert_mode && !report.ok ? kAssertFailed : kOk;
}

int run_verify(const RunConfig& cfg, int solver_depth) {
    const fsteiner::IfsParams params(cfg.lambda);
    fsteiner::SuiteOptions options;
    options.depth = cfg.depth;
    options.solver_depth = solver_depth;
    options.seed = cfg.seed;
    const auto reports = fsteiner::verification_suite(params, options);
    emit(cfg.format == "json" ? fsteiner::io::reports_json(reports, params) : fsteiner::io::reports_table(reports),
         cfg.out);
    bool ok = true;
    for (const auto& r : reports) ok = ok && (r.passed || !r.asserted);
    return cfg.assert_mode && !ok ? kAssertFailed : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-similar Steiner tree toolkit"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* leaves = app.add_subcommand("leaves", "Write the leaf set A_N");
    add_common(leaves, cfg);
    leaves->add_option("--depth", cfg.depth, "Leaf depth N")->check(CLI::Range(1, 24))->default_val(10);
    leaves->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->default_val("csv");

    auto* tree = app.add_subcommand("tree", "Write the truncated tree");
    add_common(tree, cfg);
    tree->add_option("--depth", cfg.depth, "Tree depth N")->check(CLI::Range(1, 20))->default_val(6);
    tree->add_option("--format", cfg.format, "json or svg")
        ->check(CLI::IsMember({"json", "svg"}))
        ->default_val("json");

    std::string input;
    std::string svg_path;
    auto* solve = app.add_subcommand("solve", "Steiner minimal tree of a terminal file");
    add_common(solve, cfg);
    solve->add_option("terminals", input, "Terminal spec JSON file")->required();
    solve->add_option("--format", cfg.format, "json or svg")
        ->check(CLI::IsMember({"json", "svg"}))
        ->default_val("json");
    solve->add_option("--svg", svg_path, "Also write an SVG drawing here");
    solve->add_flag("--assert", cfg.assert_mode, "Exit 1 if the result fails validation");

    int solver_depth = 3;
    auto* verify = app.add_subcommand("verify", "Run every lemma check at one lambda");
    add_common(verify, cfg);
    verify->add_option("--depth", cfg.depth, "Leaf depth of the empirical checks")
        ->check(CLI::Range(3, 16))
        ->default_val(12);
    verify->add_option("--solver-depth", solver_depth, "Depth N of the solver experiments")
        ->check(CLI::Range(2, 4))
        ->capture_default_str();
    verify->add_option("--seed", cfg.seed, "Seed of the randomized checks")->capture_default_str();
    verify->add_option("--format", cfg.format, "table or json")
        ->check(CLI::IsMember({"table", "json"}))
        ->default_val("table");
    verify->add_flag("--assert", cfg.assert_mode, "Exit 1 if an asserted check fails");

    double gap_min = 0.001;
    double gap_max = 0.1;
    int gap_steps = 100;
    auto* gap = app.add_subcommand("gap", "Sweep the branching gap over a lambda grid (CSV)");
    gap->add_option("--min", gap_min, "Smallest lambda")->check(kLambdaRange)->capture_default_str();
    gap->add_option("--max", gap_max, "Largest lambda")->check(kLambdaRange)->capture_default_str();
    gap->add_option("--steps", gap_steps, "Grid points")->check(CLI::Range(2, 1000000))->capture_default_str();
    gap->add_option("--out", cfg.out, "Output file (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*gap && !(gap_min < gap_max)) throw UsageError("--min must be smaller than --max");
        fsteiner::set_thread_count(cfg.threads);
        if (*leaves) return run_leaves(cfg);
        if (*tree) return run_tree(cfg);
        if (*solve) return run_solve(cfg, input, svg_path);
        if (*verify) return run_verify(cfg, solver_depth);
        if (*gap) {
            emit(fsteiner::io::gap_csv(gap_min, gap_max, gap_steps), cfg.out);
            return kOk;
        }
    } catch (const IoError& e) {
        std::cerr << "fsteiner: " << e.what() << "\n";
        return kIo;
    } catch (const UsageError& e) {
        std::cerr << "fsteiner: " << e.what() << "\n";
        return kUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "fsteiner: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "fsteiner: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "fsteiner: " << e.what() << "\n";
        return kAssertFailed;
    }
    return kUsage;
}

// Command-line front end: solve games, verify solutions, run the brute-force
// oracle, generate random instances and audit solver traces.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "justsolve/oracle.hpp"
#include "justsolve/pgsolver_io.hpp"
#include "justsolve/solvers.hpp"
#include "trace_audit.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct IoFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::stringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot write " + path);
    out << content;
}

struct SolveOptions {
    std::string game_path;
    pg::SolverConfig config;
    std::string trace_path, dot_path, solution_path;
};

int run_solve(const SolveOptions& opt) {
    pg::ParityGame game = pg::parse_game(read_file(opt.game_path));
    pg::SolverConfig config = opt.config;
    config.collect_trace = config.collect_trace || !opt.trace_path.empty() || config.audit;

    pg::SolveResult result = pg::solve(game, config);

    std::size_t even = 0;
    for (pg::Player w : result.solution.winner)
        if (w == pg::Player::even) ++even;
    std::cout << "solved " << game.node_count() << " nodes: " << even << " won by 0, "
              << game.node_count() - even << " won by 1 (" << result.stats.steps << " steps)\n";

    if (!opt.trace_path.empty()) {
        std::stringstream ss;
        pg::write_trace(ss, game, result.trace);
        write_file(opt.trace_path, ss.str());
    }
    if (!opt.dot_path.empty()) write_file(opt.dot_path, pg::to_dot(result.justification));
    if (!opt.solution_path.empty())
        write_file(opt.solution_path, pg::emit_solution(game, pg::ParameterMap(game.node_count()),
                                                        result.solution));
    return kExitOk;
}

int run_verify(const std::string& game_path, const std::string& solution_path) {
    pg::ParityGame game = pg::parse_game(read_file(game_path));
    pg::Solution solution = pg::parse_solution(read_file(solution_path), game);
    pg::SolutionCheck check =
        pg::check_solution(game, pg::ParameterMap(game.node_count()), solution);
    if (check.ok()) {
        std::cout << "verified: " << game.node_count() << " nodes\n";
        return kExitOk;
    }
    std::cout << "verification failed: " << check.message << "\n";
    return kExitVerification;
}

int run_oracle(const std::string& game_path, std::size_t bound) {
    pg::ParityGame game = pg::parse_game(read_file(game_path));
    pg::OracleLimits limits;
    limits.max_nodes = bound;
    pg::ParameterMap none(game.node_count());
    try {
        pg::Solution solution = pg::oracle_solve(game, none, limits);
        std::cout << pg::emit_solution(game, none, solution);
    } catch (const pg::OracleBoundExceeded& e) {
        std::cerr << e.what() << " (raise --bound to force it)\n";
        return kExitUsage;
    }
    return kExitOk;
}

int run_audit_trace(const std::string& trace_path) {
    std::string text = read_file(trace_path);
    std::stringstream in(text);
    trace_audit::Result result = trace_audit::audit(in);
    if (result.ok) {
        std::cout << "monotone: yes, steps: " << result.steps << "\n";
        return kExitOk;
    }
    std::cout << "monotone: no (" << result.message << ")\n";
    return kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"parity game solving built on justifications"};
    app.require_subcommand(1);

    SolveOptions solve_opt;
    std::map<std::string, pg::Algorithm> algorithms{
        {"fixpoint", pg::Algorithm::fixpoint},
        {"zielonka", pg::Algorithm::zielonka},
        {"pp", pg::Algorithm::priority_promotion},
    };
    std::map<std::string, pg::ResetPolicy> resets{
        {"minimal", pg::ResetPolicy::minimal},
        {"aggressive", pg::ResetPolicy::aggressive},
    };
    std::map<std::string, pg::DependencyIndex> deps{
        {"scan", pg::DependencyIndex::scan_predecessors},
        {"sets", pg::DependencyIndex::dependent_sets},
    };

    CLI::App* solve = app.add_subcommand("solve", "solve a game file");
    solve->add_option("file", solve_opt.game_path, "PGSolver game file ('-' for stdin)")
        ->required();
    solve->add_option("--algorithm,-a", solve_opt.config.algorithm, "solver to use")
        ->transform(CLI::CheckedTransformer(algorithms, CLI::ignore_case))
        ->default_str("zielonka");
    solve->add_option("--reset", solve_opt.config.reset, "reset policy on hypothesis flips")
        ->transform(CLI::CheckedTransformer(resets, CLI::ignore_case))
        ->default_str("minimal");
    solve->add_option("--deps", solve_opt.config.dependency_index,
                      "reverse-edge encoding of the justification graph")
        ->transform(CLI::CheckedTransformer(deps, CLI::ignore_case))
        ->default_str("scan");
    solve->add_option("--trace", solve_opt.trace_path, "write a TSV step trace");
    solve->add_flag("--audit", solve_opt.config.audit,
                    "check safety and progress around every step");
    solve->add_option("--dot", solve_opt.dot_path, "write the final justification as Graphviz");
    solve->add_option("--solution", solve_opt.solution_path, "write the solution file");

    std::string verify_game, verify_solution;
    CLI::App* verify = app.add_subcommand("verify", "check a solution against a game");
    verify->add_option("game", verify_game)->required();
    verify->add_option("solution", verify_solution)->required();

    std::string oracle_game;
    std::size_t oracle_bound = 12;
    CLI::App* oracle = app.add_subcommand("oracle", "solve a small game by brute force");
    oracle->add_option("file", oracle_game)->required();
    oracle->add_option("--bound", oracle_bound, "node-count limit (default 12)");

    std::uint64_t gen_seed = 1;
    std::size_t gen_nodes = 8;
    int gen_max_priority = 6;
    double gen_density = 0.5;
    CLI::App* gen = app.add_subcommand("gen", "emit a reproducible random game");
    gen->add_option("--seed", gen_seed);
    gen->add_option("--nodes", gen_nodes)->check(CLI::PositiveNumber);
    gen->add_option("--max-priority", gen_max_priority)->check(CLI::NonNegativeNumber);
    gen->add_option("--density", gen_density)->check(CLI::Range(0.0, 1.0));

    std::string audit_path;
    CLI::App* audit = app.add_subcommand("audit-trace", "re-check a solver trace offline");
    audit->add_option("trace", audit_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (solve->parsed()) return run_solve(solve_opt);
        if (verify->parsed()) return run_verify(verify_game, verify_solution);
        if (oracle->parsed()) return run_oracle(oracle_game, oracle_bound);
        if (gen->parsed()) {
            std::cout << pg::emit_game(
                pg::random_game(gen_seed, gen_nodes, gen_max_priority, gen_density));
            return kExitOk;
        }
        if (audit->parsed()) return run_audit_trace(audit_path);
    } catch (const pg::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitIo;
    } catch (const IoFailure& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const pg::AuditError& e) {
        std::cerr << "audit failure: " << e.what() << "\n";
        return kExitVerification;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}

// regretlab: batch CLI over the regret library. Prints human tables and/or
// machine CSV; plot-data files are two-column text for external plotting.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "regretlab/bounds.hpp"
#include "regretlab/divergence.hpp"
#include "regretlab/errors.hpp"
#include "regretlab/games.hpp"
#include "regretlab/gamespec.hpp"
#include "regretlab/regret.hpp"
#include "regretlab/report.hpp"

using namespace regretlab;

namespace {

struct RunConfig {
    std::string command;
    std::string builtin;
    std::string game_path;
    int N = 2;
    int grid = 0;  // 0: builtin default
    int d = 3;
    int T = 2;
    std::uint64_t seed = 20240901;
    std::int64_t samples = 100000;
    std::int64_t budget = 60000;
    std::string out_path;
    std::string format = "table";
    bool assert_bounds = false;
    bool exact = false;
    bool deterministic = false;
    double alpha_override = -1.0;  // bounds: flatness constant instead of the estimate
    std::string solver = "lp";
};

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;
constexpr int kExitBoundFailed = 4;
constexpr int kExitIo = 5;

BuiltinParams builtin_params(const RunConfig& cfg) {
    BuiltinParams params;
    params["N"] = cfg.N;
    if (cfg.grid > 0) params["grid"] = cfg.grid;
    return params;
}

Game resolve_game(const RunConfig& cfg) {
    if (!cfg.game_path.empty()) return load_game_spec(cfg.game_path);
    if (cfg.builtin.empty()) throw std::invalid_argument("need --builtin or --game");
    if (cfg.builtin == "ball")
        throw std::invalid_argument(
            "the ball game has no matrix form; use `demo --builtin ball` or `bounds --builtin ball`");
    return make_builtin_game(cfg.builtin, builtin_params(cfg));
}

// canonical adversary for `regret` and `decompose`
AdversaryStrategy canonical_strategy(const RunConfig& cfg, const Game& game) {
    if (game.name == "quadratic") return quadratic_shrinkage_adversary(cfg.T);
    if (game.name == "disjoint-interval")
        return disjoint_interval_strategy(cfg.T, game.num_outcomes());
    return iid_strategy(SimplexDist::uniform(game.num_outcomes()), cfg.T);
}

InnerSolver parse_solver(const std::string& s) {
    if (s == "lp") return InnerSolver::lp;
    if (s == "exhaustive") return InnerSolver::exhaustive;
    if (s == "mw") return InnerSolver::mw;
    throw std::invalid_argument("unknown solver: " + s);
}

int emit(const RunConfig& cfg, const std::vector<ReportRow>& rows) {
    if (rows.empty()) {
        std::cerr << "warning: no results to report\n";
        return kExitOk;
    }
    if (cfg.format == "table" || cfg.format == "both") write_table(std::cout, rows);
    if (!cfg.out_path.empty()) {
        std::ofstream out(cfg.out_path);
        if (!out) throw std::ios_base::failure("cannot write " + cfg.out_path);
        write_csv(out, rows);
    } else if (cfg.format == "csv" || cfg.format == "both") {
        write_csv(std::cout, rows);
    }
    return kExitOk;
}

int run_value(const RunConfig& cfg) {
    Game game = resolve_game(cfg);
    MinimaxOptions opt;
    opt.solver = parse_solver(cfg.solver);
    auto res = minimax_value(game, cfg.T, opt);
    std::vector<ReportRow> rows;
    rows.push_back({game.name, cfg.T, "minimax_value", res.value, std::nullopt, std::nullopt,
                    std::nullopt, cfg.seed});
    if (opt.solver == InnerSolver::mw)
        rows.push_back({game.name, cfg.T, "max_inner_gap", res.max_inner_gap, std::nullopt,
                        std::nullopt, std::nullopt, cfg.seed});
    if (cfg.deterministic) {
        MinimaxOptions det;
        det.solver = InnerSolver::exhaustive;
        rows.push_back({game.name, cfg.T, "deterministic_value",
                        minimax_value(game, cfg.T, det).value, std::nullopt, std::nullopt,
                        std::nullopt, cfg.seed});
    }
    return emit(cfg, rows);
}

int run_regret(const RunConfig& cfg) {
    Game game = resolve_game(cfg);
    auto strat = canonical_strategy(cfg, game);
    std::vector<ReportRow> rows;
    if (cfg.exact) {
        auto rep = p_regret_exact(game, JointDistTree::from_strategy(strat));
        rows.push_back({game.name, cfg.T, "p_regret", rep.value, 0.0, std::nullopt, std::nullopt, cfg.seed});
    } else {
        auto rep = p_regret_mc(game, strat, cfg.samples, cfg.seed);
        rows.push_back({game.name, cfg.T, "p_regret", rep.value, rep.stderr_, std::nullopt,
                        std::nullopt, cfg.seed});
    }
    return emit(cfg, rows);
}

int run_decompose(const RunConfig& cfg) {
    Game game = resolve_game(cfg);
    auto joint = JointDistTree::from_strategy(canonical_strategy(cfg, game));
    auto rep = decomposition(game, joint);
    std::vector<ReportRow> rows{
        {game.name, cfg.T, "delta0", rep.delta0, std::nullopt, std::nullopt, std::nullopt, cfg.seed},
        {game.name, cfg.T, "delta1", rep.delta1, std::nullopt, std::nullopt, std::nullopt, cfg.seed},
        {game.name, cfg.T, "delta2", rep.delta2, std::nullopt, std::nullopt, std::nullopt, cfg.seed},
        {game.name, cfg.T, "regret_over_T", rep.regret_over_T, std::nullopt, std::nullopt,
         std::nullopt, cfg.seed},
        {game.name, cfg.T, "residual", rep.residual, std::nullopt, 1e-9, rep.residual <= 1e-9,
         cfg.seed},
    };
    int code = emit(cfg, rows);
    if (cfg.assert_bounds && rep.residual > 1e-9) return kExitBoundFailed;
    return code;
}

int run_bounds(const RunConfig& cfg) {
    std::vector<ReportRow> rows;
    bool all_hold = true;
    if (cfg.builtin == "ball") {
        auto sandwich = ball_sandwich_check(cfg.d, cfg.T, cfg.samples, cfg.seed);
        rows.push_back({"ball", cfg.T, "sandwich_lower", sandwich.lower, sandwich.stderr_,
                        sandwich.optimal, sandwich.holds, cfg.seed});
        rows.push_back({"ball", cfg.T, "sandwich_upper", sandwich.upper, std::nullopt,
                        sandwich.optimal, sandwich.holds, cfg.seed});
        all_hold = sandwich.holds;
    } else {
        Game game = resolve_game(cfg);
        auto consts = estimate_constants(game);
        rows.push_back({game.name, cfg.T, "lipschitz_L", consts.lipschitz_L, std::nullopt,
                        std::nullopt, std::nullopt, cfg.seed});
        rows.push_back({game.name, cfg.T, "sigma", consts.strong_convexity_sigma, std::nullopt,
                        std::nullopt, std::nullopt, cfg.seed});
        bool have_alpha = cfg.alpha_override >= 0.0 || !consts.alpha_infinite;
        double alpha = cfg.alpha_override >= 0.0 ? cfg.alpha_override : consts.alpha;
        if (have_alpha) {
            rows.push_back({game.name, cfg.T, "alpha", alpha, std::nullopt, std::nullopt,
                            std::nullopt, cfg.seed});
            auto flat = flatness_check(game, alpha, 10000, cfg.seed);
            rows.push_back({game.name, cfg.T, "flatness_margin", flat.observed_value, std::nullopt,
                            flat.bound_value, flat.holds, cfg.seed});
            all_hold = all_hold && flat.holds;
            if (!consts.alpha_infinite) {
                auto stab = stability_check(game, 4000, cfg.seed);
                rows.push_back({game.name, cfg.T, "stability_ratio", stab.observed_value,
                                std::nullopt, stab.bound_value, stab.holds, cfg.seed});
                all_hold = all_hold && stab.holds;
            }
            if (cfg.T >= 2) {
                double minimax = minimax_value(game, cfg.T).value;
                double bound = log_t_bound(alpha, cfg.T);
                bool holds = minimax <= bound + 1e-6;
                rows.push_back({game.name, cfg.T, "log_t_bound", minimax, std::nullopt, bound, holds,
                                cfg.seed});
                all_hold = all_hold && holds;
            }
        }
        auto rad = rademacher_upper_bound(game, cfg.T, cfg.budget, cfg.seed);
        rows.push_back({game.name, cfg.T, "rademacher_bound", rad.observed_value, std::nullopt,
                        rad.bound_value, rad.holds, cfg.seed});
        all_hold = all_hold && rad.holds;
    }
    int code = emit(cfg, rows);
    if (cfg.assert_bounds && !all_hold) return kExitBoundFailed;
    return code;
}

int run_hierarchy(const RunConfig& cfg) {
    Game game = resolve_game(cfg);
    HierarchyOptions opt;
    opt.budget = cfg.budget;
    opt.seed = cfg.seed;
    auto h = hierarchy_eval(game, cfg.T, opt);
    std::vector<ReportRow> rows{
        {game.name, cfg.T, "reg_iid", h.reg_iid, std::nullopt, std::nullopt, std::nullopt, cfg.seed},
        {game.name, cfg.T, "reg_indep", h.reg_indep, std::nullopt, std::nullopt, std::nullopt, cfg.seed},
        {game.name, cfg.T, "reg_joint", h.reg_joint, std::nullopt, std::nullopt, std::nullopt, cfg.seed},
        {game.name, cfg.T, "reg_minimax", h.reg_minimax, std::nullopt, std::nullopt, std::nullopt, cfg.seed},
    };
    return emit(cfg, rows);
}

int run_demo(const RunConfig& cfg) {
    std::vector<ReportRow> rows;
    if (cfg.builtin == "quadratic") {
        Game game = make_builtin_game("quadratic", builtin_params(cfg));
        double csum = c_sequence(cfg.T).sum;
        auto rep =
            p_regret_exact(game, JointDistTree::from_strategy(quadratic_shrinkage_adversary(cfg.T)));
        double diff = std::abs(rep.value - csum);
        rows.push_back({"quadratic", cfg.T, "c_sum", csum, std::nullopt, std::nullopt, std::nullopt, cfg.seed});
        rows.push_back({"quadratic", cfg.T, "shrinkage_regret", rep.value, std::nullopt, std::nullopt,
                        std::nullopt, cfg.seed});
        rows.push_back({"quadratic", cfg.T, "difference", diff, std::nullopt, 1e-9, diff <= 1e-9, cfg.seed});
    } else if (cfg.builtin == "ball") {
        auto trace = ball_orthogonal_strategy(cfg.d, cfg.T, cfg.seed);
        double norm_defect = 0.0;
        for (std::size_t t = 0; t < trace.norms.size(); ++t)
            norm_defect = std::max(
                norm_defect, std::abs(trace.norms[t] * trace.norms[t] - static_cast<double>(t + 1)));
        rows.push_back({"ball", cfg.T, "orthogonal_norm_defect", norm_defect, std::nullopt, 1e-7,
                        norm_defect <= 1e-7, cfg.seed});
        auto walk = ball_iid_two_point(cfg.T, cfg.samples, cfg.seed);
        rows.push_back({"ball", cfg.T, "walk_ratio",
                        walk.value / std::sqrt(static_cast<double>(cfg.T)),
                        walk.stderr_ / std::sqrt(static_cast<double>(cfg.T)), std::sqrt(2.0 / M_PI),
                        std::nullopt, cfg.seed});
        auto sphere = ball_symmetric_iid_check(cfg.d, cfg.T, cfg.samples, cfg.seed);
        double floor = std::sqrt(cfg.T / 2.0);
        rows.push_back({"ball", cfg.T, "sphere_walk", sphere.value, sphere.stderr_, floor,
                        sphere.value >= floor - 3.0 * sphere.stderr_, cfg.seed});
    } else if (cfg.builtin == "experts-simple") {
        rows.push_back({"experts-simple", cfg.T, "phi_uniform", 1.0 / cfg.N, std::nullopt,
                        std::nullopt, std::nullopt, cfg.seed});
        auto est = experts_simple_regret_mc(cfg.N, cfg.T, cfg.samples, cfg.seed);
        rows.push_back({"experts-simple", cfg.T, "per_round_regret", est.value, est.stderr_,
                        std::nullopt, std::nullopt, cfg.seed});
    } else if (cfg.builtin == "experts-general") {
        auto est = experts_general_lb(cfg.N, cfg.T, cfg.samples, cfg.seed);
        double scalefn = std::sqrt(std::log(static_cast<double>(cfg.N)) / (2.0 * cfg.T));
        rows.push_back({"experts-general", cfg.T, "lower_bound", est.value, est.stderr_, std::nullopt,
                        std::nullopt, cfg.seed});
        rows.push_back({"experts-general", cfg.T, "asymptotic_ratio", est.value / scalefn,
                        est.stderr_ / scalefn, std::nullopt, std::nullopt, cfg.seed});
    } else if (cfg.builtin == "disjoint-interval") {
        Game game = resolve_game(cfg);
        auto strat = disjoint_interval_strategy(cfg.T, game.num_outcomes());
        auto rep = p_regret_mc(game, strat, cfg.samples, cfg.seed);
        rows.push_back({"disjoint-interval", cfg.T, "p_regret", rep.value, rep.stderr_, 0.0,
                        rep.value + 4.0 * rep.stderr_ < 0.0, cfg.seed});
    } else {
        throw std::invalid_argument("demo needs a builtin game name");
    }
    return emit(cfg, rows);
}

int run_report(const RunConfig& cfg) {
    if (cfg.out_path.empty()) throw std::invalid_argument("report needs --out");
    std::vector<ReportRow> rows;

    // c-sequence sweep, with plot data of sum c_t against log T - log log T
    std::vector<std::pair<double, double>> sweep;
    for (int T : {100, 1000, 10000, 100000, 1000000}) {
        double sum = c_sequence(T).sum;
        double asym = std::log(static_cast<double>(T)) - std::log(std::log(static_cast<double>(T)));
        sweep.emplace_back(asym, sum);
        rows.push_back({"quadratic", T, "c_sum", sum, std::nullopt, asym, std::nullopt, cfg.seed});
    }

    Game game = resolve_game(cfg);
    HierarchyOptions hopt;
    hopt.budget = cfg.budget;
    hopt.seed = cfg.seed;
    auto h = hierarchy_eval(game, cfg.T, hopt);
    rows.push_back({game.name, cfg.T, "reg_iid", h.reg_iid, std::nullopt, std::nullopt, std::nullopt, cfg.seed});
    rows.push_back({game.name, cfg.T, "reg_indep", h.reg_indep, std::nullopt, std::nullopt, std::nullopt, cfg.seed});
    rows.push_back({game.name, cfg.T, "reg_joint", h.reg_joint, std::nullopt, std::nullopt, std::nullopt, cfg.seed});
    rows.push_back({game.name, cfg.T, "reg_minimax", h.reg_minimax, std::nullopt, std::nullopt,
                    std::nullopt, cfg.seed});

    std::ofstream out(cfg.out_path);
    if (!out) throw std::ios_base::failure("cannot write " + cfg.out_path);
    write_csv(out, rows);
    std::filesystem::path plot = std::filesystem::path(cfg.out_path).replace_extension(".cseq.dat");
    std::ofstream pf(plot);
    if (!pf) throw std::ios_base::failure("cannot write " + plot.string());
    write_plot_series(pf, "c_sequence_sweep", sweep);
    if (cfg.format == "table" || cfg.format == "both") write_table(std::cout, rows);
    return kExitOk;
}

int run(const RunConfig& cfg) {
    if (cfg.command == "value") return run_value(cfg);
    if (cfg.command == "regret") return run_regret(cfg);
    if (cfg.command == "decompose") return run_decompose(cfg);
    if (cfg.command == "bounds") return run_bounds(cfg);
    if (cfg.command == "hierarchy") return run_hierarchy(cfg);
    if (cfg.command == "demo") return run_demo(cfg);
    if (cfg.command == "report") return run_report(cfg);
    throw std::invalid_argument("unknown command " + cfg.command);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "regretlab: exact and estimated minimax regret for finite online convex optimization games"};
    app.require_subcommand(1);

    RunConfig cfg;
    auto add_common = [&](CLI::App* sub) {
        auto* builtin = sub->add_option(
            "--builtin", cfg.builtin,
            "builtin game: quadratic | experts-simple | experts-general | ball | disjoint-interval");
        sub->add_option("--game", cfg.game_path, "game specification file (JSON)")->excludes(builtin);
        sub->add_option("--N", cfg.N, "experts count");
        sub->add_option("--grid", cfg.grid, "grid resolution");
        sub->add_option("--d", cfg.d, "ball dimension");
        sub->add_option("--T", cfg.T, "horizon")->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "global 64-bit seed");
        sub->add_option("--samples", cfg.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
        sub->add_option("--budget", cfg.budget, "optimizer/search budget")->check(CLI::PositiveNumber);
        sub->add_option("--out", cfg.out_path, "CSV output path");
        sub->add_option("--format", cfg.format, "table | csv | both")
            ->check(CLI::IsMember({"table", "csv", "both"}));
        sub->add_flag("--assert", cfg.assert_bounds, "nonzero exit when a bound check fails");
    };
    for (const char* name : {"value", "regret", "decompose", "bounds", "hierarchy", "demo", "report"}) {
        auto* sub = app.add_subcommand(name);
        add_common(sub);
        if (std::string(name) == "value") {
            sub->add_option("--solver", cfg.solver, "inner solver: lp | exhaustive | mw")
                ->check(CLI::IsMember({"lp", "exhaustive", "mw"}));
            sub->add_flag("--deterministic", cfg.deterministic,
                          "also report the pure-action player value");
        }
        if (std::string(name) == "regret")
            sub->add_flag("--exact", cfg.exact, "exact enumeration instead of Monte Carlo");
        if (std::string(name) == "bounds")
            sub->add_option("--alpha", cfg.alpha_override,
                            "flatness constant to check instead of the estimated one");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: config: " << e.what() << "\n";
        return kExitConfig;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    try {
        return run(cfg);
    } catch (const resource_limit_error& e) {
        std::cerr << "error: resource-limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const not_applicable_error& e) {
        std::cerr << "error: not-applicable: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: io: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
}

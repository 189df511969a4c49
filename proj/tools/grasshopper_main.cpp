// grasshopper: build antipodal geodesic grids, search colourings, verify results.
//
//   grasshopper build-grid --depth 5 --out g5.grid
//   grasshopper solve --grid g5.grid --theta-c 5 --algo sa --out runs/
//   grasshopper sweep --depth 4 --theta-frac 0.2,0.3,0.4 --algo greedy --chain --out sweep/
//   grasshopper verify --grid g5.grid --colouring runs/x.col --points-out map.csv

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "grasshopper/runner.hpp"

namespace {

using grasshopper::ThetaSpec;

struct ThetaFlags {
    std::vector<double> radians;
    std::vector<double> fractions;
    std::vector<double> c_values;

    std::vector<ThetaSpec> specs() const {
        std::vector<ThetaSpec> out;
        for (double v : radians) out.push_back({ThetaSpec::Unit::radians, v});
        for (double v : fractions) out.push_back({ThetaSpec::Unit::fraction_of_pi, v});
        for (double v : c_values) out.push_back({ThetaSpec::Unit::c_value, v});
        return out;
    }
};

void add_theta_flags(CLI::App* cmd, ThetaFlags& flags, bool many) {
    auto* rad = cmd->add_option("--theta-rad", flags.radians, "jumping angle in radians");
    auto* frac = cmd->add_option("--theta-frac", flags.fractions, "jumping angle as a fraction of pi");
    auto* c = cmd->add_option("--theta-c", flags.c_values, "jumping angle as c, theta = 2 pi / c");
    for (auto* opt : {rad, frac, c}) {
        if (many) {
            opt->delimiter(',');
        } else {
            opt->expected(1);
        }
    }
    rad->excludes(frac)->excludes(c);
    frac->excludes(c);
}

struct ScheduleFlags {
    bool slow = false;
    std::optional<double> t0;
    std::optional<double> alpha;
    std::optional<std::uint64_t> steps;
};

void add_schedule_flags(CLI::App* cmd, ScheduleFlags& flags) {
    cmd->add_flag("--slow", flags.slow, "slow cooling preset (t0=0.2, alpha=0.999995)");
    cmd->add_option("--t0", flags.t0, "initial temperature");
    cmd->add_option("--alpha", flags.alpha, "cooling factor per step");
    cmd->add_option("--steps", flags.steps, "annealing steps (default 150 N)");
}

grasshopper::ScheduleOverrides to_overrides(const ScheduleFlags& f) {
    return {f.slow, f.t0, f.alpha, f.steps};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Antipodal grasshopper colourings on icosahedral grids"};
    app.require_subcommand(1);

    int depth = 0;
    std::string out_path;
    auto* build = app.add_subcommand("build-grid", "write a GRIDv1 file");
    build->add_option("--depth", depth, "triangulation depth k")->required();
    build->add_option("--out", out_path, "output grid file")->required();

    std::string grid_path, init = "random", algo = "sa", out_dir = ".";
    std::optional<std::string> log_events, cache_index;
    std::uint64_t seed = 0;
    unsigned runs = 1;
    ThetaFlags theta;
    ScheduleFlags schedule;

    auto* solve = app.add_subcommand("solve", "search one jumping angle");
    solve->add_option("--grid", grid_path, "GRIDv1 file")->required();
    add_theta_flags(solve, theta, false);
    solve->add_option("--init", init, "hemisphere | random | file:<path>");
    solve->add_option("--algo", algo, "greedy | sa");
    add_schedule_flags(solve, schedule);
    solve->add_option("--seed", seed, "base seed; run r uses seed + r");
    solve->add_option("--runs", runs, "independent runs, best is reported");
    solve->add_option("--out", out_dir, "output directory");
    solve->add_option("--log-events", log_events, "annealing event log CSV");
    solve->add_option("--cache-index", cache_index, "kernel index cache directory");

    std::optional<int> sweep_depth;
    std::optional<std::string> sweep_grid;
    bool chain = false;
    auto* sweep = app.add_subcommand("sweep", "search a list of jumping angles");
    sweep->add_option("--grid", sweep_grid, "GRIDv1 file");
    sweep->add_option("--depth", sweep_depth, "build the grid in memory instead");
    add_theta_flags(sweep, theta, true);
    sweep->add_option("--init", init, "hemisphere | random | file:<path>");
    sweep->add_option("--algo", algo, "greedy | sa");
    add_schedule_flags(sweep, schedule);
    sweep->add_option("--seed", seed, "base seed; run r uses seed + r");
    sweep->add_option("--runs", runs, "independent runs per angle");
    sweep->add_flag("--chain", chain, "start each angle from the previous best colouring");
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_option("--cache-index", cache_index, "kernel index cache directory");

    std::string colouring_path;
    std::optional<std::string> points_out;
    auto* verify = app.add_subcommand("verify", "recompute P for a stored colouring");
    verify->add_option("--grid", grid_path, "GRIDv1 file")->required();
    verify->add_option("--colouring", colouring_path, "COLv1 file")->required();
    add_theta_flags(verify, theta, false);
    verify->add_option("--points-out", points_out, "per-point CSV for map rendering");
    verify->add_option("--cache-index", cache_index, "kernel index cache directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : grasshopper::kExitUsage;
    }

    auto optional_path = [](const std::optional<std::string>& s) -> std::optional<grasshopper::fs::path> {
        if (!s) return std::nullopt;
        return grasshopper::fs::path(*s);
    };

    if (*build) return grasshopper::cmd_build_grid(depth, out_path, std::cout, std::cerr);

    grasshopper::InitSpec init_spec;
    grasshopper::Algorithm algorithm{};
    try {
        init_spec = grasshopper::InitSpec::parse(init);
        algorithm = grasshopper::parse_algorithm(algo);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return grasshopper::kExitUsage;
    }
    const auto thetas = theta.specs();

    if (*solve) {
        if (thetas.size() != 1) {
            std::cerr << "error: solve needs exactly one of --theta-rad, --theta-frac, --theta-c\n";
            return grasshopper::kExitUsage;
        }
        grasshopper::SolveOptions o;
        o.grid_path = grid_path;
        o.theta = thetas[0];
        o.init = init_spec;
        o.algorithm = algorithm;
        o.schedule = to_overrides(schedule);
        o.seed = seed;
        o.runs = runs;
        o.out_dir = out_dir;
        o.log_events = optional_path(log_events);
        o.cache_index = optional_path(cache_index);
        return grasshopper::cmd_solve(o, std::cout, std::cerr);
    }
    if (*sweep) {
        grasshopper::SweepOptions o;
        o.grid_path = optional_path(sweep_grid);
        o.depth = sweep_depth;
        o.thetas = thetas;
        o.init = init_spec;
        o.algorithm = algorithm;
        o.schedule = to_overrides(schedule);
        o.seed = seed;
        o.runs = runs;
        o.chain = chain;
        o.out_dir = out_dir;
        o.cache_index = optional_path(cache_index);
        return grasshopper::cmd_sweep(o, std::cout, std::cerr);
    }
    grasshopper::VerifyOptions o;
    o.grid_path = grid_path;
    o.colouring_path = colouring_path;
    if (thetas.size() > 1) {
        std::cerr << "error: verify takes at most one theta\n";
        return grasshopper::kExitUsage;
    }
    if (!thetas.empty()) o.theta = thetas[0];
    o.points_out = optional_path(points_out);
    o.cache_index = optional_path(cache_index);
    return grasshopper::cmd_verify(o, std::cout, std::cerr);
}

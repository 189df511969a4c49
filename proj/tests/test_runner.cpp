#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "grasshopper/errors.hpp"
#include "grasshopper/io.hpp"
#include "grasshopper/objective.hpp"
#include "grasshopper/runner.hpp"
#include "temp_dir.hpp"

using namespace grasshopper;
using std::numbers::pi;

namespace {

struct CliResult {
    int code;
    std::string out;
};

// Runs the built CLI with stdout captured.
CliResult run_cli(const TempDir& dir, const std::string& args) {
    const auto capture = dir / "stdout.txt";
    const std::string cmd = std::string(GRASSHOPPER_CLI) + " " + args + " > " +
                            capture.string() + " 2> " + (dir / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_text_file(capture)};
}

// Value following `key=` in a report line.
double report_value(const std::string& text, const std::string& key) {
    const auto pos = text.find(key + "=");
    REQUIRE(pos != std::string::npos);
    const auto begin = pos + key.size() + 1;
    const auto end = text.find_first_of(" \n", begin);
    return parse_double(text.substr(begin, end - begin), key);
}

std::string path_arg(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("theta and init specs") {
    CHECK(ThetaSpec{ThetaSpec::Unit::fraction_of_pi, 0.5}.radians() == pi / 2);
    CHECK(ThetaSpec{ThetaSpec::Unit::c_value, 5}.radians() == 2 * pi / 5);
    CHECK(ThetaSpec{ThetaSpec::Unit::radians, 1.0}.radians() == 1.0);
    CHECK_THROWS_AS(ThetaSpec({ThetaSpec::Unit::c_value, 1.5}).radians(), DomainError);
    CHECK_THROWS_AS(ThetaSpec({ThetaSpec::Unit::c_value, 0.0}).radians(), DomainError);
    CHECK_THROWS_AS(ThetaSpec({ThetaSpec::Unit::radians, -0.1}).radians(), DomainError);

    CHECK(InitSpec::parse("hemisphere").kind == InitSpec::Kind::hemisphere);
    CHECK(InitSpec::parse("random").label() == "random");
    const InitSpec f = InitSpec::parse("file:runs/best run.col");
    CHECK(f.kind == InitSpec::Kind::file);
    CHECK(f.label() == "file-best_run");
    CHECK_THROWS_AS(InitSpec::parse("file:"), ConfigError);
    CHECK_THROWS_AS(InitSpec::parse("north"), ConfigError);

    const SphereGrid g = build_grid(2);
    ScheduleOverrides o;
    o.slow = true;
    o.steps = 10;
    const AnnealSchedule s = resolve_schedule(g, o, 3);
    CHECK(s.t0 == 0.2);
    CHECK(s.steps == 10);
    CHECK(s.seed == 3);
    CHECK(make_init(g, InitSpec::parse("random"), 5, 2) == init_random(g, 7));
}

TEST_CASE("build-grid") {
    TempDir dir("cli_grid");
    auto r = run_cli(dir, "build-grid --depth 5 --out " + path_arg(dir / "a.grid"));
    CHECK(r.code == 0);
    CHECK(r.out.find("n2=10242") != std::string::npos);
    r = run_cli(dir, "build-grid --depth 5 --out " + path_arg(dir / "b.grid"));
    CHECK(r.code == 0);
    CHECK(read_text_file(dir / "a.grid") == read_text_file(dir / "b.grid"));
    CHECK(read_grid(dir / "a.grid") == build_grid(5));

    CHECK(run_cli(dir, "build-grid --depth 9 --out " + path_arg(dir / "c.grid")).code == 1);
    CHECK(run_cli(dir, "build-grid --depth -1 --out " + path_arg(dir / "c.grid")).code == 1);
    CHECK(run_cli(dir, "build-grid --out " + path_arg(dir / "c.grid")).code == 1);
    CHECK(run_cli(dir, "").code == 1);
    CHECK_FALSE(fs::exists(dir / "c.grid"));
}

TEST_CASE("solve") {
    TempDir dir("cli_solve");
    const auto grid4 = dir / "g4.grid";
    write_grid(grid4, build_grid(4));

    SUBCASE("theta = pi / 2 is flat for greedy") {
        const auto r = run_cli(dir, "solve --grid " + path_arg(grid4) +
                                        " --theta-frac 0.5 --algo greedy --out " +
                                        path_arg(dir / "half"));
        CHECK(r.code == 0);
        CHECK(std::abs(report_value(r.out, "final P") - 0.5) <= 1e-10);
        CHECK(report_value(r.out, "flips") == 0.0);
    }

    SUBCASE("annealing at c = 5 beats the hemisphere") {
        const auto out_dir = dir / "sa";
        const auto r = run_cli(dir, "solve --grid " + path_arg(grid4) +
                                        " --theta-c 5 --algo sa --alpha 0.9999 --seed 1 --out " + path_arg(out_dir));
        CHECK(r.code == 0);
        const double p = report_value(r.out, "final P");
        CHECK(p > 0.6);
        const auto rows = read_results(out_dir / "results.csv");
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].final_p == p);
        CHECK(rows[0].seed == 1);
        CHECK(rows[0].algorithm == "sa");
        CHECK(rows[0].init == "random");

        const auto col = colouring_file_name(out_dir, 2 * pi / 5, Algorithm::sa, 1, "random");
        REQUIRE(fs::exists(col));
        const auto file = read_colouring(col);
        const SphereGrid g = read_grid(grid4);
        CHECK(std::abs(total_probability(g, build_index(g, file.theta), file.colouring) - p) <= 1e-8);

        SUBCASE("greedy polish from the stored colouring") {
            const auto g2 = run_cli(dir, "solve --grid " + path_arg(grid4) +
                                             " --theta-c 5 --algo greedy --init file:" +
                                             path_arg(col) + " --out " + path_arg(dir / "polish"));
            CHECK(g2.code == 0);
            CHECK(report_value(g2.out, "final P") >= p - 1e-10);
            const auto rows2 = read_results(dir / "polish" / "results.csv");
            REQUIRE(rows2.size() == 1);
            CHECK(rows2[0].init.rfind("file-", 0) == 0);
        }
    }

    SUBCASE("several runs report the best") {
        std::ostringstream out, err;
        SolveOptions o;
        o.grid_path = grid4;
        o.theta = {ThetaSpec::Unit::c_value, 7};
        o.algorithm = Algorithm::greedy;
        o.runs = 3;
        o.seed = 4;
        o.out_dir = dir / "multi";
        CHECK(cmd_solve(o, out, err) == kExitOk);
        const auto rows = read_results(o.out_dir / "results.csv");
        REQUIRE(rows.size() == 3);
        double best = 0.0;
        for (std::size_t r = 0; r < 3; ++r) {
            CHECK(rows[r].seed == 4 + r);
            best = std::max(best, rows[r].final_p);
        }
        CHECK(report_value(out.str(), "final P") == best);
    }

    SUBCASE("event log") {
        std::ostringstream out, err;
        SolveOptions o;
        o.grid_path = grid4;
        o.theta = {ThetaSpec::Unit::c_value, 5};
        o.schedule.steps = 500;
        o.out_dir = dir / "log";
        o.log_events = dir / "events.csv";
        CHECK(cmd_solve(o, out, err) == kExitOk);
        const std::string log = read_text_file(*o.log_events);
        CHECK(log.rfind("step,temperature,pair,delta,accepted\n", 0) == 0);
        CHECK(std::count(log.begin(), log.end(), '\n') == 501);
        const auto rows = read_results(o.out_dir / "results.csv");
        REQUIRE(rows.size() == 1);
        std::size_t ones = 0;
        std::istringstream lines(log);
        std::string line;
        std::getline(lines, line);
        while (std::getline(lines, line)) ones += line.back() == '1';
        CHECK(ones == rows[0].accepted);

        o.runs = 2;
        std::ostringstream err2;
        CHECK(cmd_solve(o, out, err2) == kExitUsage);
    }

    SUBCASE("index cache is reused") {
        std::ostringstream out1, out2, err;
        SolveOptions o;
        o.grid_path = grid4;
        o.theta = {ThetaSpec::Unit::c_value, 6};
        o.algorithm = Algorithm::greedy;
        o.out_dir = dir / "cached";
        o.cache_index = dir / "cache";
        CHECK(cmd_solve(o, out1, err) == kExitOk);
        CHECK(std::distance(fs::directory_iterator(dir / "cache"), fs::directory_iterator{}) == 1);
        o.out_dir = dir / "cached2";
        CHECK(cmd_solve(o, out2, err) == kExitOk);
        CHECK(report_value(out1.str(), "final P") == report_value(out2.str(), "final P"));
    }

    SUBCASE("errors") {
        std::ofstream(dir / "bad.grid") << "GRIDv1 depth=1 n2=42\n0 0 1 1\n";
        CHECK(run_cli(dir, "solve --grid " + path_arg(dir / "bad.grid") + " --theta-c 5").code == 2);
        CHECK(run_cli(dir, "solve --grid " + path_arg(dir / "missing.grid") + " --theta-c 5").code == 2);
        CHECK(run_cli(dir, "solve --grid " + path_arg(grid4) + " --theta-c 1.5 --out " +
                               path_arg(dir / "x")).code == 1);
        CHECK(run_cli(dir, "solve --grid " + path_arg(grid4) + " --theta-c 5 --theta-frac 0.2").code == 1);
        CHECK(run_cli(dir, "solve --grid " + path_arg(grid4)).code == 1);
        CHECK(run_cli(dir, "solve --grid " + path_arg(grid4) + " --theta-c 5 --algo tabu").code == 1);
        CHECK(run_cli(dir, "solve --grid " + path_arg(grid4) + " --theta-c 5 --alpha 1.5").code == 1);
        CHECK(run_cli(dir, "solve --grid " + path_arg(grid4) + " --theta-c 5 --init file:" +
                               path_arg(dir / "none.col")).code == 2);
    }
}

TEST_CASE("sweep") {
    TempDir dir("cli_sweep");
    const auto out_dir = dir / "sweep";
    const std::string base = "sweep --depth 4 --theta-c 5,7,9 --algo sa --alpha 0.9999 --seed 2 --out " +
                             path_arg(out_dir);

    auto r = run_cli(dir, base);
    CHECK(r.code == 0);
    CHECK(r.out.find("solved=3 skipped=0 failed=0") != std::string::npos);
    auto rows = read_results(out_dir / "results.csv");
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) CHECK(row.final_p > row.p_hem);

    r = run_cli(dir, base);
    CHECK(r.code == 0);
    CHECK(r.out.find("solved=0 skipped=3 failed=0") != std::string::npos);
    CHECK(read_results(out_dir / "results.csv").size() == 3);

    r = run_cli(dir, "sweep --depth 4 --theta-c 5,7,9,11 --algo sa --alpha 0.9999 --seed 2 --out " +
                         path_arg(out_dir));
    CHECK(r.out.find("solved=1 skipped=3 failed=0") != std::string::npos);

    {  // chain
        std::ostringstream out, err;
        SweepOptions o;
        o.depth = 3;
        o.thetas = {{ThetaSpec::Unit::c_value, 5}, {ThetaSpec::Unit::c_value, 5.2}};
        o.algorithm = Algorithm::greedy;
        o.chain = true;
        o.out_dir = dir / "chain";
        CHECK(cmd_sweep(o, out, err) == kExitOk);
        const auto chained = read_results(o.out_dir / "results.csv");
        REQUIRE(chained.size() == 2);
        CHECK(chained[0].init == "random");
        CHECK(chained[1].init == "chain");
        std::ostringstream again;
        CHECK(cmd_sweep(o, again, err) == kExitOk);
        CHECK(again.str().find("skipped=2") != std::string::npos);
    }

    {  // argument errors
        CHECK(run_cli(dir, "sweep --depth 3 --algo greedy --out " + path_arg(dir / "e")).code == 1);
        CHECK(run_cli(dir, "sweep --theta-c 5 --out " + path_arg(dir / "e")).code == 1);
        write_grid(dir / "g.grid", build_grid(2));
        CHECK(run_cli(dir, "sweep --depth 2 --grid " + path_arg(dir / "g.grid") +
                               " --theta-c 5 --out " + path_arg(dir / "e")).code == 1);
    }

    {  // a bad angle fails only its own entry
        std::ostringstream out, err;
        SweepOptions o;
        o.depth = 2;
        o.thetas = {{ThetaSpec::Unit::c_value, 5}};
        o.algorithm = Algorithm::greedy;
        o.out_dir = dir / "partial";
        o.init = InitSpec::parse("file:" + (dir / "missing.col").string());
        CHECK(cmd_sweep(o, out, err) == kExitPartial);
        CHECK(out.str().find("failed=1") != std::string::npos);
    }
}

TEST_CASE("verify") {
    TempDir dir("cli_verify");
    const auto grid6 = dir / "g6.grid";
    const SphereGrid g6 = build_grid(6);
    write_grid(grid6, g6);
    const auto hem = dir / "hem.col";
    write_colouring(hem, 6, 0.25 * pi, init_hemisphere(g6));

    auto r = run_cli(dir, "verify --grid " + path_arg(grid6) + " --colouring " + path_arg(hem) +
                              " --points-out " + path_arg(dir / "points.csv"));
    CHECK(r.code == 0);
    const double p = report_value(r.out, "P");
    CHECK(std::abs(p - 0.75) / 0.75 <= 0.0025);
    CHECK(std::abs(report_value(r.out, "sum") - 1.0) <= 1e-10);
    CHECK(r.out.find("antipodal=ok") != std::string::npos);

    const std::string points = read_text_file(dir / "points.csv");
    CHECK(points.rfind("index,lon,lat,coloured,p_i\n", 0) == 0);
    CHECK(std::count(points.begin(), points.end(), '\n') == static_cast<long>(g6.size() + 1));
    std::istringstream lines(points);
    std::string line;
    std::getline(lines, line);
    std::size_t coloured = 0;
    double weighted = 0.0;
    while (std::getline(lines, line)) {
        std::vector<std::string> f;
        std::istringstream fields(line);
        std::string cell;
        while (std::getline(fields, cell, ',')) f.push_back(cell);
        REQUIRE(f.size() == 5);
        const std::size_t i = std::stoul(f[0]);
        const double lat = parse_double(f[2], "lat");
        CHECK((f[3] == "1") == g6.is_upper(i));
        CHECK(std::abs(std::sin(lat * pi / 180.0) - g6.point(i).z) <= 1e-12);
        if (f[3] == "1") {
            ++coloured;
            weighted += parse_double(f[4], "p_i");
        }
    }
    CHECK(coloured == g6.pair_count());
    CHECK(std::abs(weighted / static_cast<double>(g6.pair_count()) - p) <= 1e-10);

    {  // theta override
        const auto o = run_cli(dir, "verify --grid " + path_arg(grid6) + " --colouring " +
                                        path_arg(hem) + " --theta-frac 0.5");
        CHECK(o.code == 0);
        CHECK(std::abs(report_value(o.out, "P") - 0.5) <= 1e-10);
    }

    {  // bad inputs
        std::ofstream(dir / "corrupt.col") << "COLv1 depth=6 n=20481 theta=1\n0101x\n";
        CHECK(run_cli(dir, "verify --grid " + path_arg(grid6) + " --colouring " +
                               path_arg(dir / "corrupt.col")).code == 1);
        write_colouring(dir / "d3.col", 3, 1.0, init_hemisphere(build_grid(3)));
        CHECK(run_cli(dir, "verify --grid " + path_arg(grid6) + " --colouring " +
                               path_arg(dir / "d3.col")).code == 1);
        CHECK(run_cli(dir, "verify --grid " + path_arg(grid6) + " --colouring " +
                               path_arg(dir / "absent.col")).code == 2);
    }
}

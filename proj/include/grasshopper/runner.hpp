#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grasshopper/colouring.hpp"
#include "grasshopper/kernel_index.hpp"
#include "grasshopper/solvers.hpp"
#include "grasshopper/sphere_grid.hpp"

namespace grasshopper {

namespace fs = std::filesystem;

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitIo = 2, kExitPartial = 3 };

// A jumping angle as given on the command line: radians, a fraction of pi,
// or c with theta = 2 pi / c.
struct ThetaSpec {
    enum class Unit { radians, fraction_of_pi, c_value };
    Unit unit = Unit::radians;
    double value = 0.0;

    // DomainError unless the angle lies in [0, pi].
    double radians() const;
};

struct InitSpec {
    enum class Kind { hemisphere, random, file };
    Kind kind = Kind::random;
    fs::path path;

    // "hemisphere", "random" or "file:<path>"; ConfigError otherwise.
    static InitSpec parse(std::string_view text);
    // Short label used in results rows and file names.
    std::string label() const;
};

struct ScheduleOverrides {
    bool slow = false;
    std::optional<double> t0;
    std::optional<double> alpha;
    std::optional<std::uint64_t> steps;
};

// default_schedule (or slow_schedule), then any overrides, then the seed.
AnnealSchedule resolve_schedule(const SphereGrid& grid, const ScheduleOverrides& overrides,
                                std::uint64_t seed);

// Initial colouring for run r: random inits use seed + r.
Colouring make_init(const SphereGrid& grid, const InitSpec& init, std::uint64_t seed,
                    std::size_t run);

fs::path colouring_file_name(const fs::path& out_dir, double theta, Algorithm algorithm,
                             std::uint64_t seed, const std::string& init_label);

struct VerifyReport {
    double theta = 0.0;
    double p = 0.0;
    double p_reflected = 0.0;  // P at pi - theta
    bool antipodal = false;    // every pair sums to one, total colour N
    std::vector<double> point_p;
};

// From-scratch evaluation; ShapeError if the colouring does not fit the grid.
VerifyReport verify_colouring(const SphereGrid& grid, const Colouring& c, double theta,
                              const std::optional<fs::path>& cache_dir = std::nullopt);

// lon,lat in degrees, coloured flag and P_i per grid point.
std::string point_table_csv(const SphereGrid& grid, const Colouring& c,
                            std::span<const double> point_p);

struct SolveOptions {
    fs::path grid_path;
    ThetaSpec theta;
    InitSpec init;
    Algorithm algorithm = Algorithm::sa;
    ScheduleOverrides schedule;
    std::uint64_t seed = 0;
    unsigned runs = 1;
    fs::path out_dir = ".";
    std::optional<fs::path> log_events;
    std::optional<fs::path> cache_index;
};

struct SweepOptions {
    std::optional<fs::path> grid_path;
    std::optional<int> depth;
    std::vector<ThetaSpec> thetas;
    InitSpec init;
    Algorithm algorithm = Algorithm::sa;
    ScheduleOverrides schedule;
    std::uint64_t seed = 0;
    unsigned runs = 1;
    bool chain = false;
    fs::path out_dir = ".";
    std::optional<fs::path> cache_index;
};

struct VerifyOptions {
    fs::path grid_path;
    fs::path colouring_path;
    std::optional<ThetaSpec> theta;  // defaults to the colouring file's theta
    std::optional<fs::path> points_out;
    std::optional<fs::path> cache_index;
};

// Each command reports on `out`, diagnostics on `err`, and returns an ExitCode.
int cmd_build_grid(int depth, const fs::path& out_path, std::ostream& out, std::ostream& err);
int cmd_solve(const SolveOptions& options, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& options, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err);

inline constexpr std::string_view kResultsFileName = "results.csv";

}  // namespace grasshopper

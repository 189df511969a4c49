#pragma once

#include <cstdint>
#include <filesystem>
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

// 17 significant digits, so text files round-trip doubles exactly.
std::string format_double(double x);
// ParseError naming `what` on malformed input.
double parse_double(std::string_view text, std::string_view what);

std::string read_text_file(const fs::path& path);
// Writes to a sibling temporary and renames it over `path`.
void write_file_atomic(const fs::path& path, std::string_view content);

// GRIDv1: "GRIDv1 depth=<k> n2=<2N>" then 2N lines "x y z antipode_index".
std::string grid_to_text(const SphereGrid& grid);
SphereGrid grid_from_text(std::string_view text);
void write_grid(const fs::path& path, const SphereGrid& grid);
SphereGrid read_grid(const fs::path& path);

// COLv1: "COLv1 depth=<k> n=<N> theta=<float17>" then one line of N '0'/'1'.
struct ColouringFile {
    int depth = 0;
    double theta = 0.0;
    Colouring colouring;
};
std::string colouring_to_text(int depth, double theta, const Colouring& c);
ColouringFile colouring_from_text(std::string_view text);
void write_colouring(const fs::path& path, int depth, double theta, const Colouring& c);
ColouringFile read_colouring(const fs::path& path);

// One line of the results CSV. Derived columns are pure functions of (theta, P).
struct ResultsRow {
    double theta = 0.0;
    double c = 0.0;  // 2 pi / theta
    std::string algorithm;
    std::uint64_t seed = 0;
    std::string init;
    double final_p = 0.0;
    double p_hem = 0.0;
    double p_minus_hem = 0.0;
    double p_over_hem = 0.0;
    double bell_c = 0.0;
    std::uint64_t steps = 0;
    std::uint64_t accepted = 0;
    double wall_time = 0.0;

    // Resume key: theta, algorithm, seed and init label.
    std::string key() const;
};

inline constexpr std::string_view kResultsHeader =
    "theta,c,algorithm,seed,init,final_p,p_hem,p_minus_hem,p_over_hem,bell_c,steps,accepted,"
    "wall_time";

ResultsRow make_results_row(const RunRecord& record, std::string init_label);
std::string results_row_to_csv(const ResultsRow& row);
ResultsRow results_row_from_csv(std::string_view line);
// Creates the file with a header when missing.
void append_results_row(const fs::path& path, const ResultsRow& row);
std::vector<ResultsRow> read_results(const fs::path& path);

// Binary kernel-index cache keyed by (depth, 2N, theta bits).
fs::path index_cache_path(const fs::path& dir, const SphereGrid& grid, double theta);
void save_index(const fs::path& path, const KernelIndex& index);
// nullopt when the file is missing, truncated or was built for another key.
std::optional<KernelIndex> load_index(const fs::path& path, const SphereGrid& grid, double theta);
// Loads from `cache_dir` when possible, otherwise builds (and stores when a dir is given).
KernelIndex cached_index(const SphereGrid& grid, double theta,
                         const std::optional<fs::path>& cache_dir);

}  // namespace grasshopper

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grasshopper/colouring.hpp"
#include "grasshopper/kernel_index.hpp"
#include "grasshopper/sphere_grid.hpp"

namespace grasshopper {

// Exponential cooling: T starts at t0 and is multiplied by alpha after every step.
struct AnnealSchedule {
    double t0 = 0.4;
    double alpha = 0.99999;
    std::uint64_t steps = 1;
    std::uint64_t seed = 0;

    // ConfigError unless t0 > 0, 0 < alpha < 1 and steps >= 1.
    void validate() const;
};

// t0 = 0.4, alpha = 0.99999, steps = 150 N, seed 0.
AnnealSchedule default_schedule(const SphereGrid& grid);
// Slower cooling variant: t0 = 0.2, alpha = 0.999995, steps = 150 N.
AnnealSchedule slow_schedule(const SphereGrid& grid);

enum class Algorithm { greedy, sa };

std::string_view to_string(Algorithm a);
// Accepts "greedy" and "sa"; ConfigError otherwise.
Algorithm parse_algorithm(std::string_view name);

struct RunRecord {
    double theta = 0.0;
    Algorithm algorithm = Algorithm::greedy;
    std::optional<AnnealSchedule> schedule;
    std::uint64_t seed = 0;
    double initial_p = 0.0;
    double final_p = 0.0;
    std::uint64_t steps = 0;           // greedy: iterations; sa: schedule steps
    std::uint64_t flips_accepted = 0;
    double wall_seconds = 0.0;
    std::string colouring_ref;         // filled in by whoever persists the colouring
    bool hit_iteration_cap = false;    // greedy only
    std::vector<double> trace;         // greedy: total after every accepted flip
};

struct SolveResult {
    Colouring colouring;
    RunRecord record;
};

// Improving flips stop once no delta exceeds this.
inline constexpr double kGreedyStopDelta = 1e-12;

// Best-improvement local search: flips the pair with the largest positive
// delta (lowest pair index on ties) until no delta exceeds kGreedyStopDelta.
// Capped at 10 N iterations, in which case record.hit_iteration_cap is set.
SolveResult greedy(const SphereGrid& grid, const KernelIndex& index, const Colouring& start);

// min(1, exp(delta / T)); delta >= 0 always gives 1.
double metropolis_acceptance(double delta, double temperature);

struct AnnealEvent {
    std::uint64_t step;
    double temperature;
    std::uint32_t pair;
    double delta;
    double draw;
    bool accepted;
};
using AnnealObserver = std::function<void(const AnnealEvent&)>;

// Metropolis annealing with single-pair flips: each step draws a uniform pair
// and p ~ U[0, 1), flips iff metropolis_acceptance(delta, T) > p, then cools.
// Deterministic for a fixed schedule (including seed).
SolveResult simulated_annealing(const SphereGrid& grid, const KernelIndex& index,
                                const Colouring& start, const AnnealSchedule& schedule,
                                const AnnealObserver& observer = {});

struct MultiStartResult {
    std::vector<SolveResult> runs;
    std::size_t best = 0;  // max final P, first on ties

    const SolveResult& best_run() const { return runs[best]; }
};

// Runs the solver once per initial colouring, replicas in parallel. Run r of
// an annealing batch uses seed schedule.seed + r. ConfigError for an empty
// list, ShapeError when an init does not match the grid.
MultiStartResult multi_start(const SphereGrid& grid, const KernelIndex& index,
                             std::span<const Colouring> inits, Algorithm algorithm,
                             const std::optional<AnnealSchedule>& schedule = std::nullopt,
                             unsigned workers = 0);

}  // namespace grasshopper

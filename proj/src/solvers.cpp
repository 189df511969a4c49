#include "grasshopper/solvers.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "grasshopper/errors.hpp"
#include "grasshopper/objective.hpp"
#include "grasshopper/parallel.hpp"
#include "grasshopper/rng.hpp"

namespace grasshopper {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_binary(const SphereGrid& grid, const Colouring& c) {
    if (c.size() != grid.pair_count()) {
        throw ShapeError("colouring has " + std::to_string(c.size()) + " pairs, grid has " +
                         std::to_string(grid.pair_count()));
    }
    if (!c.is_binary()) throw ConfigError("solvers operate on binary colourings only");
}

}  // namespace

void AnnealSchedule::validate() const {
    if (!(t0 > 0.0)) throw ConfigError("initial temperature must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    if (steps < 1) throw ConfigError("annealing needs at least one step");
}

AnnealSchedule default_schedule(const SphereGrid& grid) {
    return AnnealSchedule{0.4, 0.99999, 150 * static_cast<std::uint64_t>(grid.pair_count()), 0};
}

AnnealSchedule slow_schedule(const SphereGrid& grid) {
    return AnnealSchedule{0.2, 0.999995, 150 * static_cast<std::uint64_t>(grid.pair_count()), 0};
}

std::string_view to_string(Algorithm a) { return a == Algorithm::greedy ? "greedy" : "sa"; }

Algorithm parse_algorithm(std::string_view name) {
    if (name == "greedy") return Algorithm::greedy;
    if (name == "sa") return Algorithm::sa;
    throw ConfigError("unknown algorithm '" + std::string(name) + "' (expected greedy or sa)");
}

SolveResult greedy(const SphereGrid& grid, const KernelIndex& index, const Colouring& start) {
    require_binary(grid, start);
    const auto t_start = Clock::now();
    ObjectiveState state(grid, index, start);
    const std::size_t n = grid.pair_count();

    RunRecord record;
    record.theta = index.theta();
    record.algorithm = Algorithm::greedy;
    record.initial_p = state.total();

    // Every delta is kept exact: a flip of pair p can only change the deltas
    // of pairs with a member in the band of p's members.
    std::vector<double> delta(n);
    for (std::size_t q = 0; q < n; ++q) delta[q] = state.flip_delta(q);
    std::vector<std::uint8_t> stale(n, 0);
    std::vector<std::uint32_t> touched;

    const std::uint64_t cap = 10 * static_cast<std::uint64_t>(n);
    std::uint64_t iterations = 0;
    while (true) {
        std::size_t best = 0;
        for (std::size_t q = 1; q < n; ++q) {
            if (delta[q] > delta[best]) best = q;
        }
        if (!(delta[best] > kGreedyStopDelta)) break;
        if (iterations == cap) {
            record.hit_iteration_cap = true;
            break;
        }
        state.apply_flip(best);
        ++iterations;
        record.trace.push_back(state.total());

        touched.clear();
        auto mark = [&](std::uint32_t q) {
            if (!stale[q]) {
                stale[q] = 1;
                touched.push_back(q);
            }
        };
        mark(static_cast<std::uint32_t>(best));
        for (std::uint32_t v : {grid.upper()[best], grid.lower()[best]}) {
            for (std::uint32_t i : index.neighbor_ids(v)) mark(grid.pair_of(i));
        }
        for (std::uint32_t q : touched) {
            delta[q] = state.flip_delta(q);
            stale[q] = 0;
        }
    }

    record.steps = iterations;
    record.flips_accepted = iterations;
    record.final_p = state.total();
    record.wall_seconds = seconds_since(t_start);
    return SolveResult{state.colouring(), std::move(record)};
}

double metropolis_acceptance(double delta, double temperature) {
    if (delta >= 0.0) return 1.0;
    return std::min(1.0, std::exp(delta / temperature));
}

SolveResult simulated_annealing(const SphereGrid& grid, const KernelIndex& index,
                                const Colouring& start, const AnnealSchedule& schedule,
                                const AnnealObserver& observer) {
    require_binary(grid, start);
    schedule.validate();
    const auto t_start = Clock::now();
    ObjectiveState state(grid, index, start);
    const std::size_t n = grid.pair_count();

    RunRecord record;
    record.theta = index.theta();
    record.algorithm = Algorithm::sa;
    record.schedule = schedule;
    record.seed = schedule.seed;
    record.initial_p = state.total();

    Rng rng(schedule.seed);
    double temperature = schedule.t0;
    std::uint64_t accepted = 0;
    for (std::uint64_t step = 0; step < schedule.steps; ++step) {
        const auto pair = static_cast<std::uint32_t>(rng.index(n));
        const double draw = rng.unit();
        const double delta = state.flip_delta(pair);
        const bool accept = metropolis_acceptance(delta, temperature) > draw;
        if (accept) {
            state.apply_flip(pair);
            ++accepted;
        }
        if (observer) observer(AnnealEvent{step, temperature, pair, delta, draw, accept});
        temperature *= schedule.alpha;
    }

    record.steps = schedule.steps;
    record.flips_accepted = accepted;
    record.final_p = state.total();
    record.wall_seconds = seconds_since(t_start);
    return SolveResult{state.colouring(), std::move(record)};
}

MultiStartResult multi_start(const SphereGrid& grid, const KernelIndex& index,
                             std::span<const Colouring> inits, Algorithm algorithm,
                             const std::optional<AnnealSchedule>& schedule, unsigned workers) {
    if (inits.empty()) throw ConfigError("multi_start needs at least one initial colouring");
    for (const Colouring& c : inits) {
        if (c.size() != grid.pair_count()) {
            throw ShapeError("initial colouring has " + std::to_string(c.size()) +
                             " pairs, grid has " + std::to_string(grid.pair_count()));
        }
        if (!c.is_binary()) throw ConfigError("solvers operate on binary colourings only");
    }
    const AnnealSchedule base = schedule.value_or(default_schedule(grid));
    if (algorithm == Algorithm::sa) base.validate();

    std::vector<std::optional<SolveResult>> slots(inits.size());
    if (workers == 0) workers = worker_count();
    parallel_blocks(inits.size(), workers, [&](unsigned, std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            if (algorithm == Algorithm::greedy) {
                slots[r] = greedy(grid, index, inits[r]);
            } else {
                AnnealSchedule s = base;
                s.seed = base.seed + r;
                slots[r] = simulated_annealing(grid, index, inits[r], s);
            }
        }
    });

    MultiStartResult result;
    result.runs.reserve(slots.size());
    for (auto& s : slots) result.runs.push_back(std::move(*s));
    for (std::size_t r = 1; r < result.runs.size(); ++r) {
        if (result.runs[r].record.final_p > result.runs[result.best].record.final_p) {
            result.best = r;
        }
    }
    return result;
}

}  // namespace grasshopper

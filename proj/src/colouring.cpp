#include "grasshopper/colouring.hpp"

#include <algorithm>
#include <numbers>
#include <string>

#include "grasshopper/errors.hpp"
#include "grasshopper/objective.hpp"
#include "grasshopper/rng.hpp"

namespace grasshopper {

Colouring::Colouring(std::vector<double> values) : values_(std::move(values)) {
    for (double v : values_) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw DomainError("colouring value " + std::to_string(v) + " outside [0, 1]");
        }
    }
}

void Colouring::set(std::size_t p, double value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw DomainError("colouring value " + std::to_string(value) + " outside [0, 1]");
    }
    values_[p] = value;
}

bool Colouring::is_binary() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](double v) { return v == 0.0 || v == 1.0; });
}

std::size_t Colouring::upper_count() const {
    return static_cast<std::size_t>(
        std::count(values_.begin(), values_.end(), 1.0));
}

std::vector<double> Colouring::expand(const SphereGrid& grid) const {
    if (size() != grid.pair_count()) {
        throw ShapeError("colouring has " + std::to_string(size()) + " pairs, grid has " +
                         std::to_string(grid.pair_count()));
    }
    std::vector<double> full(grid.size());
    for (std::size_t p = 0; p < values_.size(); ++p) {
        full[grid.upper()[p]] = values_[p];
        full[grid.lower()[p]] = 1.0 - values_[p];
    }
    return full;
}

Colouring init_hemisphere(const SphereGrid& grid) {
    return Colouring::filled(grid.pair_count(), 1.0);
}

Colouring init_random(const SphereGrid& grid, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> s(grid.pair_count());
    for (double& v : s) v = rng.bit();
    return Colouring(std::move(s));
}

Colouring init_from_colouring(const SphereGrid& grid, const Colouring& prior) {
    if (prior.size() != grid.pair_count()) {
        throw ShapeError("prior colouring has " + std::to_string(prior.size()) +
                         " pairs, grid has " + std::to_string(grid.pair_count()));
    }
    return prior;
}

Colouring binarize(const SphereGrid& grid, const KernelIndex& index, const Colouring& c) {
    const double limit = std::numbers::pi - 2.0 * grid.resolution();
    if (index.theta() > limit) {
        throw PreconditionError("binarize needs theta <= pi - 2h = " + std::to_string(limit) +
                                ", got " + std::to_string(index.theta()));
    }
    ObjectiveState state(grid, index, c);
    for (std::size_t p = 0; p < c.size(); ++p) {
        const double s = state.colouring()[p];
        if (s == 0.0 || s == 1.0) continue;
        // With antipodes uncorrelated the total is convex in s_p, so the
        // better endpoint is never worse than the fractional value.
        const double to_upper = state.change_delta(p, 1.0);
        const double to_lower = state.change_delta(p, 0.0);
        state.apply_change(p, to_upper >= to_lower ? 1.0 : 0.0);
    }
    return state.colouring();
}

}  // namespace grasshopper

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "grasshopper/colouring.hpp"
#include "grasshopper/kernel_index.hpp"
#include "grasshopper/sphere_grid.hpp"

namespace grasshopper {

// Success-probability bookkeeping for one colouring on one (grid, index).
//
// numerator(i) caches A_i = sum_j s~_j w_ij, so P_i = A_i / D_i and
// total = (1/N) sum_i s~_i P_i. Changing one pair touches only the rows of its
// two members' neighbours, which makes a flip O(degree).
//
// The state keeps pointers to the grid and index; both must outlive it.
class ObjectiveState {
public:
    // Builds from scratch. ShapeError if index, grid and colouring disagree.
    ObjectiveState(const SphereGrid& grid, const KernelIndex& index, Colouring colouring);

    const SphereGrid& grid() const { return *grid_; }
    const KernelIndex& index() const { return *index_; }
    const Colouring& colouring() const { return colouring_; }

    double total() const { return total_; }
    double numerator(std::size_t i) const { return numerators_[i]; }
    double point_probability(std::size_t i) const {
        return numerators_[i] * index_->inverse_denominator(i);
    }
    double full_value(std::size_t i) const { return full_[i]; }

    // Exact change of the total if s_p were set to `value`. Does not mutate.
    double change_delta(std::size_t p, double value) const;
    // Change of the total if pair p were flipped (s_p -> 1 - s_p).
    double flip_delta(std::size_t p) const { return change_delta(p, 1.0 - colouring_[p]); }

    // Sets s_p and updates the affected numerators; returns the delta added to total.
    double apply_change(std::size_t p, double value);
    double apply_flip(std::size_t p) { return apply_change(p, 1.0 - colouring_[p]); }

    // Total recomputed from the current colouring without using the cache.
    double recompute_total() const;

private:
    // Pair energy as a function of the upper share x with every other pair fixed.
    struct PairTerms {
        double upper_linear;
        double lower_linear;
        double upper_self;
        double lower_self;
        double cross;

        double at(double x) const {
            const double y = 1.0 - x;
            return x * upper_linear + y * lower_linear + x * x * upper_self +
                   y * y * lower_self + x * y * cross;
        }
    };
    PairTerms pair_terms(std::size_t p) const;

    const SphereGrid* grid_;
    const KernelIndex* index_;
    Colouring colouring_;
    std::vector<double> full_;
    std::vector<double> numerators_;
    double total_ = 0.0;
};

// P_i = A_i / D_i, defined for coloured and uncoloured points alike.
inline double point_probability(const ObjectiveState& state, std::size_t i) {
    return state.point_probability(i);
}

// (1/N) sum_i s~_i P_i from scratch.
double total_probability(const SphereGrid& grid, const KernelIndex& index, const Colouring& c);

// Per-point P_i for every grid point, from scratch.
std::vector<double> point_probabilities(const SphereGrid& grid, const KernelIndex& index,
                                        const Colouring& c);

// 1 - theta / pi; DomainError outside [0, pi].
double hemisphere_reference(double theta);

// Local-hidden-variable correlation 1 - 2p.
double bell_correlation(double p);

}  // namespace grasshopper

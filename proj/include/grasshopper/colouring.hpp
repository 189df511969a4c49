#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "grasshopper/kernel_index.hpp"
#include "grasshopper/sphere_grid.hpp"

namespace grasshopper {

// Antipodal colouring indexed by pair p (position in grid.upper()).
// s_p is the share of the pair's unit colour on its upper member; the lower
// member carries 1 - s_p. Binary colourings hold only 0 and 1.
class Colouring {
public:
    Colouring() = default;
    explicit Colouring(std::vector<double> values);

    static Colouring filled(std::size_t pairs, double value) {
        return Colouring(std::vector<double>(pairs, value));
    }

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t p) const { return values_[p]; }
    std::span<const double> values() const { return values_; }

    // Throws DomainError for values outside [0, 1].
    void set(std::size_t p, double value);
    // s_p -> 1 - s_p
    void flip(std::size_t p) { values_[p] = 1.0 - values_[p]; }

    bool is_binary() const;
    // Number of pairs whose upper member is coloured (binary colourings).
    std::size_t upper_count() const;

    // Colour of grid point i: s_p on the upper member, 1 - s_p on the lower.
    double full_value(const SphereGrid& grid, std::size_t i) const {
        const double s = values_[grid.pair_of(i)];
        return grid.is_upper(i) ? s : 1.0 - s;
    }
    // Length-2N vector of full_value over all points.
    std::vector<double> expand(const SphereGrid& grid) const;

    friend bool operator==(const Colouring&, const Colouring&) = default;

private:
    std::vector<double> values_;
};

// s = 1: the whole upper half is coloured.
Colouring init_hemisphere(const SphereGrid& grid);
// i.i.d. fair bits from Rng(seed).
Colouring init_random(const SphereGrid& grid, std::uint64_t seed);
// Copy of a colouring found earlier (e.g. at another theta). ShapeError on size mismatch.
Colouring init_from_colouring(const SphereGrid& grid, const Colouring& prior);

// Visits non-binary pairs in ascending order and moves each pair's whole unit
// of colour onto the member whose completion gives the larger total success
// probability (ties go to the upper member). Requires theta <= pi - 2h so
// antipodes are uncorrelated; throws PreconditionError otherwise.
Colouring binarize(const SphereGrid& grid, const KernelIndex& index, const Colouring& c);

}  // namespace grasshopper

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "grasshopper/sphere_grid.hpp"

namespace grasshopper {

// 4-point cosine smoothed delta: 1/4 (1 + cos(pi u / 2)) for |u| <= 2, else 0.
// Throws DomainError for NaN.
double kernel_phi(double u);

// Banded correlation structure for one jumping angle: for every point i the
// points j with |dsigma(i, j) - theta| < 2h, their weights
// w_ij = phi((dsigma(i, j) - theta) / h), and the row sums D_i.
// Rows are stored CSR-style with neighbour ids ascending.
class KernelIndex {
public:
    KernelIndex(int depth, double theta, double resolution, std::vector<std::uint64_t> offsets,
                std::vector<std::uint32_t> ids, std::vector<double> weights);

    int depth() const { return depth_; }
    double theta() const { return theta_; }
    double resolution() const { return resolution_; }
    std::size_t size() const { return denominators_.size(); }
    std::size_t entry_count() const { return ids_.size(); }

    std::span<const std::uint32_t> neighbor_ids(std::size_t i) const {
        return {ids_.data() + offsets_[i], ids_.data() + offsets_[i + 1]};
    }
    std::span<const double> neighbor_weights(std::size_t i) const {
        return {weights_.data() + offsets_[i], weights_.data() + offsets_[i + 1]};
    }
    double denominator(std::size_t i) const { return denominators_[i]; }
    double inverse_denominator(std::size_t i) const { return inverse_denominators_[i]; }

    // w_ij, or 0 when j is outside i's band.
    double weight(std::size_t i, std::size_t j) const;

    // True when the index was built for this grid's depth and size.
    bool matches(const SphereGrid& grid) const {
        return grid.depth() == depth_ && grid.size() == size();
    }

    std::span<const std::uint64_t> offsets() const { return offsets_; }
    std::span<const std::uint32_t> ids() const { return ids_; }
    std::span<const double> weights() const { return weights_; }

private:
    int depth_;
    double theta_;
    double resolution_;
    std::vector<std::uint64_t> offsets_;
    std::vector<std::uint32_t> ids_;
    std::vector<double> weights_;
    std::vector<double> denominators_;
    std::vector<double> inverse_denominators_;
};

// Full pairwise scan with a dot-product prefilter; rows are split across
// worker threads. Throws DomainError unless 0 <= theta <= pi, and
// GeometryError if some row ends up with an empty band.
KernelIndex build_index(const SphereGrid& grid, double theta, unsigned workers = 0);

}  // namespace grasshopper

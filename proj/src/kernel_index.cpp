#include "grasshopper/kernel_index.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "grasshopper/errors.hpp"
#include "grasshopper/parallel.hpp"

namespace grasshopper {

double kernel_phi(double u) {
    if (std::isnan(u)) throw DomainError("kernel_phi: NaN argument");
    if (std::abs(u) > 2.0) return 0.0;
    return 0.25 * (1.0 + std::cos(std::numbers::pi * u / 2.0));
}

KernelIndex::KernelIndex(int depth, double theta, double resolution,
                         std::vector<std::uint64_t> offsets, std::vector<std::uint32_t> ids,
                         std::vector<double> weights)
    : depth_(depth),
      theta_(theta),
      resolution_(resolution),
      offsets_(std::move(offsets)),
      ids_(std::move(ids)),
      weights_(std::move(weights)) {
    if (offsets_.empty() || offsets_.back() != ids_.size() || ids_.size() != weights_.size()) {
        throw ShapeError("kernel index arrays are inconsistent");
    }
    const std::size_t n2 = offsets_.size() - 1;
    denominators_.resize(n2);
    inverse_denominators_.resize(n2);
    for (std::size_t i = 0; i < n2; ++i) {
        double d = 0.0;
        for (double w : neighbor_weights(i)) d += w;
        if (!(d > 0.0)) {
            throw GeometryError("empty correlation band at point " + std::to_string(i));
        }
        denominators_[i] = d;
        inverse_denominators_[i] = 1.0 / d;
    }
}

double KernelIndex::weight(std::size_t i, std::size_t j) const {
    const auto ids = neighbor_ids(i);
    const auto it = std::lower_bound(ids.begin(), ids.end(), static_cast<std::uint32_t>(j));
    if (it == ids.end() || *it != j) return 0.0;
    return neighbor_weights(i)[static_cast<std::size_t>(it - ids.begin())];
}

KernelIndex build_index(const SphereGrid& grid, double theta, unsigned workers) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
        throw DomainError("theta must lie in [0, pi], got " + std::to_string(theta));
    }
    const double h = grid.resolution();
    const double band = 2.0 * h;
    const std::size_t n2 = grid.size();

    // Conservative dot-product window; the exact band test runs on the angle.
    constexpr double kSlack = 1e-9;
    const double dot_hi = std::cos(std::max(0.0, theta - band)) + kSlack;
    const double dot_lo = std::cos(std::min(std::numbers::pi, theta + band)) - kSlack;

    std::vector<double> xs(n2), ys(n2), zs(n2);
    for (std::size_t i = 0; i < n2; ++i) {
        xs[i] = grid.point(i).x;
        ys[i] = grid.point(i).y;
        zs[i] = grid.point(i).z;
    }

    struct Block {
        std::vector<std::uint64_t> counts;
        std::vector<std::uint32_t> ids;
        std::vector<double> weights;
    };
    if (workers == 0) workers = worker_count();
    std::vector<Block> blocks(std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n2))));

    parallel_blocks(n2, static_cast<unsigned>(blocks.size()),
                    [&](unsigned b, std::size_t begin, std::size_t end) {
        Block& out = blocks[b];
        out.counts.reserve(end - begin);
        for (std::size_t i = begin; i < end; ++i) {
            const double xi = xs[i], yi = ys[i], zi = zs[i];
            std::uint64_t count = 0;
            for (std::size_t j = 0; j < n2; ++j) {
                const double d = xi * xs[j] + yi * ys[j] + zi * zs[j];
                if (d < dot_lo || d > dot_hi) continue;
                const double offset = central_angle(grid, i, j) - theta;
                if (!(std::abs(offset) < band)) continue;
                const double w = kernel_phi(offset / h);
                if (w > 0.0) {
                    out.ids.push_back(static_cast<std::uint32_t>(j));
                    out.weights.push_back(w);
                    ++count;
                }
            }
            out.counts.push_back(count);
        }
    });

    std::size_t total = 0;
    for (const auto& b : blocks) total += b.ids.size();
    std::vector<std::uint64_t> offsets;
    offsets.reserve(n2 + 1);
    offsets.push_back(0);
    std::vector<std::uint32_t> ids;
    std::vector<double> weights;
    if (blocks.size() == 1) {
        for (auto c : blocks[0].counts) offsets.push_back(offsets.back() + c);
        ids = std::move(blocks[0].ids);
        weights = std::move(blocks[0].weights);
    } else {
        ids.reserve(total);
        weights.reserve(total);
        for (auto& b : blocks) {
            for (auto c : b.counts) offsets.push_back(offsets.back() + c);
            ids.insert(ids.end(), b.ids.begin(), b.ids.end());
            weights.insert(weights.end(), b.weights.begin(), b.weights.end());
            b = Block{};
        }
    }
    return KernelIndex(grid.depth(), theta, h, std::move(offsets), std::move(ids),
                       std::move(weights));
}

}  // namespace grasshopper

#include "grasshopper/objective.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "grasshopper/errors.hpp"

namespace grasshopper {
namespace {

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

void check_shapes(const SphereGrid& grid, const KernelIndex& index, const Colouring& c) {
    if (!index.matches(grid)) {
        throw ShapeError("kernel index was built for depth " + std::to_string(index.depth()) +
                         " (" + std::to_string(index.size()) + " points), grid has depth " +
                         std::to_string(grid.depth()));
    }
    if (c.size() != grid.pair_count()) {
        throw ShapeError("colouring has " + std::to_string(c.size()) + " pairs, grid has " +
                         std::to_string(grid.pair_count()));
    }
}

std::vector<double> numerators_of(const KernelIndex& index, std::span<const double> full) {
    std::vector<double> a(index.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto ids = index.neighbor_ids(i);
        const auto ws = index.neighbor_weights(i);
        double acc = 0.0;
        for (std::size_t k = 0; k < ids.size(); ++k) acc += full[ids[k]] * ws[k];
        a[i] = acc;
    }
    return a;
}

double total_of(const KernelIndex& index, std::span<const double> full,
                std::span<const double> numerators, std::size_t pairs) {
    CompensatedSum sum;
    for (std::size_t i = 0; i < full.size(); ++i) {
        if (full[i] != 0.0) sum.add(full[i] * numerators[i] * index.inverse_denominator(i));
    }
    return sum.value() / static_cast<double>(pairs);
}

}  // namespace

ObjectiveState::ObjectiveState(const SphereGrid& grid, const KernelIndex& index,
                               Colouring colouring)
    : grid_(&grid), index_(&index), colouring_(std::move(colouring)) {
    check_shapes(grid, index, colouring_);
    full_ = colouring_.expand(grid);
    numerators_ = numerators_of(index, full_);
    total_ = total_of(index, full_, numerators_, grid.pair_count());
}

ObjectiveState::PairTerms ObjectiveState::pair_terms(std::size_t p) const {
    const std::uint32_t u = grid_->upper()[p];
    const std::uint32_t l = grid_->lower()[p];
    const double x = colouring_[p];
    const double inv_u = index_->inverse_denominator(u);
    const double inv_l = index_->inverse_denominator(l);
    const double w_uu = index_->weight(u, u);
    const double w_ll = index_->weight(l, l);
    const double w_ul = index_->weight(u, l);

    // Incoming contributions sum_i s~_i w_iu / D_i over i outside the pair.
    auto incoming = [&](std::uint32_t v) {
        const auto ids = index_->neighbor_ids(v);
        const auto ws = index_->neighbor_weights(v);
        double acc = 0.0;
        for (std::size_t k = 0; k < ids.size(); ++k) {
            const std::uint32_t i = ids[k];
            if (i == u || i == l) continue;
            acc += full_[i] * ws[k] * index_->inverse_denominator(i);
        }
        return acc;
    };

    PairTerms t;
    t.upper_linear = (numerators_[u] - x * w_uu - (1.0 - x) * w_ul) * inv_u + incoming(u);
    t.lower_linear = (numerators_[l] - (1.0 - x) * w_ll - x * w_ul) * inv_l + incoming(l);
    t.upper_self = w_uu * inv_u;
    t.lower_self = w_ll * inv_l;
    t.cross = w_ul * (inv_u + inv_l);
    return t;
}

double ObjectiveState::change_delta(std::size_t p, double value) const {
    const double current = colouring_[p];
    if (value == current) return 0.0;
    const PairTerms t = pair_terms(p);
    return (t.at(value) - t.at(current)) / static_cast<double>(grid_->pair_count());
}

double ObjectiveState::apply_change(std::size_t p, double value) {
    const double delta = change_delta(p, value);
    const double shift = value - colouring_[p];
    if (shift == 0.0) return 0.0;
    const std::uint32_t u = grid_->upper()[p];
    const std::uint32_t l = grid_->lower()[p];
    for (std::uint32_t v : {u, l}) {
        const double d = (v == u) ? shift : -shift;
        const auto ids = index_->neighbor_ids(v);
        const auto ws = index_->neighbor_weights(v);
        for (std::size_t k = 0; k < ids.size(); ++k) numerators_[ids[k]] += d * ws[k];
    }
    colouring_.set(p, value);
    full_[u] = value;
    full_[l] = 1.0 - value;
    total_ += delta;
    return delta;
}

double ObjectiveState::recompute_total() const {
    const std::vector<double> a = numerators_of(*index_, full_);
    return total_of(*index_, full_, a, grid_->pair_count());
}

double total_probability(const SphereGrid& grid, const KernelIndex& index, const Colouring& c) {
    return ObjectiveState(grid, index, c).total();
}

std::vector<double> point_probabilities(const SphereGrid& grid, const KernelIndex& index,
                                        const Colouring& c) {
    const ObjectiveState state(grid, index, c);
    std::vector<double> p(grid.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = state.point_probability(i);
    return p;
}

double hemisphere_reference(double theta) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
        throw DomainError("theta must lie in [0, pi], got " + std::to_string(theta));
    }
    return 1.0 - theta / std::numbers::pi;
}

double bell_correlation(double p) { return 1.0 - 2.0 * p; }

}  // namespace grasshopper

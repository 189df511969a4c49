#pragma once

// Brute-force reference computations. They share only the grid geometry with
// the library and never touch KernelIndex or ObjectiveState.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "grasshopper/colouring.hpp"
#include "grasshopper/sphere_grid.hpp"

namespace oracle {

using grasshopper::Colouring;
using grasshopper::SphereGrid;
using grasshopper::Vec3;

inline double phi(double u) {
    return std::abs(u) <= 2.0 ? 0.25 * (1.0 + std::cos(std::numbers::pi * u / 2.0)) : 0.0;
}

inline double angle(const SphereGrid& g, std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    const Vec3& a = g.point(i);
    const Vec3& b = g.point(j);
    const double cx = a.y * b.z - a.z * b.y;
    const double cy = a.z * b.x - a.x * b.z;
    const double cz = a.x * b.y - a.y * b.x;
    return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), a.x * b.x + a.y * b.y + a.z * b.z);
}

struct Entry {
    std::uint32_t i;
    std::uint32_t j;
    double w;
};

// Every ordered pair passing |dsigma - theta| < 2h with positive weight.
inline std::vector<Entry> band_entries(const SphereGrid& g, double theta) {
    const double h = std::sqrt(2.0 * std::numbers::pi / static_cast<double>(g.size() / 2));
    std::vector<Entry> out;
    for (std::uint32_t i = 0; i < g.size(); ++i) {
        for (std::uint32_t j = 0; j < g.size(); ++j) {
            const double off = angle(g, i, j) - theta;
            if (std::abs(off) < 2.0 * h) {
                const double w = phi(off / h);
                if (w > 0.0) out.push_back({i, j, w});
            }
        }
    }
    return out;
}

// Colour of every grid point from the pair vector.
inline std::vector<double> full_colouring(const SphereGrid& g, const Colouring& c) {
    std::vector<double> s(g.size());
    for (std::size_t p = 0; p < g.pair_count(); ++p) {
        s[g.upper()[p]] = c[p];
        s[g.lower()[p]] = 1.0 - c[p];
    }
    return s;
}

// P_i by direct summation over all j.
inline std::vector<double> point_probabilities(const SphereGrid& g, double theta,
                                               const Colouring& c) {
    const double h = std::sqrt(2.0 * std::numbers::pi / static_cast<double>(g.size() / 2));
    const auto s = full_colouring(g, c);
    std::vector<double> p(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double w = phi((angle(g, i, j) - theta) / h);
            num += s[j] * w;
            den += w;
        }
        p[i] = num / den;
    }
    return p;
}

// (1/N) sum_i s~_i P_i, the double sum written out.
inline double total(const SphereGrid& g, double theta, const Colouring& c) {
    const auto s = full_colouring(g, c);
    const auto p = point_probabilities(g, theta, c);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) acc += s[i] * p[i];
    return acc / static_cast<double>(g.pair_count());
}

}  // namespace oracle

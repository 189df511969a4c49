#include "grasshopper/sphere_grid.hpp"

#include <algorithm>
#include <numbers>
#include <numeric>
#include <string>
#include <tuple>
#include <unordered_map>

#include "grasshopper/errors.hpp"

namespace grasshopper {
namespace {

constexpr double kPhi = std::numbers::phi;

// Golden-ratio icosahedron: cyclic permutations of (0, +-1, +-phi).
constexpr std::array<Vec3, 12> kIcosahedronVertices{{
    {-1.0, kPhi, 0.0},
    {1.0, kPhi, 0.0},
    {-1.0, -kPhi, 0.0},
    {1.0, -kPhi, 0.0},
    {0.0, -1.0, kPhi},
    {0.0, 1.0, kPhi},
    {0.0, -1.0, -kPhi},
    {0.0, 1.0, -kPhi},
    {kPhi, 0.0, -1.0},
    {kPhi, 0.0, 1.0},
    {-kPhi, 0.0, -1.0},
    {-kPhi, 0.0, 1.0},
}};

constexpr std::array<Triangle, 20> kIcosahedronFaces{{
    {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
    {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
    {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
    {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1},
}};

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Negation commutes with this exactly, so antipodal inputs stay exact antipodes.
Vec3 unit(const Vec3& v) { return (1.0 / norm(v)) * v; }

bool lex_less(const Vec3& a, const Vec3& b) {
    return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z);
}

// Nearest-neighbour match of -p against the point set, accepting only
// residuals within kAntipodeTolerance.
std::vector<std::uint32_t> match_antipodes(std::span<const Vec3> points) {
    const std::size_t n = points.size();
    std::vector<std::uint32_t> by_x(n);
    std::iota(by_x.begin(), by_x.end(), 0u);
    std::sort(by_x.begin(), by_x.end(), [&](std::uint32_t a, std::uint32_t b) {
        return lex_less(points[a], points[b]);
    });

    std::vector<std::uint32_t> antipode(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 target = -points[i];
        auto lo = std::lower_bound(by_x.begin(), by_x.end(), target.x - kAntipodeTolerance,
                                   [&](std::uint32_t k, double x) { return points[k].x < x; });
        double best = kAntipodeTolerance;
        std::int64_t best_index = -1;
        for (auto it = lo; it != by_x.end() && points[*it].x <= target.x + kAntipodeTolerance; ++it) {
            const double r = norm(points[*it] + points[i]);
            if (r <= best) {
                best = r;
                best_index = *it;
            }
        }
        if (best_index < 0) {
            throw GeometryError("no antipode within tolerance for point " + std::to_string(i));
        }
        antipode[i] = static_cast<std::uint32_t>(best_index);
    }
    return antipode;
}

}  // namespace

double resolution_for_pairs(std::size_t pair_count) {
    return std::sqrt(2.0 * std::numbers::pi / static_cast<double>(pair_count));
}

HemisphereSplit hemisphere_split(std::span<const Vec3> points,
                                 std::span<const std::uint32_t> antipode) {
    HemisphereSplit split;
    split.upper.reserve(points.size() / 2);
    for (std::uint32_t i = 0; i < points.size(); ++i) {
        const std::uint32_t j = antipode[i];
        const Vec3& a = points[i];
        const Vec3& b = points[j];
        bool i_up;
        if (a.z > kEquatorEpsilon) {
            i_up = true;
        } else if (a.z < -kEquatorEpsilon) {
            i_up = false;
        } else {
            i_up = std::tie(a.x, a.y) > std::tie(b.x, b.y);
        }
        if (i_up) split.upper.push_back(i);
    }
    split.lower.reserve(split.upper.size());
    for (std::uint32_t u : split.upper) split.lower.push_back(antipode[u]);
    return split;
}

SphereGrid::SphereGrid(int depth, std::vector<Vec3> points, std::vector<std::uint32_t> antipode)
    : depth_(depth), points_(std::move(points)), antipode_(std::move(antipode)) {
    if (depth_ < 0 || depth_ > kMaxDepth) {
        throw GeometryError("grid depth " + std::to_string(depth_) + " outside [0, 8]");
    }
    const std::size_t n2 = points_.size();
    if (n2 != point_count_for_depth(depth_)) {
        throw GeometryError("depth " + std::to_string(depth_) + " requires " +
                            std::to_string(point_count_for_depth(depth_)) + " points, got " +
                            std::to_string(n2));
    }
    if (antipode_.size() != n2) {
        throw GeometryError("antipode table size does not match point count");
    }
    for (std::size_t i = 0; i < n2; ++i) {
        if (std::abs(norm(points_[i]) - 1.0) > kUnitTolerance) {
            throw GeometryError("point " + std::to_string(i) + " is not a unit vector");
        }
        const std::uint32_t j = antipode_[i];
        if (j >= n2 || j == i || antipode_[j] != i) {
            throw GeometryError("antipode table is not a fixed-point-free involution at " +
                                std::to_string(i));
        }
        if (norm(points_[i] + points_[j]) > kAntipodeTolerance) {
            throw GeometryError("points " + std::to_string(i) + " and " + std::to_string(j) +
                                " are not antipodal");
        }
    }

    HemisphereSplit split = hemisphere_split(points_, antipode_);
    if (split.upper.size() * 2 != n2) {
        throw GeometryError("hemisphere split is not a pairing");
    }
    upper_ = std::move(split.upper);
    lower_ = std::move(split.lower);
    pair_of_.assign(n2, 0);
    is_upper_.assign(n2, 0);
    for (std::uint32_t p = 0; p < upper_.size(); ++p) {
        pair_of_[upper_[p]] = p;
        pair_of_[lower_[p]] = p;
        is_upper_[upper_[p]] = 1;
    }
    resolution_ = resolution_for_pairs(upper_.size());
}

IcoMesh build_mesh(int depth) {
    if (depth < 0 || depth > kMaxDepth) {
        throw ConfigError("depth must be in [0, " + std::to_string(kMaxDepth) + "], got " +
                          std::to_string(depth));
    }
    std::vector<Vec3> verts(kIcosahedronVertices.begin(), kIcosahedronVertices.end());
    std::vector<Triangle> faces(kIcosahedronFaces.begin(), kIcosahedronFaces.end());
    verts.reserve(point_count_for_depth(depth));
    for (Vec3& v : verts) v = unit(v);

    for (int level = 0; level < depth; ++level) {
        std::unordered_map<std::uint64_t, std::uint32_t> midpoint;
        midpoint.reserve(faces.size() * 2);
        auto mid = [&](std::uint32_t a, std::uint32_t b) {
            auto [it, inserted] = midpoint.try_emplace(edge_key(a, b), 0u);
            if (inserted) {
                it->second = static_cast<std::uint32_t>(verts.size());
                verts.push_back(unit(verts[a] + verts[b]));
            }
            return it->second;
        };
        std::vector<Triangle> next;
        next.reserve(faces.size() * 4);
        for (const auto& [a, b, c] : faces) {
            const std::uint32_t ab = mid(a, b);
            const std::uint32_t bc = mid(b, c);
            const std::uint32_t ca = mid(c, a);
            next.push_back({a, ab, ca});
            next.push_back({b, bc, ab});
            next.push_back({c, ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }

    std::vector<std::uint32_t> antipode = match_antipodes(verts);
    return IcoMesh{SphereGrid(depth, std::move(verts), std::move(antipode)), std::move(faces)};
}

SphereGrid build_grid(int depth) { return build_mesh(depth).grid; }

std::vector<int> vertex_degrees(std::size_t point_count, std::span<const Triangle> faces) {
    std::vector<std::vector<std::uint32_t>> adjacent(point_count);
    for (const auto& f : faces) {
        for (int k = 0; k < 3; ++k) {
            adjacent[f[k]].push_back(f[(k + 1) % 3]);
            adjacent[f[k]].push_back(f[(k + 2) % 3]);
        }
    }
    std::vector<int> degree(point_count);
    for (std::size_t i = 0; i < point_count; ++i) {
        auto& a = adjacent[i];
        std::sort(a.begin(), a.end());
        degree[i] = static_cast<int>(std::unique(a.begin(), a.end()) - a.begin());
    }
    return degree;
}

double central_angle(const Vec3& a, const Vec3& b) {
    return std::atan2(norm(cross(a, b)), dot(a, b));
}

double central_angle(const SphereGrid& grid, std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return central_angle(grid.point(i), grid.point(j));
}

}  // namespace grasshopper

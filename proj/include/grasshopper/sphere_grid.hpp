#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace grasshopper {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline constexpr int kMaxDepth = 8;
inline constexpr double kUnitTolerance = 1e-12;
inline constexpr double kAntipodeTolerance = 1e-9;
inline constexpr double kEquatorEpsilon = 1e-12;

// Number of grid points 2N for a triangulation depth.
constexpr std::size_t point_count_for_depth(int depth) {
    std::size_t pow4 = 1;
    for (int i = 0; i < depth; ++i) pow4 *= 4;
    return 2 + 10 * pow4;
}

// Kernel half-width h = sqrt(2 pi / N) for N antipodal pairs.
double resolution_for_pairs(std::size_t pair_count);

struct HemisphereSplit {
    std::vector<std::uint32_t> upper;
    std::vector<std::uint32_t> lower;  // lower[p] == antipode[upper[p]]
};

// Assigns one member of every antipodal pair to the upper half: z > eps goes up,
// and for |z| <= eps the member with the lexicographically greater (x, y) goes up.
// Pairs are ordered by ascending upper index.
HemisphereSplit hemisphere_split(std::span<const Vec3> points,
                                 std::span<const std::uint32_t> antipode);

// Antipodal icosahedral geodesic grid. Immutable once built.
class SphereGrid {
public:
    // Validates every grid invariant and derives the hemisphere split.
    // Throws GeometryError on any violation.
    SphereGrid(int depth, std::vector<Vec3> points, std::vector<std::uint32_t> antipode);

    int depth() const { return depth_; }
    std::size_t size() const { return points_.size(); }
    std::size_t pair_count() const { return upper_.size(); }
    double resolution() const { return resolution_; }

    std::span<const Vec3> points() const { return points_; }
    const Vec3& point(std::size_t i) const { return points_[i]; }
    std::span<const std::uint32_t> antipodes() const { return antipode_; }
    std::uint32_t antipode(std::size_t i) const { return antipode_[i]; }

    std::span<const std::uint32_t> upper() const { return upper_; }
    std::span<const std::uint32_t> lower() const { return lower_; }
    // Pair index p of point i, and whether i is the upper member of that pair.
    std::uint32_t pair_of(std::size_t i) const { return pair_of_[i]; }
    bool is_upper(std::size_t i) const { return is_upper_[i] != 0; }

    friend bool operator==(const SphereGrid& a, const SphereGrid& b) {
        return a.depth_ == b.depth_ && a.points_ == b.points_ && a.antipode_ == b.antipode_;
    }

private:
    int depth_;
    std::vector<Vec3> points_;
    std::vector<std::uint32_t> antipode_;
    std::vector<std::uint32_t> upper_;
    std::vector<std::uint32_t> lower_;
    std::vector<std::uint32_t> pair_of_;
    std::vector<std::uint8_t> is_upper_;
    double resolution_;
};

using Triangle = std::array<std::uint32_t, 3>;

struct IcoMesh {
    SphereGrid grid;
    std::vector<Triangle> faces;
};

// Subdivides every icosahedron face into 4 triangles `depth` times, projecting
// each new edge midpoint onto the unit sphere as it is created (midpoints are
// memoized per edge).
// Throws ConfigError unless 0 <= depth <= kMaxDepth.
IcoMesh build_mesh(int depth);
SphereGrid build_grid(int depth);

// Per-vertex number of triangulation neighbours.
std::vector<int> vertex_degrees(std::size_t point_count, std::span<const Triangle> faces);

// Angle at the sphere's centre, in [0, pi]. atan2(|a x b|, a . b) keeps it
// accurate near 0 and pi.
double central_angle(const Vec3& a, const Vec3& b);
// Evaluated in canonical (min, max) index order, so the result is bitwise
// symmetric in i and j.
double central_angle(const SphereGrid& grid, std::size_t i, std::size_t j);

}  // namespace grasshopper

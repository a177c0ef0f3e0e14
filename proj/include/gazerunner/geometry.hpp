#pragma once

#include <cmath>
#include <optional>

namespace gazerunner {

// World frame: x lateral (right positive), y up, z forward along the corridor.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    bool is_finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }

    friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
    friend Vec3 operator*(double s, Vec3 a) { return a * s; }
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double length(Vec3 a) { return std::sqrt(dot(a, a)); }

/// Returns a / |a|. Throws std::invalid_argument for zero or non-finite vectors.
Vec3 normalize(Vec3 a);

/// Normalized screen coordinates, origin top-left, v grows downward.
struct ScreenPoint {
    double u = 0.5;
    double v = 0.5;

    /// Clamps into [0,1]^2. Non-finite input throws.
    static ScreenPoint clamped(double u, double v);

    friend bool operator==(const ScreenPoint&, const ScreenPoint&) = default;
};

/// Pinhole camera. `forward` and `up` must be orthonormal; right = up x forward.
struct Camera {
    Vec3 position;
    Vec3 forward{0.0, 0.0, 1.0};
    Vec3 up{0.0, 1.0, 0.0};
    double horizontal_fov = 1.5707963267948966;
    double aspect = 16.0 / 9.0;

    /// Throws std::invalid_argument when the camera violates its invariants.
    void validate() const;
    Vec3 right() const { return cross(up, forward); }
};

struct Ray {
    Vec3 origin;
    Vec3 direction;

    /// Normalizes `direction`; throws on zero or non-finite input.
    static Ray make(Vec3 origin, Vec3 direction);

    Vec3 at(double t) const { return origin + direction * t; }
};

struct Aabb {
    Vec3 min;
    Vec3 max;

    /// Builds a box from center and half extents (all extents >= 0).
    static Aabb centered(Vec3 center, Vec3 half_extents);

    Vec3 center() const { return (min + max) * 0.5; }
    Vec3 half_extents() const { return (max - min) * 0.5; }
    bool contains(Vec3 p) const {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z && p.z <= max.z;
    }
    bool overlaps(const Aabb& o) const {
        return min.x <= o.max.x && max.x >= o.min.x && min.y <= o.max.y && max.y >= o.min.y &&
               min.z <= o.max.z && max.z >= o.min.z;
    }
    /// Scales the box about its center.
    Aabb scaled(double factor) const;
    Aabb translated(Vec3 offset) const { return {min + offset, max + offset}; }
};

/// Point on the view plane at `plane_distance` in front of the camera that
/// corresponds to screen point `s`.
Vec3 screen_to_world(const Camera& camera, ScreenPoint s, double plane_distance = 1.0);

/// Inverse of screen_to_world. Absent when the point is behind the camera
/// or projects outside the screen.
std::optional<ScreenPoint> project_to_screen(const Camera& camera, Vec3 point);

/// Ray from the camera position through screen point `s`.
Ray gaze_ray(const Camera& camera, ScreenPoint s);

/// Slab test. Smallest t >= 0 at which the ray is inside the box; a ray
/// starting inside the box returns 0.
std::optional<double> ray_aabb(const Ray& ray, const Aabb& box);

}  // namespace gazerunner

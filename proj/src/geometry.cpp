#include "gazerunner/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gazerunner {

Vec3 normalize(Vec3 a) {
    const double len = length(a);
    if (!a.is_finite() || !(len > 0.0) || !std::isfinite(len)) {
        throw std::invalid_argument("normalize: zero or non-finite vector");
    }
    return a * (1.0 / len);
}

ScreenPoint ScreenPoint::clamped(double u, double v) {
    if (!std::isfinite(u) || !std::isfinite(v)) {
        throw std::invalid_argument("screen point must be finite");
    }
    return {std::clamp(u, 0.0, 1.0), std::clamp(v, 0.0, 1.0)};
}

void Camera::validate() const {
    if (!position.is_finite() || !forward.is_finite() || !up.is_finite()) {
        throw std::invalid_argument("camera: non-finite pose");
    }
    if (std::abs(length(forward) - 1.0) > 1e-6 || std::abs(length(up) - 1.0) > 1e-6) {
        throw std::invalid_argument("camera: forward and up must be unit vectors");
    }
    if (std::abs(dot(forward, up)) > 1e-6) {
        throw std::invalid_argument("camera: forward must be perpendicular to up");
    }
    if (!(horizontal_fov > 0.0 && horizontal_fov < std::numbers::pi)) {
        throw std::invalid_argument("camera: horizontal fov must lie in (0, pi)");
    }
    if (!(aspect > 0.0) || !std::isfinite(aspect)) {
        throw std::invalid_argument("camera: aspect must be positive");
    }
}

Ray Ray::make(Vec3 origin, Vec3 direction) {
    if (!origin.is_finite()) {
        throw std::invalid_argument("ray: non-finite origin");
    }
    return {origin, normalize(direction)};
}

Aabb Aabb::centered(Vec3 center, Vec3 half_extents) {
    if (half_extents.x < 0.0 || half_extents.y < 0.0 || half_extents.z < 0.0) {
        throw std::invalid_argument("aabb: negative half extent");
    }
    return {center - half_extents, center + half_extents};
}

Aabb Aabb::scaled(double factor) const {
    return centered(center(), half_extents() * factor);
}

Vec3 screen_to_world(const Camera& camera, ScreenPoint s, double plane_distance) {
    camera.validate();
    if (!std::isfinite(s.u) || !std::isfinite(s.v)) {
        throw std::invalid_argument("screen_to_world: non-finite screen point");
    }
    if (!(plane_distance > 0.0) || !std::isfinite(plane_distance)) {
        throw std::invalid_argument("screen_to_world: plane distance must be positive");
    }
    const double half_w = std::tan(camera.horizontal_fov * 0.5) * plane_distance;
    const double half_h = half_w / camera.aspect;
    const double x = (2.0 * s.u - 1.0) * half_w;
    const double y = (1.0 - 2.0 * s.v) * half_h;
    return camera.position + camera.forward * plane_distance + camera.right() * x + camera.up * y;
}

std::optional<ScreenPoint> project_to_screen(const Camera& camera, Vec3 point) {
    camera.validate();
    const Vec3 rel = point - camera.position;
    const double depth = dot(rel, camera.forward);
    if (!(depth > 0.0) || !std::isfinite(depth)) {
        return std::nullopt;
    }
    const double tan_half = std::tan(camera.horizontal_fov * 0.5);
    const double x = dot(rel, camera.right()) / depth / tan_half;
    const double y = dot(rel, camera.up) / depth / (tan_half / camera.aspect);
    const double u = 0.5 * (x + 1.0);
    const double v = 0.5 * (1.0 - y);
    constexpr double kEdge = 1e-9;
    if (u < -kEdge || u > 1.0 + kEdge || v < -kEdge || v > 1.0 + kEdge) {
        return std::nullopt;
    }
    return ScreenPoint::clamped(u, v);
}

Ray gaze_ray(const Camera& camera, ScreenPoint s) {
    const Vec3 on_plane = screen_to_world(camera, s, 1.0);
    return Ray::make(camera.position, on_plane - camera.position);
}

std::optional<double> ray_aabb(const Ray& ray, const Aabb& box) {
    double t_enter = 0.0;
    double t_exit = std::numeric_limits<double>::infinity();
    const double origin[3] = {ray.origin.x, ray.origin.y, ray.origin.z};
    const double dir[3] = {ray.direction.x, ray.direction.y, ray.direction.z};
    const double lo[3] = {box.min.x, box.min.y, box.min.z};
    const double hi[3] = {box.max.x, box.max.y, box.max.z};
    for (int axis = 0; axis < 3; ++axis) {
        if (dir[axis] == 0.0) {
            if (origin[axis] < lo[axis] || origin[axis] > hi[axis]) {
                return std::nullopt;
            }
            continue;
        }
        const double inv = 1.0 / dir[axis];
        double t0 = (lo[axis] - origin[axis]) * inv;
        double t1 = (hi[axis] - origin[axis]) * inv;
        if (t0 > t1) {
            std::swap(t0, t1);
        }
        t_enter = std::max(t_enter, t0);
        t_exit = std::min(t_exit, t1);
        if (t_enter > t_exit) {
            return std::nullopt;
        }
    }
    return t_enter;
}

}  // namespace gazerunner

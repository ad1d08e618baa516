#pragma once

#include <cmath>
#include <numbers>

namespace swarm {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(Vec2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;

  constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
  // z component of the 3D cross product; positive when o is counter-clockwise of *this.
  constexpr double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  constexpr double norm_sq() const { return x * x + y * y; }

  // Zero vector stays zero.
  Vec2 normalized() const {
    const double n = norm();
    return n > 0.0 ? Vec2{x / n, y / n} : Vec2{};
  }

  Vec2 rotated(double radians) const {
    const double c = std::cos(radians);
    const double s = std::sin(radians);
    return {c * x - s * y, s * x + c * y};
  }

  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

// Signed angle (radians, in (-pi, pi]) that rotates `from` onto `to`.
inline double signed_angle(Vec2 from, Vec2 to) { return std::atan2(from.cross(to), from.dot(to)); }

// Unsigned angle in degrees, [0, 180]. atan2 form stays accurate near 0 and 180.
inline double angle_between_deg(Vec2 a, Vec2 b) {
  return rad_to_deg(std::atan2(std::abs(a.cross(b)), a.dot(b)));
}

inline Vec2 unit_from_angle(double radians) { return {std::cos(radians), std::sin(radians)}; }

}  // namespace swarm

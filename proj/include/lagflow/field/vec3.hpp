#pragma once

#include <cmath>

namespace lagflow {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline bool is_finite(const Vec3& a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

/// Wraps a coordinate into [0, len).
inline double wrap_coord(double v, double len) {
  double w = std::fmod(v, len);
  if (w < 0.0) w += len;
  if (w >= len) w -= len;
  return w;
}

/// Periodic wrap; a non-positive box length means the unbounded domain.
inline Vec3 wrap(const Vec3& p, double box_len) {
  if (box_len <= 0.0) return p;
  return {wrap_coord(p.x, box_len), wrap_coord(p.y, box_len), wrap_coord(p.z, box_len)};
}

/// Minimum-image difference a - b.
inline Vec3 periodic_delta(const Vec3& a, const Vec3& b, double box_len) {
  Vec3 d = a - b;
  if (box_len <= 0.0) return d;
  for (int i = 0; i < 3; ++i) d[i] -= box_len * std::nearbyint(d[i] / box_len);
  return d;
}

inline double periodic_distance(const Vec3& a, const Vec3& b, double box_len) {
  return norm(periodic_delta(a, b, box_len));
}

}  // namespace lagflow

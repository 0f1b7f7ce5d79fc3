#pragma once

// Core value types shared across the library.

#include <cmath>
#include <stdexcept>

namespace taubnut {

struct Vec3 {
  double x{}, y{}, z{};
};

constexpr Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
constexpr Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
constexpr Vec3 operator*(const Vec3& a, double s) { return s * a; }
constexpr Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// Mass, coupling, angular momentum modulus, and the deformation length eta.
// The radial model is the reduction of the 3D one at fixed |L| = l.
struct SystemParams {
  double m{1.0};
  double k{1.0};
  double l{0.5};
  double eta{0.0};

  void validate() const {
    if (!(m > 0.0)) throw std::invalid_argument("SystemParams: m must be > 0");
    if (!(k > 0.0)) throw std::invalid_argument("SystemParams: k must be > 0");
    if (!(l >= 0.0)) throw std::invalid_argument("SystemParams: l must be >= 0");
    if (!std::isfinite(eta)) throw std::invalid_argument("SystemParams: eta must be finite");
  }
};

struct RadialState {
  double r{};
  double p{};
};

struct PhasePoint3D {
  Vec3 q{};
  Vec3 p{};
};

// Thin wrapper so energies read as energies at call sites.
struct Energy {
  double value{};
  double abs_value() const { return std::fabs(value); }
};

}  // namespace taubnut

#ifndef TWODISK_GEOMETRY_HPP
#define TWODISK_GEOMETRY_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace twodisk {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Disk {
  Vec2 center;
  double radius;
};

inline Vec2 perp(const Vec2& v) { return Vec2(-v.y(), v.x()); }

// Inversion of x through the circle bounding `d`.
inline Vec2 reflect(const Disk& d, const Vec2& x) {
  Vec2 w = x - d.center;
  double q = w.squaredNorm();
  if (q == 0.0) throw DomainError("reflect: x coincides with the disk center");
  return d.center + (d.radius * d.radius / q) * w;
}

inline Mat2 reflect_jacobian(const Disk& d, const Vec2& x) {
  Vec2 w = x - d.center;
  double q = w.squaredNorm();
  if (q == 0.0) throw DomainError("reflect_jacobian: x coincides with the disk center");
  Vec2 wh = w / std::sqrt(q);
  return (d.radius * d.radius / q) * (Mat2::Identity() - 2.0 * wh * wh.transpose());
}

// Two disjoint disks with the canonical gap frame: n points from c1 to c2,
// t = n rotated +90 degrees, p is the midpoint of the shortest segment between
// the boundaries, and p1/p2 are the fixed points of the composed reflections
// R1∘R2 and R2∘R1.
struct TwoDiskConfig {
  Disk disk1, disk2;
  double eps;
  Vec2 n, t, p, p1, p2;
};

inline TwoDiskConfig make_config(const Disk& d1, const Disk& d2) {
  if (d1.radius <= 0 || d2.radius <= 0) throw ConfigError("disk radius must be positive");
  double d = (d2.center - d1.center).norm();
  double eps = d - d1.radius - d2.radius;
  if (eps <= 1e-14 * (d1.radius + d2.radius))
    throw ConfigError("disks overlap or the gap is numerically collapsed (eps = " +
                      std::to_string(eps) + ")");
  TwoDiskConfig cfg;
  cfg.disk1 = d1;
  cfg.disk2 = d2;
  cfg.eps = eps;
  cfg.n = (d2.center - d1.center) / d;
  cfg.t = perp(cfg.n);
  cfg.p = d1.center + (d1.radius + eps / 2) * cfg.n;
  // Fixed points lie on the center line.  Writing p1 = c1 + s1*n, p2 = c1 + s2*n,
  // mutual inversion through both circles gives s1*s2 = r1^2 and
  // (d - s1)(d - s2) = r2^2, hence s1 + s2 = (d^2 + r1^2 - r2^2)/d =: S and
  // s2 = (S + sqrt(S^2 - 4 r1^2))/2 (the root with p2 inside disk2).
  double S = (d * d + d1.radius * d1.radius - d2.radius * d2.radius) / d;
  double disc = S * S - 4 * d1.radius * d1.radius;
  double s2 = (S + std::sqrt(disc)) / 2;
  double s1 = d1.radius * d1.radius / s2;
  cfg.p1 = d1.center + s1 * cfg.n;
  cfg.p2 = d1.center + s2 * cfg.n;
  return cfg;
}

// |R1(R2(p1)) - p1|, used as a construction sanity check.
inline double fixed_point_residual(const TwoDiskConfig& cfg) {
  double r1 = (reflect(cfg.disk1, reflect(cfg.disk2, cfg.p1)) - cfg.p1).norm();
  double r2 = (reflect(cfg.disk2, reflect(cfg.disk1, cfg.p2)) - cfg.p2).norm();
  return std::max(r1, r2);
}

// Axis-aligned configuration with the gap centered at the origin.
inline TwoDiskConfig symmetric_config(double r1, double r2, double eps) {
  return make_config(Disk{Vec2(-r1 - eps / 2, 0.0), r1},
                     Disk{Vec2(r2 + eps / 2, 0.0), r2});
}

}  // namespace twodisk

#endif

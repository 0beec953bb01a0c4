#ifndef TWODISK_SINGULAR_HPP
#define TWODISK_SINGULAR_HPP

#include <complex>
#include <numbers>
#include <vector>

#include "twodisk/geometry.hpp"
#include "twodisk/harmonic.hpp"

namespace twodisk {

namespace detail {
inline Vec2 grad_log(const Vec2& x, const Vec2& q) {
  Vec2 d = x - q;
  return d / d.squaredNorm();
}
inline std::complex<double> cplx(const Vec2& v) { return {v.x(), v.y()}; }
}  // namespace detail

// h(x) = (1/2pi)(log|x - p1| - log|x - p2|): harmonic outside the disks,
// constant on each boundary circle, unit dipole-pair flux.
inline double eval_h(const TwoDiskConfig& cfg, const Vec2& x) {
  return (std::log((x - cfg.p1).norm()) - std::log((x - cfg.p2).norm())) / two_pi;
}

inline Vec2 grad_h(const TwoDiskConfig& cfg, const Vec2& x) {
  return (detail::grad_log(x, cfg.p1) - detail::grad_log(x, cfg.p2)) / two_pi;
}

// h with the center logs removed; decays at infinity and carries zero flux
// through each circle individually.
inline double eval_h_tilde(const TwoDiskConfig& cfg, const Vec2& x) {
  return eval_h(cfg, x) -
         (std::log((x - cfg.disk1.center).norm()) -
          std::log((x - cfg.disk2.center).norm())) / two_pi;
}

inline Vec2 grad_h_tilde(const TwoDiskConfig& cfg, const Vec2& x) {
  return (detail::grad_log(x, cfg.p1) - detail::grad_log(x, cfg.p2) -
          detail::grad_log(x, cfg.disk1.center) + detail::grad_log(x, cfg.disk2.center)) /
         two_pi;
}

// Conjugate-type singular function for the insulated case.  Evaluated through
// principal arguments of the quotients (x-p_j)/(x-c_j): each quotient is
// negative-real only on the segment joining its poles, which lies inside a
// disk, so the value is single-valued and continuous on the whole exterior.
inline double eval_h_perp(const TwoDiskConfig& cfg, const Vec2& x) {
  using detail::cplx;
  std::complex<double> z = cplx(x);
  double a1 = std::arg((z - cplx(cfg.p1)) / (z - cplx(cfg.disk1.center)));
  double a2 = std::arg((z - cplx(cfg.p2)) / (z - cplx(cfg.disk2.center)));
  return (a1 - a2) / two_pi;
}

inline Vec2 grad_h_perp(const TwoDiskConfig& cfg, const Vec2& x) {
  // grad arg(x - q) = (x - q)^perp / |x - q|^2
  return (perp(detail::grad_log(x, cfg.p1)) - perp(detail::grad_log(x, cfg.p2)) -
          perp(detail::grad_log(x, cfg.disk1.center)) +
          perp(detail::grad_log(x, cfg.disk2.center))) /
         two_pi;
}

struct StressIntensity {
  double a_perfect;    // coefficient of h~ in the augmented representation
  double a_insulated;  // coefficient of h_perp
};

inline StressIntensity stress_intensity(const TwoDiskConfig& cfg, const HarmonicPolynomial& H) {
  double r1 = cfg.disk1.radius, r2 = cfg.disk2.radius;
  double pref = 4.0 * std::numbers::pi * r1 * r2 / (r1 + r2);
  Vec2 g = grad_H(H, cfg.p);
  return {pref * cfg.n.dot(g), pref * cfg.t.dot(g)};
}

// Gap of the perfect-conductor boundary constants, lambda2 - lambda1 = H(p2) - H(p1).
inline double potential_difference(const TwoDiskConfig& cfg, const HarmonicPolynomial& H) {
  return eval_H(H, cfg.p2) - eval_H(H, cfg.p1);
}

// Interior limit of the normal derivative of the extension of h~ into the
// disks: the part of h~ that is harmonic inside disk j is the log centered at
// the *other* disk.
inline double interior_normal_derivative_h_tilde_e(const TwoDiskConfig& cfg, int j,
                                                   const Vec2& x) {
  const Disk& own = (j == 1) ? cfg.disk1 : cfg.disk2;
  const Disk& other = (j == 1) ? cfg.disk2 : cfg.disk1;
  if (std::abs((x - own.center).norm() - own.radius) > 1e-9 * own.radius)
    throw DomainError("interior_normal_derivative_h_tilde_e: x not on the requested boundary");
  Vec2 nu = (x - own.center).normalized();
  double val = (x - other.center).dot(nu) / (x - other.center).squaredNorm() / two_pi;
  return (j == 1) ? val : -val;
}

// One sample of Neumann-to-Dirichlet boundary data on a curve enclosing both
// disks: position, outward normal of the enclosing domain, Neumann datum g,
// Dirichlet trace Lg = Lambda[g], arclength weight.
struct BoundarySample {
  Vec2 y;
  Vec2 nu;
  double g;
  double Lg;
  double weight;
};

// Stress intensity recovered from boundary data alone:
//   a = -(2 r1 r2/(r1+r2)) [ sum <p-y,n>/|p-y|^2 g
//        + sum (<n,nu>/|p-y|^2 - 2<p-y,n><p-y,nu>/|p-y|^4) Lg ] * weights.
// The constant follows from the intensity formula combined with the Green
// representation of H from (g, Lambda[g]); both kernels' 1/2pi factors are
// absorbed into the prefactor.
inline double intensity_from_boundary_data(const TwoDiskConfig& cfg,
                                           const std::vector<BoundarySample>& samples) {
  if (samples.empty()) throw DomainError("intensity_from_boundary_data: no samples");
  double total_w = 0.0, acc = 0.0;
  for (const auto& s : samples) {
    total_w += s.weight;
    Vec2 d = cfg.p - s.y;
    double dd = d.squaredNorm();
    double k_g = d.dot(cfg.n) / dd;
    double k_L = s.nu.dot(cfg.n) / dd - 2.0 * d.dot(cfg.n) * d.dot(s.nu) / (dd * dd);
    acc += s.weight * (k_g * s.g + k_L * s.Lg);
  }
  if (total_w == 0.0) throw DomainError("intensity_from_boundary_data: zero total weight");
  double r1 = cfg.disk1.radius, r2 = cfg.disk2.radius;
  return -2.0 * r1 * r2 / (r1 + r2) * acc;
}

}  // namespace twodisk

#endif

#ifndef TWODISK_LAYER_HPP
#define TWODISK_LAYER_HPP

#include <complex>
#include <vector>

#include "twodisk/geometry.hpp"

namespace twodisk {

struct AccuracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// M equispaced nodes on a circle with outward unit normals and the uniform
// trapezoid weight 2*pi*r/M.
struct BoundaryGrid {
  Disk disk;
  int M = 0;
  std::vector<Vec2> nodes;
  std::vector<Vec2> normals;
  std::vector<double> theta;
  double weight = 0.0;
};

inline BoundaryGrid make_grid(const Disk& disk, int M) {
  if (M < 8 || M % 2 != 0) throw ConfigError("node count must be even and >= 8");
  BoundaryGrid g;
  g.disk = disk;
  g.M = M;
  g.weight = two_pi * disk.radius / M;
  g.nodes.reserve(M);
  g.normals.reserve(M);
  g.theta.reserve(M);
  for (int k = 0; k < M; ++k) {
    double th = two_pi * k / M;
    Vec2 nu(std::cos(th), std::sin(th));
    g.theta.push_back(th);
    g.normals.push_back(nu);
    g.nodes.push_back(disk.center + disk.radius * nu);
  }
  return g;
}

struct BoundaryDensity {
  BoundaryGrid grid;
  Eigen::VectorXd values;
};

inline double density_mean(const BoundaryDensity& d) { return d.values.mean(); }

inline void project_mean_zero(BoundaryDensity& d) {
  d.values.array() -= d.values.mean();
}

namespace detail {
// Signed distance from x to the source circle, and the margin guard shared by
// the quadrature evaluators: within 2 grid spacings the trapezoid rule is not
// trustworthy and we refuse rather than return garbage.
inline void check_margin(const BoundaryGrid& g, const Vec2& x) {
  double dist = std::abs((x - g.disk.center).norm() - g.disk.radius);
  double margin = 2.0 * two_pi * g.disk.radius / g.M;
  if (dist < margin)
    throw AccuracyError("evaluation point at distance " + std::to_string(dist) +
                        " from the source circle, inside the safety margin " +
                        std::to_string(margin));
}
}  // namespace detail

// Trapezoid quadrature of (1/2pi) \int log|x-y| phi(y) ds(y).
inline double eval_single_layer(const BoundaryDensity& d, const Vec2& x) {
  detail::check_margin(d.grid, x);
  double acc = 0.0;
  for (int k = 0; k < d.grid.M; ++k)
    acc += d.values[k] * std::log((x - d.grid.nodes[k]).norm());
  return d.grid.weight / two_pi * acc;
}

inline Vec2 eval_single_layer_gradient(const BoundaryDensity& d, const Vec2& x) {
  detail::check_margin(d.grid, x);
  Vec2 acc = Vec2::Zero();
  for (int k = 0; k < d.grid.M; ++k) {
    Vec2 diff = x - d.grid.nodes[k];
    acc += d.values[k] / diff.squaredNorm() * diff;
  }
  return d.grid.weight / two_pi * acc;
}

// Double layer with kernel -(1/2pi) <x-y, nu(y)> / |x-y|^2.
inline double eval_double_layer(const BoundaryDensity& d, const Vec2& x) {
  detail::check_margin(d.grid, x);
  double acc = 0.0;
  for (int k = 0; k < d.grid.M; ++k) {
    Vec2 diff = x - d.grid.nodes[k];
    acc -= d.values[k] * diff.dot(d.grid.normals[k]) / diff.squaredNorm();
  }
  return d.grid.weight / two_pi * acc;
}

// Nystrom matrix of the normal derivative of the source circle's single layer
// on the target circle: entry (k,l) = w_l (1/2pi) <x_k - y_l, nu(x_k)> / |x_k - y_l|^2
// with nu the target disk's outward normal.
inline Eigen::MatrixXd cross_kernel_block(const BoundaryGrid& target,
                                          const BoundaryGrid& source) {
  double center_gap = (target.disk.center - source.disk.center).norm();
  if (center_gap <= target.disk.radius + source.disk.radius)
    throw DomainError("cross_kernel_block: circles are not disjoint");
  Eigen::MatrixXd B(target.M, source.M);
  for (int k = 0; k < target.M; ++k)
    for (int l = 0; l < source.M; ++l) {
      Vec2 diff = target.nodes[k] - source.nodes[l];
      B(k, l) = source.weight / two_pi * diff.dot(target.normals[k]) / diff.squaredNorm();
    }
  return B;
}

enum class Side { exterior, interior };

// Jump relation on a circle: the self normal derivative of S[phi] is
// +-phi/2 + K*[phi], and the adjoint term K*[phi] degenerates to the constant
// (1/4pi r) \oint phi ds.  Normals are the disk-outward ones.
inline Eigen::VectorXd own_boundary_flux(const BoundaryDensity& d, Side side) {
  double kstar = d.grid.weight * d.values.sum() / (2.0 * two_pi * d.grid.disk.radius);
  double sgn = (side == Side::exterior) ? 0.5 : -0.5;
  return (sgn * d.values).array() + kstar;
}

// ---- modal (Fourier) evaluation ----------------------------------------
//
// The trapezoid rule degrades exponentially near the source circle.  The trig
// interpolant of a nodal density has an exact exterior harmonic extension:
//   S[e^{im th}] = -(r/2|m|) (r/rho)^{|m|} e^{im phi},   S[1] = r log rho,
// which is what these evaluators sum.  They are accurate up to (and on) the
// circle and are the basis of the spectrally converged system blocks.

struct FourierModes {
  // amps[m], m = 0..M/2: density(theta) = amps[0].real() + sum Re(amps[m] e^{im theta}),
  // with the Nyquist mode single-counted.
  std::vector<std::complex<double>> amps;
};

inline FourierModes density_modes(const BoundaryDensity& d) {
  int M = d.grid.M;
  FourierModes fm;
  fm.amps.resize(M / 2 + 1);
  for (int m = 0; m <= M / 2; ++m) {
    std::complex<double> acc = 0.0;
    for (int k = 0; k < M; ++k)
      acc += d.values[k] * std::polar(1.0, -m * d.grid.theta[k]);
    double scale = (m == 0 || m == M / 2) ? 1.0 : 2.0;
    fm.amps[m] = scale / M * acc;
  }
  return fm;
}

inline double modal_single_layer(const BoundaryDensity& d, const FourierModes& fm,
                                 const Vec2& x) {
  double r = d.grid.disk.radius;
  std::complex<double> z(x.x() - d.grid.disk.center.x(), x.y() - d.grid.disk.center.y());
  double rho = std::abs(z);
  double out = fm.amps[0].real() * r * std::log(rho);
  // (r/rho)^m e^{im phi} = r^m conj(z)^{-m}; accumulate powers of 1/conj(z).
  std::complex<double> zin = 1.0 / std::conj(z);
  std::complex<double> zpow = zin;
  for (int m = 1; m <= d.grid.M / 2; ++m) {
    out += std::real(-std::pow(r, m + 1) / (2.0 * m) * fm.amps[m] * zpow);
    zpow *= zin;
  }
  return out;
}

inline Vec2 modal_single_layer_gradient(const BoundaryDensity& d, const FourierModes& fm,
                                        const Vec2& x) {
  // u = Re W(z) with W = a0 r log z + sum -r^{m+1}/(2m) conj(amp_m) z^{-m};
  // grad u = (Re W', -Im W').
  double r = d.grid.disk.radius;
  std::complex<double> z(x.x() - d.grid.disk.center.x(), x.y() - d.grid.disk.center.y());
  std::complex<double> zin = 1.0 / z;
  std::complex<double> Wp = fm.amps[0].real() * r * zin;
  std::complex<double> zpow = zin * zin;  // z^{-m-1} for m = 1
  for (int m = 1; m <= d.grid.M / 2; ++m) {
    Wp += std::pow(r, m + 1) / 2.0 * std::conj(fm.amps[m]) * zpow;
    zpow *= zin;
  }
  return Vec2(Wp.real(), -Wp.imag());
}

// Exact action of the cross normal-derivative operator on the trig interpolant:
// the quadrature-converged (M -> infinity) limit of cross_kernel_block, column
// by column.  Entry (k,l) pairs target node k with the interpolant through a
// unit impulse at source node l.  Normals are the target disk's outward ones.
inline Eigen::MatrixXd spectral_cross_block(const BoundaryGrid& target,
                                            const BoundaryGrid& source) {
  int Mt = target.M, Ms = source.M;
  double r = source.disk.radius;
  Eigen::MatrixXd B(Mt, Ms);
  std::vector<std::complex<double>> z(Mt), nuz(Mt);
  for (int k = 0; k < Mt; ++k) {
    z[k] = {target.nodes[k].x() - source.disk.center.x(),
            target.nodes[k].y() - source.disk.center.y()};
    nuz[k] = {target.normals[k].x(), target.normals[k].y()};
  }
  for (int k = 0; k < Mt; ++k) {
    std::complex<double> zin = 1.0 / z[k];
    // mode 0: d/dnu of r log|z| = Re((r/z) nu)
    double mode0 = std::real(r * zin * nuz[k]) / Ms;
    std::complex<double> zpow = zin * zin;
    for (int l = 0; l < Ms; ++l) B(k, l) = mode0;
    for (int m = 1; m <= Ms / 2; ++m) {
      std::complex<double> fac = std::pow(r, m + 1) / 2.0 * zpow * nuz[k];
      double scale = (m < Ms / 2) ? 2.0 : 1.0;
      for (int l = 0; l < Ms; ++l)
        B(k, l) += scale / Ms * std::real(fac * std::polar(1.0, m * source.theta[l]));
      zpow *= zin;
    }
  }
  return B;
}

}  // namespace twodisk

#endif

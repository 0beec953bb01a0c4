#ifndef TWODISK_SOLVER_HPP
#define TWODISK_SOLVER_HPP

#include <optional>
#include <vector>

#include "twodisk/geometry.hpp"
#include "twodisk/harmonic.hpp"
#include "twodisk/layer.hpp"
#include "twodisk/singular.hpp"

namespace twodisk {

enum class Conductivity { perfect, insulated };
enum class Method { standard, augmented };

// nystrom: literal pointwise trapezoid cross blocks (the discretization whose
// small-gap breakdown the error studies document).  spectral: the exact action
// of the same cross operators on the trig interpolant, i.e. the quadrature-
// converged limit of the Nystrom system; default for production solves.
enum class Quadrature { nystrom, spectral };

struct AssembledSystem {
  TwoDiskConfig config;
  Conductivity conductivity;
  Quadrature quadrature;
  double lambda;
  BoundaryGrid grid1, grid2;
  Eigen::MatrixXd A;  // [[lambda I, A12], [A21, lambda I]], 2M x 2M
};

// The system is written with the normal of the exterior domain (pointing into
// the disks): off-diagonal blocks are the negated disk-outward cross blocks
// and the standard RHS below is +dH/dnu_disk = -dH/dnu.  This is the only
// sign combination consistent with the single-disk closed form.
inline AssembledSystem assemble(const TwoDiskConfig& cfg, int M, Conductivity cond,
                                Quadrature quad = Quadrature::spectral) {
  AssembledSystem sys;
  sys.config = cfg;
  sys.conductivity = cond;
  sys.quadrature = quad;
  sys.lambda = (cond == Conductivity::perfect) ? 0.5 : -0.5;
  sys.grid1 = make_grid(cfg.disk1, M);
  sys.grid2 = make_grid(cfg.disk2, M);
  Eigen::MatrixXd A12, A21;
  if (quad == Quadrature::nystrom) {
    A12 = -cross_kernel_block(sys.grid1, sys.grid2);
    A21 = -cross_kernel_block(sys.grid2, sys.grid1);
  } else {
    A12 = -spectral_cross_block(sys.grid1, sys.grid2);
    A21 = -spectral_cross_block(sys.grid2, sys.grid1);
  }
  sys.A.setZero(2 * M, 2 * M);
  sys.A.topLeftCorner(M, M) = sys.lambda * Eigen::MatrixXd::Identity(M, M);
  sys.A.bottomRightCorner(M, M) = sys.lambda * Eigen::MatrixXd::Identity(M, M);
  sys.A.topRightCorner(M, M) = A12;
  sys.A.bottomLeftCorner(M, M) = A21;
  return sys;
}

inline Eigen::VectorXd rhs_standard(const AssembledSystem& sys, const HarmonicPolynomial& H) {
  int M = sys.grid1.M;
  Eigen::VectorXd y(2 * M);
  for (int k = 0; k < M; ++k) {
    y[k] = grad_H(H, sys.grid1.nodes[k]).dot(sys.grid1.normals[k]);
    y[M + k] = grad_H(H, sys.grid2.nodes[k]).dot(sys.grid2.normals[k]);
  }
  return y;
}

namespace detail {
// (1/2pi) <x - c, nu>/|x - c|^2, or the rotated variant for the insulated case.
inline double center_kernel(const Vec2& x, const Vec2& nu, const Vec2& c, bool rotated) {
  Vec2 d = x - c;
  Vec2 dd = rotated ? perp(d) : d;
  return dd.dot(nu) / d.squaredNorm() / two_pi;
}
}  // namespace detail

// Standard RHS plus the closed-form correction moving the singular term's
// interior extension flux to the right-hand side.
inline Eigen::VectorXd rhs_augmented(const AssembledSystem& sys, const HarmonicPolynomial& H,
                                     const StressIntensity& intensity) {
  bool insul = sys.conductivity == Conductivity::insulated;
  double a = insul ? intensity.a_insulated : intensity.a_perfect;
  Eigen::VectorXd y = rhs_standard(sys, H);
  int M = sys.grid1.M;
  const Vec2& c1 = sys.config.disk1.center;
  const Vec2& c2 = sys.config.disk2.center;
  for (int k = 0; k < M; ++k) {
    y[k] += a * detail::center_kernel(sys.grid1.nodes[k], sys.grid1.normals[k], c2, insul);
    y[M + k] -= a * detail::center_kernel(sys.grid2.nodes[k], sys.grid2.normals[k], c1, insul);
  }
  return y;
}

struct SolveReport {
  Eigen::VectorXd x;           // stacked densities as solved
  double residual_rel;
  double mean_projection;      // magnitude removed by the insulated mean-zero projection
  std::optional<Eigen::VectorXd> singular_values;  // descending, on request
};

inline SolveReport solve(const AssembledSystem& sys, const Eigen::VectorXd& rhs,
                         bool with_svd = false) {
  SolveReport rep;
  rep.x = sys.A.partialPivLu().solve(rhs);
  double yn = rhs.norm();
  rep.residual_rel = yn == 0.0 ? (sys.A * rep.x).norm() : (sys.A * rep.x - rhs).norm() / yn;
  rep.mean_projection = 0.0;
  int M = sys.grid1.M;
  if (sys.conductivity == Conductivity::insulated) {
    // suppress the rank-deficient constant mode
    double m1 = rep.x.head(M).mean(), m2 = rep.x.tail(M).mean();
    rep.x.head(M).array() -= m1;
    rep.x.tail(M).array() -= m2;
    rep.mean_projection = std::max(std::abs(m1), std::abs(m2));
  }
  if (with_svd) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(sys.A);
    rep.singular_values = svd.singularValues();
  }
  return rep;
}

struct ProjectionEntry {
  double sigma;
  double proj_rhs;       // |<u_i, Y>|
  double proj_residual;  // |<u_i, A x - Y>| for a supplied candidate x
};

// Projections onto the left singular vectors of the `count` smallest singular
// values, ordered from the smallest sigma upward.
inline std::vector<ProjectionEntry> svd_projections(const AssembledSystem& sys,
                                                    const Eigen::VectorXd& rhs,
                                                    const Eigen::VectorXd& residual,
                                                    int count) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(sys.A, Eigen::ComputeThinU);
  const auto& S = svd.singularValues();
  const auto& U = svd.matrixU();
  int n = static_cast<int>(S.size());
  std::vector<ProjectionEntry> out;
  for (int i = 0; i < count && i < n; ++i) {
    int col = n - 1 - i;
    out.push_back({S[col], std::abs(U.col(col).dot(rhs)), std::abs(U.col(col).dot(residual))});
  }
  return out;
}

// ---- evaluable solution -------------------------------------------------

struct SolutionField {
  TwoDiskConfig config;
  HarmonicPolynomial H;
  Method method;
  Conductivity conductivity;
  double intensity = 0.0;  // 0 in standard mode; a or a_perp in augmented mode
  BoundaryDensity dens1, dens2;
  FourierModes modes1, modes2;
};

struct FieldSolution {
  SolutionField field;
  SolveReport report;
};

inline FieldSolution solve_field(const TwoDiskConfig& cfg, const HarmonicPolynomial& H, int M,
                                 Method method, Conductivity cond,
                                 Quadrature quad = Quadrature::spectral,
                                 bool with_svd = false) {
  AssembledSystem sys = assemble(cfg, M, cond, quad);
  FieldSolution fs;
  fs.field.config = cfg;
  fs.field.H = H;
  fs.field.method = method;
  fs.field.conductivity = cond;
  Eigen::VectorXd y;
  if (method == Method::augmented) {
    StressIntensity si = stress_intensity(cfg, H);
    fs.field.intensity = (cond == Conductivity::insulated) ? si.a_insulated : si.a_perfect;
    y = rhs_augmented(sys, H, si);
  } else {
    y = rhs_standard(sys, H);
  }
  fs.report = solve(sys, y, with_svd);
  fs.field.dens1 = {sys.grid1, fs.report.x.head(M)};
  fs.field.dens2 = {sys.grid2, fs.report.x.tail(M)};
  fs.field.modes1 = density_modes(fs.field.dens1);
  fs.field.modes2 = density_modes(fs.field.dens2);
  return fs;
}

enum class EvalBackend {
  quadrature,  // trapezoid; refuses points within the safety margin
  modal        // Fourier-mode evaluation; valid up to and on the circles
};

inline double singular_part(const SolutionField& f, const Vec2& x) {
  if (f.method != Method::augmented || f.intensity == 0.0) return 0.0;
  return f.intensity * (f.conductivity == Conductivity::insulated ? eval_h_perp(f.config, x)
                                                                  : eval_h_tilde(f.config, x));
}

inline Vec2 singular_part_gradient(const SolutionField& f, const Vec2& x) {
  if (f.method != Method::augmented || f.intensity == 0.0) return Vec2::Zero();
  return f.intensity * (f.conductivity == Conductivity::insulated ? grad_h_perp(f.config, x)
                                                                  : grad_h_tilde(f.config, x));
}

inline double eval_u(const SolutionField& f, const Vec2& x,
                     EvalBackend backend = EvalBackend::quadrature) {
  double u = eval_H(f.H, x) + singular_part(f, x);
  if (backend == EvalBackend::quadrature)
    return u + eval_single_layer(f.dens1, x) + eval_single_layer(f.dens2, x);
  return u + modal_single_layer(f.dens1, f.modes1, x) + modal_single_layer(f.dens2, f.modes2, x);
}

inline Vec2 eval_grad_u(const SolutionField& f, const Vec2& x,
                        EvalBackend backend = EvalBackend::quadrature) {
  Vec2 g = grad_H(f.H, x) + singular_part_gradient(f, x);
  if (backend == EvalBackend::quadrature)
    return g + eval_single_layer_gradient(f.dens1, x) + eval_single_layer_gradient(f.dens2, x);
  return g + modal_single_layer_gradient(f.dens1, f.modes1, x) +
         modal_single_layer_gradient(f.dens2, f.modes2, x);
}

// u at the nodes of boundary j (modal self-evaluation is exact on the circle).
inline Eigen::VectorXd boundary_values(const SolutionField& f, int j) {
  const BoundaryDensity& own = (j == 1) ? f.dens1 : f.dens2;
  const BoundaryDensity& other = (j == 1) ? f.dens2 : f.dens1;
  const FourierModes& own_m = (j == 1) ? f.modes1 : f.modes2;
  const FourierModes& other_m = (j == 1) ? f.modes2 : f.modes1;
  Eigen::VectorXd u(own.grid.M);
  for (int k = 0; k < own.grid.M; ++k) {
    const Vec2& x = own.grid.nodes[k];
    u[k] = eval_H(f.H, x) + singular_part(f, x) + modal_single_layer(own, own_m, x) +
           modal_single_layer(other, other_m, x);
  }
  return u;
}

// Exterior normal derivative of u at the nodes of boundary j, with respect to
// the disk-outward normal: jump identity for the own layer, modal gradient for
// the cross layer, analytic derivatives for H and the singular term.
inline Eigen::VectorXd boundary_flux(const SolutionField& f, int j) {
  const BoundaryDensity& own = (j == 1) ? f.dens1 : f.dens2;
  const BoundaryDensity& other = (j == 1) ? f.dens2 : f.dens1;
  const FourierModes& other_m = (j == 1) ? f.modes2 : f.modes1;
  Eigen::VectorXd flux = own_boundary_flux(own, Side::exterior);
  for (int k = 0; k < own.grid.M; ++k) {
    const Vec2& x = own.grid.nodes[k];
    const Vec2& nu = own.grid.normals[k];
    flux[k] += (grad_H(f.H, x) + singular_part_gradient(f, x) +
                modal_single_layer_gradient(other, other_m, x))
                   .dot(nu);
  }
  return flux;
}

// Perfect-case boundary constant lambda_j, reported as the quadrature mean.
inline double boundary_constant(const SolutionField& f, int j) {
  return boundary_values(f, j).mean();
}

// Nodal density chi_j with S_j[chi_j] matching the part of h~ sourced inside
// disk j, via the modal inverse of the on-circle single-layer symbol.  The
// standard-representation oracle density is psi_series + a * chi.
inline Eigen::VectorXd h_tilde_density(const TwoDiskConfig& cfg, const BoundaryGrid& g, int j) {
  const Disk& own = (j == 1) ? cfg.disk1 : cfg.disk2;
  const Vec2& pole = (j == 1) ? cfg.p1 : cfg.p2;
  double sp = (j == 1) ? 1.0 : -1.0;  // charge at the fixed point; opposite at the center
  Eigen::VectorXd chi = Eigen::VectorXd::Zero(g.M);
  auto add_log_source = [&](const Vec2& q, double s) {
    // boundary trace of (1/2pi) log|x - q|, q strictly inside: mode m >= 1
    // coefficient of e^{-im th} is -(1/2pi)(z/r)^m/m with z = q - c; the
    // single layer sends density mode B e^{-im th} to -(r/2m) B, and the
    // constant density 1/(2pi r) to (1/2pi) log r.
    std::complex<double> z(q.x() - own.center.x(), q.y() - own.center.y());
    double r = own.radius;
    for (int k = 0; k < g.M; ++k) chi[k] += s / (two_pi * r);
    std::complex<double> zr = z / r, zp = zr;
    for (int m = 1; m <= g.M / 2; ++m) {
      std::complex<double> amp = -zp / (double(m) * two_pi);
      std::complex<double> B = -2.0 * m / r * amp;
      for (int k = 0; k < g.M; ++k)
        chi[k] += s * std::real(B * std::polar(1.0, -m * g.theta[k]));
      zp *= zr;
    }
  };
  add_log_source(pole, sp);
  add_log_source(own.center, -sp);
  return chi;
}

}  // namespace twodisk

#endif

#ifndef TWODISK_IMAGES_HPP
#define TWODISK_IMAGES_HPP

#include <vector>

#include "twodisk/solver.hpp"

namespace twodisk {

struct ConvergenceReport {
  int depth = 0;          // number of summed terms beyond m = 0
  double tail_ratio = 0;  // sup-norm ratio of the last two terms
  double last_term_sup = 0;
  bool converged = false;
};

struct SeriesResult {
  BoundaryDensity psi1, psi2;
  ConvergenceReport report;
};

namespace detail {

struct ReflectedTermSpec {
  Disk refl;          // the reflection applied inside the term
  Vec2 log1_c, log2_c;
  double log1_s, log2_s;
};

// grad of F(z) = H(z) + log1_s (a/2pi) log|z - log1_c|
//              - [H(R z) + log2_s (a/2pi) log|R z - log2_c|]
inline Vec2 grad_F(const HarmonicPolynomial& H, double a, const ReflectedTermSpec& sp,
                   const Vec2& z) {
  Vec2 g = grad_H(H, z) + sp.log1_s * (a / two_pi) * grad_log(z, sp.log1_c);
  Vec2 Rz = reflect(sp.refl, z);
  Vec2 gi = grad_H(H, Rz) + sp.log2_s * (a / two_pi) * grad_log(Rz, sp.log2_c);
  return g - reflect_jacobian(sp.refl, z).transpose() * gi;
}

}  // namespace detail

// Reference densities for the augmented perfect-conductor system by iterated
// reflections: psi_j = 2 sum_m d/dnu_j [ F_j((R_a R_b)^m x) ], the composed
// maps evaluated with exact chain-rule Jacobians (no differencing).  Adaptive
// truncation; geometric tail beyond a burn-in depth.
inline SeriesResult series_densities(const TwoDiskConfig& cfg, const HarmonicPolynomial& H,
                                     double a, double tol_rel = 1e-12, int m_max = 10000,
                                     int M = 256) {
  SeriesResult res;
  auto run = [&](int j) -> std::pair<BoundaryDensity, ConvergenceReport> {
    const Disk& own = (j == 1) ? cfg.disk1 : cfg.disk2;
    const Disk& other = (j == 1) ? cfg.disk2 : cfg.disk1;
    detail::ReflectedTermSpec sp;
    sp.refl = other;
    sp.log1_c = other.center;
    sp.log2_c = own.center;
    sp.log1_s = (j == 1) ? 1.0 : -1.0;
    sp.log2_s = (j == 1) ? -1.0 : 1.0;
    BoundaryGrid grid = make_grid(own, M);
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(M);
    std::vector<Vec2> pts(grid.nodes);
    std::vector<Mat2> J(M, Mat2::Identity());
    ConvergenceReport rep;
    double prev_sup = 0.0;
    for (int m = 0;; ++m) {
      double sup = 0.0;
      for (int k = 0; k < M; ++k) {
        double term = 2.0 * grid.normals[k].dot(J[k].transpose() *
                                                detail::grad_F(H, a, sp, pts[k]));
        psi[k] += term;
        sup = std::max(sup, std::abs(term));
      }
      if (m > 0 && prev_sup > 0) rep.tail_ratio = sup / prev_sup;
      prev_sup = sup;
      rep.depth = m;
      rep.last_term_sup = sup;
      double scale = std::max(psi.cwiseAbs().maxCoeff(), 1e-300);
      if (sup < tol_rel * scale) {
        rep.converged = true;
        break;
      }
      if (m >= m_max) break;  // truncation: reported, never silent
      for (int k = 0; k < M; ++k) {
        Vec2 q = reflect(other, pts[k]);
        Mat2 Ja = reflect_jacobian(other, pts[k]);
        Mat2 Jb = reflect_jacobian(own, q);
        pts[k] = reflect(own, q);
        J[k] = Jb * Ja * J[k];
      }
    }
    return {{grid, psi}, rep};
  };
  auto [d1, r1] = run(1);
  auto [d2, r2] = run(2);
  res.psi1 = d1;
  res.psi2 = d2;
  res.report = r1;
  res.report.converged = r1.converged && r2.converged;
  res.report.depth = std::max(r1.depth, r2.depth);
  res.report.tail_ratio = std::max(r1.tail_ratio, r2.tail_ratio);
  res.report.last_term_sup = std::max(r1.last_term_sup, r2.last_term_sup);
  return res;
}

// Normal flux of the reference solution on both boundary grids, assembled from
// the series densities exactly as the solver's boundary_flux does.
struct ReferenceFlux {
  Eigen::VectorXd flux1, flux2;
  ConvergenceReport report;
};

inline SolutionField field_from_series(const TwoDiskConfig& cfg, const HarmonicPolynomial& H,
                                       double a, const SeriesResult& sr) {
  SolutionField f;
  f.config = cfg;
  f.H = H;
  f.method = Method::augmented;
  f.conductivity = Conductivity::perfect;
  f.intensity = a;
  f.dens1 = sr.psi1;
  f.dens2 = sr.psi2;
  f.modes1 = density_modes(f.dens1);
  f.modes2 = density_modes(f.dens2);
  return f;
}

inline ReferenceFlux reference_flux(const TwoDiskConfig& cfg, const HarmonicPolynomial& H,
                                    double a, double tol_rel = 1e-12, int m_max = 10000,
                                    int M = 256) {
  SeriesResult sr = series_densities(cfg, H, a, tol_rel, m_max, M);
  SolutionField f = field_from_series(cfg, H, a, sr);
  return {boundary_flux(f, 1), boundary_flux(f, 2), sr.report};
}

// Two-boundary relative L2 error:
// ||a1-b1||/(2||b1||) + ||a2-b2||/(2||b2||), weighted discrete norms.
inline double relative_L2_error(const Eigen::VectorXd& a1, const Eigen::VectorXd& a2,
                                const Eigen::VectorXd& b1, const Eigen::VectorXd& b2,
                                double w1, double w2) {
  auto nrm = [](const Eigen::VectorXd& v, double w) { return std::sqrt(v.squaredNorm() * w); };
  double n1 = nrm(b1, w1), n2 = nrm(b2, w2);
  if (n1 == 0.0 || n2 == 0.0) throw DomainError("relative_L2_error: zero reference norm");
  return nrm(a1 - b1, w1) / (2 * n1) + nrm(a2 - b2, w2) / (2 * n2);
}

}  // namespace twodisk

#endif

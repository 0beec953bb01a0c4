#include <catch2/catch_amalgamated.hpp>

#include "twodisk/images.hpp"

using namespace twodisk;

namespace {
HarmonicPolynomial x1_poly() { return {0.0, {{1, 1.0, 0.0}}}; }
}  // namespace

TEST_CASE("far-apart disks reduce to the single-disk reflection") {
  // with the other disk 1e4 away the m = 0 term dominates: for the unit disk
  // in the background x1 the density tends to psi = 2 dH/dnu = 2 cos(th).
  // The a*log terms of the representation contribute O(1/d) = O(1e-4).
  TwoDiskConfig cfg = symmetric_config(1, 1, 1e4);
  double a = stress_intensity(cfg, x1_poly()).a_perfect;
  SeriesResult sr = series_densities(cfg, x1_poly(), a, 1e-12, 10000, 64);
  CHECK(sr.report.converged);
  for (int k = 0; k < 64; ++k) {
    double th = sr.psi1.grid.theta[k];
    CHECK(sr.psi1.values[k] == Catch::Approx(2.0 * std::cos(th)).margin(3e-4));
  }
}

TEST_CASE("mirror antisymmetry of the series densities") {
  TwoDiskConfig cfg = symmetric_config(1, 1, 0.0156);
  double a = stress_intensity(cfg, x1_poly()).a_perfect;
  SeriesResult sr = series_densities(cfg, x1_poly(), a, 1e-12, 10000, 128);
  REQUIRE(sr.report.converged);
  // node k of circle 1 mirrors to node (M/2 - k) mod M of circle 2
  for (int k = 0; k < 128; ++k) {
    int km = ((64 - k) % 128 + 128) % 128;
    CHECK(sr.psi1.values[k] == Catch::Approx(-sr.psi2.values[km]).margin(1e-10));
  }
}

TEST_CASE("series densities agree with the augmented solver") {
  TwoDiskConfig cfg = symmetric_config(1, 1, 0.0156);
  HarmonicPolynomial H{0.0, {{1, 1.0, 0.3}, {2, 0.5, 0.0}}};
  double a = stress_intensity(cfg, H).a_perfect;
  SeriesResult sr = series_densities(cfg, H, a, 1e-13, 10000, 256);
  REQUIRE(sr.report.converged);
  FieldSolution fs = solve_field(cfg, H, 256, Method::augmented, Conductivity::perfect);
  double err = relative_L2_error(fs.field.dens1.values, fs.field.dens2.values, sr.psi1.values,
                                 sr.psi2.values, sr.psi1.grid.weight, sr.psi2.grid.weight);
  CHECK(err < 1e-6);
}

TEST_CASE("tail ratio approaches 1 as the gap closes") {
  double a_prev = -1;
  HarmonicPolynomial H = x1_poly();
  std::vector<double> ratios;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    TwoDiskConfig cfg = symmetric_config(1, 1, eps);
    double a = stress_intensity(cfg, H).a_perfect;
    SeriesResult sr = series_densities(cfg, H, a, 1e-10, 10000, 64);
    REQUIRE(sr.report.converged);
    ratios.push_back(sr.report.tail_ratio);
  }
  CHECK(ratios[0] < ratios[1]);
  CHECK(ratios[1] < ratios[2]);
  CHECK(ratios[2] < 1.0);
  (void)a_prev;
}

TEST_CASE("truncation is reported, not silent") {
  TwoDiskConfig cfg = symmetric_config(1, 1, 1e-3);
  double a = stress_intensity(cfg, x1_poly()).a_perfect;
  SeriesResult sr = series_densities(cfg, x1_poly(), a, 1e-14, 2, 64);
  CHECK_FALSE(sr.report.converged);
  CHECK(sr.report.depth == 2);
  CHECK(sr.report.last_term_sup > 0);
}

TEST_CASE("reference flux: zero total flux and grid refinement") {
  TwoDiskConfig cfg = symmetric_config(1, 1, 0.0156);
  HarmonicPolynomial H = x1_poly();
  double a = stress_intensity(cfg, H).a_perfect;
  ReferenceFlux rf = reference_flux(cfg, H, a, 1e-12, 10000, 128);
  REQUIRE(rf.report.converged);
  // the density is gap-concentrated: M = 128 leaves O(1e-6) mode truncation
  double w = two_pi / 128;
  CHECK(std::abs(rf.flux1.sum() * w) < 1e-5);
  CHECK(std::abs(rf.flux2.sum() * w) < 1e-5);
  ReferenceFlux rf2 = reference_flux(cfg, H, a, 1e-12, 10000, 256);
  double w2 = two_pi / 256;
  CHECK(std::abs(rf2.flux1.sum() * w2) < 1e-8);
  CHECK(std::abs(rf2.flux2.sum() * w2) < 1e-8);
  // value at th = 0 (node 0) is stable under M doubling
  CHECK(rf.flux1[0] == Catch::Approx(rf2.flux1[0]).margin(1e-8));
}

TEST_CASE("relative_L2_error") {
  Eigen::VectorXd b1 = Eigen::VectorXd::Ones(8), b2 = 2 * Eigen::VectorXd::Ones(8);
  CHECK(relative_L2_error(b1, b2, b1, b2, 0.1, 0.1) == 0.0);
  CHECK(relative_L2_error(2 * b1, 4 * b2, b1, b2, 0.1, 0.1) ==
        Catch::Approx(0.5 + 1.5).epsilon(1e-14));
  CHECK_THROWS_AS(relative_L2_error(b1, b2, Eigen::VectorXd::Zero(8), b2, 0.1, 0.1), DomainError);
}

#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "twodisk/layer.hpp"

using namespace twodisk;

namespace {
BoundaryDensity const_density(const Disk& d, int M, double v) {
  return {make_grid(d, M), Eigen::VectorXd::Constant(M, v)};
}
BoundaryDensity cos_density(const Disk& d, int M) {
  BoundaryGrid g = make_grid(d, M);
  Eigen::VectorXd v(M);
  for (int k = 0; k < M; ++k) v[k] = std::cos(g.theta[k]);
  return {g, v};
}
}  // namespace

TEST_CASE("grid invariants") {
  Disk d{Vec2(0.3, -0.2), 1.7};
  BoundaryGrid g = make_grid(d, 64);
  double wsum = 0;
  for (int k = 0; k < g.M; ++k) {
    CHECK(std::abs((g.nodes[k] - d.center).norm() - d.radius) < 1e-14 * d.radius);
    CHECK(std::abs(g.normals[k].norm() - 1.0) < 1e-15);
    wsum += g.weight;
  }
  CHECK(wsum == Catch::Approx(two_pi * d.radius).epsilon(1e-13));
  CHECK_THROWS_AS(make_grid(d, 7), ConfigError);
  CHECK_THROWS_AS(make_grid(d, 4), ConfigError);
}

TEST_CASE("single layer of the constant density") {
  Disk unit{Vec2(0, 0), 1.0};
  BoundaryDensity one = const_density(unit, 128, 1.0);
  // S[1](x) = r log|x| outside, r log r inside
  CHECK(eval_single_layer(one, Vec2(2, 0)) == Catch::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(std::abs(eval_single_layer(one, Vec2(0, 0))) < 1e-12);
  CHECK((eval_single_layer_gradient(one, Vec2(2, 0)) - Vec2(0.5, 0)).norm() < 1e-12);
}

TEST_CASE("mean-zero density decays like a dipole") {
  Disk unit{Vec2(0, 0), 1.0};
  BoundaryDensity c = cos_density(unit, 128);
  double v1 = eval_single_layer(c, Vec2(10, 0));
  double v2 = eval_single_layer(c, Vec2(20, 0));
  CHECK(v2 / v1 == Catch::Approx(0.5).epsilon(1e-3));
  double g1 = eval_single_layer_gradient(c, Vec2(10, 0)).norm();
  double g2 = eval_single_layer_gradient(c, Vec2(20, 0)).norm();
  CHECK(g2 / g1 == Catch::Approx(0.25).epsilon(1e-2));
}

TEST_CASE("single-layer gradient matches finite differences") {
  Disk d{Vec2(0.5, 0.1), 1.2};
  BoundaryDensity c = cos_density(d, 128);
  Vec2 x(2.7, 1.1);
  double h = 1e-5;
  Vec2 fd((eval_single_layer(c, x + Vec2(h, 0)) - eval_single_layer(c, x - Vec2(h, 0))) / (2 * h),
          (eval_single_layer(c, x + Vec2(0, h)) - eval_single_layer(c, x - Vec2(0, h))) / (2 * h));
  CHECK((eval_single_layer_gradient(c, x) - fd).norm() < 1e-6);
}

TEST_CASE("double layer of the constant density jumps across the circle") {
  Disk d{Vec2(0.2, 0.8), 1.1};
  BoundaryDensity one = const_density(d, 128, 1.0);
  CHECK(eval_double_layer(one, d.center) == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(eval_double_layer(one, d.center + Vec2(3, 0))) < 1e-12);
  // linearity
  BoundaryDensity c = cos_density(d, 128);
  Vec2 x = d.center + Vec2(2.2, -0.7);
  BoundaryDensity mix{c.grid, 2.0 * c.values + Eigen::VectorXd::Constant(128, 3.0)};
  CHECK(eval_double_layer(mix, x) ==
        Catch::Approx(2 * eval_double_layer(c, x) + 3 * eval_double_layer(one, x) / 1.0)
            .margin(1e-13));
}

TEST_CASE("near-boundary evaluation is refused") {
  Disk unit{Vec2(0, 0), 1.0};
  BoundaryDensity one = const_density(unit, 64, 1.0);
  double margin = 2.0 * two_pi / 64;
  CHECK_THROWS_AS(eval_single_layer(one, Vec2(1.0 + margin / 2, 0)), AccuracyError);
  CHECK_THROWS_AS(eval_single_layer_gradient(one, Vec2(1.0 - margin / 2, 0)), AccuracyError);
  CHECK_NOTHROW(eval_single_layer(one, Vec2(1.0 + 2 * margin, 0)));
}

TEST_CASE("trapezoid rule converges spectrally for well-separated targets") {
  Disk d{Vec2(0, 0), 1.0};
  Vec2 x(1.8, 0.4);
  auto value = [&](int M) {
    BoundaryGrid g = make_grid(d, M);
    Eigen::VectorXd v(M);
    for (int k = 0; k < M; ++k) v[k] = std::exp(std::sin(g.theta[k]));
    return eval_single_layer({g, v}, x);
  };
  double ref = value(512);
  double e32 = std::abs(value(32) - ref);
  double e64 = std::abs(value(64) - ref);
  CHECK((e64 < 1e-4 * e32 || e64 < 1e-12));
}

TEST_CASE("cross kernel block") {
  // well separated, so the trapezoid rule is converged at M = 64
  Disk d1{Vec2(-2, 0), 1.0}, d2{Vec2(2, 0), 1.0};
  BoundaryGrid g1 = make_grid(d1, 64), g2 = make_grid(d2, 64);
  Eigen::MatrixXd B = cross_kernel_block(g1, g2);
  // applied to the constant density: normal derivative of r log|x - c2|
  Eigen::VectorXd got = B * Eigen::VectorXd::Ones(64);
  for (int k = 0; k < 64; ++k) {
    Vec2 diff = g1.nodes[k] - d2.center;
    double expect = d2.radius * diff.dot(g1.normals[k]) / diff.squaredNorm();
    CHECK(got[k] == Catch::Approx(expect).margin(1e-11));
  }
  // the largest entry sits at the facing nodes and scales like 1/eps
  auto max_entry = [&](double eps) {
    Disk a{Vec2(-1 - eps / 2, 0), 1.0}, b{Vec2(1 + eps / 2, 0), 1.0};
    return cross_kernel_block(make_grid(a, 64), make_grid(b, 64)).cwiseAbs().maxCoeff();
  };
  double ratio = max_entry(0.001) / max_entry(0.01);
  CHECK(ratio > 5);
  CHECK(ratio < 20);
  CHECK_THROWS_AS(cross_kernel_block(g1, g1), DomainError);
}

TEST_CASE("mirror symmetry of the cross blocks") {
  Disk d1{Vec2(-1.1, 0), 1.0}, d2{Vec2(1.1, 0), 1.0};
  BoundaryGrid g1 = make_grid(d1, 32), g2 = make_grid(d2, 32);
  Eigen::MatrixXd B12 = cross_kernel_block(g1, g2), B21 = cross_kernel_block(g2, g1);
  // node k of circle 1 mirrors to node (M/2 - k) mod M of circle 2
  auto mir = [](int k) { return ((16 - k) % 32 + 32) % 32; };
  for (int k = 0; k < 32; ++k)
    for (int l = 0; l < 32; ++l)
      CHECK(B12(k, l) == Catch::Approx(B21(mir(k), mir(l))).margin(1e-13));
}

TEST_CASE("own-boundary jump relation") {
  Disk d{Vec2(0.4, -0.3), 1.3};
  std::mt19937 rng(7);
  BoundaryGrid g = make_grid(d, 64);
  Eigen::VectorXd v(64);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int k = 0; k < 64; ++k) v[k] = U(rng);
  BoundaryDensity den{g, v};
  Eigen::VectorXd ext = own_boundary_flux(den, Side::exterior);
  Eigen::VectorXd intr = own_boundary_flux(den, Side::interior);
  CHECK((ext - intr - v).cwiseAbs().maxCoeff() < 1e-12);
  // mean-zero density: exterior flux is exactly phi/2
  Eigen::VectorXd v0 = v.array() - v.mean();
  Eigen::VectorXd ext0 = own_boundary_flux({g, v0}, Side::exterior);
  CHECK((ext0 - v0 / 2).cwiseAbs().maxCoeff() < 1e-13);
  // constant density: exterior flux 1, interior 0
  BoundaryDensity one{g, Eigen::VectorXd::Ones(64)};
  CHECK((own_boundary_flux(one, Side::exterior).array() - 1.0).abs().maxCoeff() < 1e-13);
  CHECK(own_boundary_flux(one, Side::interior).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("total flux through an enclosing circle equals the total charge") {
  Disk d{Vec2(0.2, 0.1), 1.0};
  BoundaryGrid g = make_grid(d, 128);
  Eigen::VectorXd v(128);
  for (int k = 0; k < 128; ++k) v[k] = 1.0 + 0.5 * std::cos(2 * g.theta[k]);
  BoundaryDensity den{g, v};
  double R = 5.0;
  int N = 512;
  double flux = 0;
  for (int k = 0; k < N; ++k) {
    double th = two_pi * k / N;
    Vec2 nu(std::cos(th), std::sin(th));
    flux += eval_single_layer_gradient(den, d.center + R * nu).dot(nu) * (two_pi * R / N);
  }
  CHECK(flux == Catch::Approx(v.sum() * g.weight).epsilon(1e-10));
}

TEST_CASE("modal evaluation agrees with quadrature away from the circle") {
  Disk d{Vec2(0.3, 0.2), 1.4};
  BoundaryGrid g = make_grid(d, 64);
  Eigen::VectorXd v(64);
  for (int k = 0; k < 64; ++k)
    v[k] = 0.7 + std::sin(g.theta[k]) - 0.4 * std::cos(3 * g.theta[k]);
  BoundaryDensity den{g, v};
  FourierModes fm = density_modes(den);
  for (Vec2 x : {Vec2(3.0, 0.5), Vec2(-1.8, 2.2), Vec2(0.3, -3.9)}) {
    CHECK(modal_single_layer(den, fm, x) == Catch::Approx(eval_single_layer(den, x)).margin(1e-11));
    CHECK((modal_single_layer_gradient(den, fm, x) - eval_single_layer_gradient(den, x)).norm() <
          1e-10);
  }
  // on-circle value of the pure cosine mode: S[cos] = -(r/2) cos on the circle
  BoundaryGrid gu = make_grid(Disk{Vec2(0, 0), 1.0}, 64);
  Eigen::VectorXd c(64);
  for (int k = 0; k < 64; ++k) c[k] = std::cos(gu.theta[k]);
  BoundaryDensity dc{gu, c};
  FourierModes fmc = density_modes(dc);
  CHECK(modal_single_layer(dc, fmc, Vec2(1, 0)) == Catch::Approx(-0.5).margin(1e-12));
  CHECK(modal_single_layer(dc, fmc, Vec2(0, 1)) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("spectral cross block equals the Nystrom block for resolved geometry") {
  Disk d1{Vec2(-1.5, 0), 1.0}, d2{Vec2(1.5, 0), 1.0};
  BoundaryGrid g1 = make_grid(d1, 64), g2 = make_grid(d2, 64);
  Eigen::MatrixXd Bq = cross_kernel_block(g1, g2);
  Eigen::MatrixXd Bs = spectral_cross_block(g1, g2);
  CHECK((Bq - Bs).cwiseAbs().maxCoeff() < 1e-10);
  // and it is the converged limit: against a heavily refined trapezoid rule
  Eigen::VectorXd dens(64);
  for (int k = 0; k < 64; ++k) dens[k] = std::cos(g2.theta[k]) + 0.3 * std::sin(2 * g2.theta[k]);
  Disk near1{Vec2(-1.01, 0), 1.0}, near2{Vec2(1.01, 0), 1.0};
  BoundaryGrid n1 = make_grid(near1, 64), n2 = make_grid(near2, 64);
  Eigen::VectorXd got = spectral_cross_block(n1, n2) * dens;
  // refined source: same trig interpolant sampled at 32x nodes
  BoundaryGrid fine = make_grid(near2, 2048);
  Eigen::VectorXd densf(2048);
  for (int k = 0; k < 2048; ++k)
    densf[k] = std::cos(fine.theta[k]) + 0.3 * std::sin(2 * fine.theta[k]);
  Eigen::VectorXd ref = cross_kernel_block(n1, fine) * densf;
  CHECK((got - ref).cwiseAbs().maxCoeff() < 1e-9);
}

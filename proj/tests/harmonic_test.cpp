#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "twodisk/harmonic.hpp"

using namespace twodisk;

namespace {
HarmonicPolynomial x1_poly() { return {0.0, {{1, 1.0, 0.0}}}; }
HarmonicPolynomial x2_poly() { return {0.0, {{1, 0.0, 1.0}}}; }
}  // namespace

TEST_CASE("eval_H basics") {
  CHECK(eval_H(x1_poly(), Vec2(3, 4)) == 3.0);
  HarmonicPolynomial rez2{0.0, {{2, 1.0, 0.0}}};
  CHECK(eval_H(rez2, Vec2(1, 2)) == Catch::Approx(-3.0));
  HarmonicPolynomial mixed{0.0, {{1, 2.0, 0.0}, {2, 1.0, 0.0}}};
  CHECK(eval_H(mixed, Vec2(0, 0)) == 0.0);
}

TEST_CASE("grad_H is the exact gradient and the terms are harmonic") {
  CHECK((grad_H(x1_poly(), Vec2(5, -2)) - Vec2(1, 0)).norm() == 0.0);
  HarmonicPolynomial rez2{0.0, {{2, 1.0, 0.0}}};
  CHECK((grad_H(rez2, Vec2(1, 2)) - Vec2(2, -4)).norm() < 1e-14);

  HarmonicPolynomial H{0.3, {{1, 0.2, -1.1}, {2, 0.7, 0.4}, {3, -0.6, 0.9}}};
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> U(-2, 2);
  for (int i = 0; i < 50; ++i) {
    Vec2 x(U(rng), U(rng));
    double h = 1e-5;
    Vec2 fd((eval_H(H, x + Vec2(h, 0)) - eval_H(H, x - Vec2(h, 0))) / (2 * h),
            (eval_H(H, x + Vec2(0, h)) - eval_H(H, x - Vec2(0, h))) / (2 * h));
    CHECK((grad_H(H, x) - fd).norm() < 1e-7);
    // 5-point Laplacian vanishes
    double lap = (eval_H(H, x + Vec2(h, 0)) + eval_H(H, x - Vec2(h, 0)) +
                  eval_H(H, x + Vec2(0, h)) + eval_H(H, x - Vec2(0, h)) - 4 * eval_H(H, x)) /
                 (h * h);
    CHECK(std::abs(lap) < 1e-4 * (1 + std::abs(eval_H(H, x))));
  }
}

TEST_CASE("conjugate_H pairing and Cauchy-Riemann") {
  HarmonicPolynomial c1 = conjugate_H(x1_poly());
  REQUIRE(c1.terms.size() == 1);
  CHECK(c1.terms[0].re_coef == 0.0);
  CHECK(c1.terms[0].im_coef == 1.0);
  HarmonicPolynomial c2 = conjugate_H(x2_poly());
  CHECK(c2.terms[0].re_coef == -1.0);
  CHECK(c2.terms[0].im_coef == 0.0);

  HarmonicPolynomial H{0.0, {{1, 0.5, -0.3}, {2, 1.2, 0.8}, {3, -0.4, 0.0}}};
  HarmonicPolynomial Ht = conjugate_H(H);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-2, 2);
  for (int i = 0; i < 100; ++i) {
    Vec2 x(U(rng), U(rng));
    Vec2 g = grad_H(H, x), gt = grad_H(Ht, x);
    CHECK(std::abs(gt.x() + g.y()) < 1e-12 * (1 + g.norm()));
    CHECK(std::abs(gt.y() - g.x()) < 1e-12 * (1 + g.norm()));
  }
}

TEST_CASE("frame identity for the conjugate") {
  // The Cauchy-Riemann pairing above rotates gradients by +90 degrees, so for
  // any positively oriented frame (n, t): n . grad(conj H) = - t . grad H.
  HarmonicPolynomial H{0.0, {{1, 0.9, 0.2}, {2, -0.5, 1.1}}};
  HarmonicPolynomial Ht = conjugate_H(H);
  Vec2 p(0.37, -0.81);
  double ang = 1.21;
  Vec2 n(std::cos(ang), std::sin(ang));
  Vec2 t = perp(n);
  CHECK(n.dot(grad_H(Ht, p)) == Catch::Approx(-t.dot(grad_H(H, p))).margin(1e-13));
}

TEST_CASE("conjugation twice negates the non-constant part") {
  HarmonicPolynomial H{2.5, {{1, 0.5, -0.3}, {3, 1.2, 0.8}}};
  HarmonicPolynomial HH = conjugate_H(conjugate_H(H));
  REQUIRE(HH.terms.size() == H.terms.size());
  CHECK(HH.constant == 0.0);
  for (size_t i = 0; i < H.terms.size(); ++i) {
    CHECK(HH.terms[i].re_coef == -H.terms[i].re_coef);
    CHECK(HH.terms[i].im_coef == -H.terms[i].im_coef);
  }
}

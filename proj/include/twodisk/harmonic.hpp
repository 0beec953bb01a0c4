#ifndef TWODISK_HARMONIC_HPP
#define TWODISK_HARMONIC_HPP

#include <complex>
#include <vector>

#include "twodisk/geometry.hpp"

namespace twodisk {

// One basis term c_re*Re(z^k) + c_im*Im(z^k), z = x1 + i*x2.
struct HarmonicTerm {
  int degree;      // k >= 1
  double re_coef;
  double im_coef;
};

struct HarmonicPolynomial {
  double constant = 0.0;
  std::vector<HarmonicTerm> terms;
};

inline double eval_H(const HarmonicPolynomial& H, const Vec2& x) {
  std::complex<double> z(x.x(), x.y());
  double v = H.constant;
  for (const auto& t : H.terms) {
    std::complex<double> zk = std::pow(z, t.degree);
    v += t.re_coef * zk.real() + t.im_coef * zk.imag();
  }
  return v;
}

inline Vec2 grad_H(const HarmonicPolynomial& H, const Vec2& x) {
  // d(Re z^k) = k (Re z^{k-1}, -Im z^{k-1}), d(Im z^k) = k (Im z^{k-1}, Re z^{k-1})
  std::complex<double> z(x.x(), x.y());
  Vec2 g = Vec2::Zero();
  for (const auto& t : H.terms) {
    std::complex<double> zp = std::pow(z, t.degree - 1);
    double k = t.degree;
    g.x() += k * (t.re_coef * zp.real() + t.im_coef * zp.imag());
    g.y() += k * (-t.re_coef * zp.imag() + t.im_coef * zp.real());
  }
  return g;
}

// Harmonic conjugate pairing Re z^k -> Im z^k, Im z^k -> -Re z^k (constant drops),
// so that dH~/dx1 = -dH/dx2 and dH~/dx2 = dH/dx1.
inline HarmonicPolynomial conjugate_H(const HarmonicPolynomial& H) {
  HarmonicPolynomial out;
  for (const auto& t : H.terms)
    out.terms.push_back({t.degree, -t.im_coef, t.re_coef});
  return out;
}

}  // namespace twodisk

#endif

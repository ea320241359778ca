#include "dle/kernels.hpp"

#include <cmath>

namespace dle::kernels::scalar {

// Principal complex square root for arguments in the closed upper half-plane
// (y >= 0, with -0.0 normalized by the caller). The result lies in the closed
// first quadrant, which is exactly the branch that keeps slit-map images in
// the closed upper half-plane. Stable two-case form: the small component is
// recovered by division instead of cancellation-prone subtraction.
Complex csqrt_uhp(double x, double y) {
  const double m = std::sqrt(x * x + y * y);
  if (m == 0.0) return {0.0, 0.0};
  const double t = std::sqrt(0.5 * (m + std::fabs(x)));
  const double other = y / (2.0 * t);
  if (x >= 0.0) return {t, other};
  return {other, t};
}

Complex slit_point(double a, double c, Complex z) {
  const double zr = z.real() - a;
  const double zi = z.imag() + 0.0;  // -0.0 -> +0.0
  const Complex s1 = csqrt_uhp(zr - c, zi);
  const Complex s2 = csqrt_uhp(zr + c, zi);
  return {s1.real() * s2.real() - s1.imag() * s2.imag() + a,
          s1.real() * s2.imag() + s1.imag() * s2.real()};
}

void slit_apply(double a, double c, double* re, double* im, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    const Complex w = slit_point(a, c, Complex{re[i], im[i]});
    re[i] = w.real();
    im[i] = w.imag();
  }
}

void bessel_step(const double* x, double q, double* y, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    const double d = y[i] - x[i];
    y[i] = std::sqrt(d * d + q);
  }
}

void bessel_drift(double y0, const double* x, double q, double* out, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    const double d = y0 - x[i];
    out[i] = std::sqrt(d * d + q) - y0;
  }
}

Complex cauchy_sum(const double* xs, const double* ws, std::size_t count,
                   double zre, double zim) {
  double accr = 0.0, acci = 0.0;
  const double zi2 = zim * zim;
  for (std::size_t k = 0; k < count; ++k) {
    const double dr = zre - xs[k];
    const double inv = ws[k] / (dr * dr + zi2);
    accr += dr * inv;
    acci -= zim * inv;
  }
  return {accr, acci};
}

}  // namespace dle::kernels::scalar

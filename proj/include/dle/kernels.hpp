#pragma once

// Batch arithmetic kernels behind the half-plane maps, the Bessel-type chain
// and the Cauchy transform. Scalar reference implementations live in
// kernels::scalar; an AVX2 variant is selected at runtime when the CPU
// supports it (override with DLE_SIMD=scalar|avx2).
//
// Contract shared by all backends:
//   * complex data is SoA (separate re[]/im[] arrays),
//   * inputs tagged "closed upper half-plane" assume im >= 0; a -0.0
//     imaginary part is treated as +0.0,
//   * slit_apply and bessel_step are element-wise and must produce results
//     bit-identical to the scalar reference (all operations are IEEE
//     correctly rounded and performed in the same order),
//   * cauchy_sum is a reduction; backends may reassociate, so results agree
//     only up to roundoff.

#include <complex>
#include <cstddef>

namespace dle::kernels {

using Complex = std::complex<double>;

// w_i = a + sqrt(z_i - a - c) * sqrt(z_i - a + c), principal square roots.
// For c = 2/sqrt(n) this is the slit map of half-width c centered at a.
using SlitApplyFn = void (*)(double a, double c, double* re, double* im, std::size_t count);

// y_i = sqrt((y_i - x_i)^2 + q)
using BesselStepFn = void (*)(const double* x, double q, double* y, std::size_t count);

// delta_i = sqrt((y0 - x_i)^2 + q) - y0, written to out
using BesselDriftFn = void (*)(double y0, const double* x, double q, double* out, std::size_t count);

// sum_k w_k / (z - x_k) for a single z = zre + i*zim
using CauchySumFn = Complex (*)(const double* xs, const double* ws, std::size_t count,
                                double zre, double zim);

namespace scalar {
Complex slit_point(double a, double c, Complex z);
Complex csqrt_uhp(double x, double y);  // principal sqrt, y >= 0
void slit_apply(double a, double c, double* re, double* im, std::size_t count);
void bessel_step(const double* x, double q, double* y, std::size_t count);
void bessel_drift(double y0, const double* x, double q, double* out, std::size_t count);
Complex cauchy_sum(const double* xs, const double* ws, std::size_t count, double zre, double zim);
}  // namespace scalar

namespace avx2 {
bool compiled();   // true when this build carries the AVX2 translation unit
bool supported();  // compiled() && CPU reports AVX2
void slit_apply(double a, double c, double* re, double* im, std::size_t count);
void bessel_step(const double* x, double q, double* y, std::size_t count);
void bessel_drift(double y0, const double* x, double q, double* out, std::size_t count);
Complex cauchy_sum(const double* xs, const double* ws, std::size_t count, double zre, double zim);
}  // namespace avx2

// Runtime-dispatched entry points (resolved once, thread-safe).
extern const SlitApplyFn slit_apply;
extern const BesselStepFn bessel_step;
extern const BesselDriftFn bessel_drift;
extern const CauchySumFn cauchy_sum;

const char* active_backend();  // "avx2" or "scalar"

}  // namespace dle::kernels

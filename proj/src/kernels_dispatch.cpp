#include "dle/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace dle::kernels {

#if !defined(DLE_HAVE_AVX2)
namespace avx2 {
bool compiled() { return false; }
bool supported() { return false; }
void slit_apply(double a, double c, double* re, double* im, std::size_t n) {
  scalar::slit_apply(a, c, re, im, n);
}
void bessel_step(const double* x, double q, double* y, std::size_t n) {
  scalar::bessel_step(x, q, y, n);
}
void bessel_drift(double y0, const double* x, double q, double* out, std::size_t n) {
  scalar::bessel_drift(y0, x, q, out, n);
}
Complex cauchy_sum(const double* xs, const double* ws, std::size_t n, double zr, double zi) {
  return scalar::cauchy_sum(xs, ws, n, zr, zi);
}
}  // namespace avx2
#endif

namespace {

bool use_avx2() {
  if (const char* env = std::getenv("DLE_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return false;
    if (std::strcmp(env, "avx2") == 0) return avx2::supported();
  }
  return avx2::supported();
}

const bool kUseAvx2 = use_avx2();

}  // namespace

const SlitApplyFn slit_apply = kUseAvx2 ? &avx2::slit_apply : &scalar::slit_apply;
const BesselStepFn bessel_step = kUseAvx2 ? &avx2::bessel_step : &scalar::bessel_step;
const BesselDriftFn bessel_drift = kUseAvx2 ? &avx2::bessel_drift : &scalar::bessel_drift;
const CauchySumFn cauchy_sum = kUseAvx2 ? &avx2::cauchy_sum : &scalar::cauchy_sum;

const char* active_backend() { return kUseAvx2 ? "avx2" : "scalar"; }

}  // namespace dle::kernels

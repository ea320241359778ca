// AVX2 kernel variants. Compiled with -mavx2 (no FMA: contraction would break
// bit-equivalence with the scalar reference). Every arithmetic step mirrors
// kernels_scalar.cpp in the same order; _mm256_{add,sub,mul,div,sqrt}_pd are
// all IEEE correctly rounded, so slit_apply/bessel_step/bessel_drift results
// are bit-identical to scalar. cauchy_sum uses four running partial sums and
// is only roundoff-equivalent.

#include "dle/kernels.hpp"

#include <immintrin.h>

namespace dle::kernels::avx2 {

bool compiled() { return true; }

bool supported() {
#if defined(__GNUC__) || defined(__clang__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

namespace {

const __m256d kZero = _mm256_set1_pd(0.0);
const __m256d kHalf = _mm256_set1_pd(0.5);
const __m256d kTwo = _mm256_set1_pd(2.0);
const __m256d kAbsMask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

struct Vc {
  __m256d re, im;
};

// Principal sqrt on the closed upper half-plane, 4 lanes. Same formula and
// operation order as scalar::csqrt_uhp.
inline Vc csqrt_uhp4(__m256d x, __m256d y) {
  const __m256d m = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(x, x), _mm256_mul_pd(y, y)));
  const __m256d absx = _mm256_and_pd(x, kAbsMask);
  const __m256d t = _mm256_sqrt_pd(_mm256_mul_pd(kHalf, _mm256_add_pd(m, absx)));
  const __m256d other = _mm256_div_pd(y, _mm256_mul_pd(kTwo, t));
  const __m256d xpos = _mm256_cmp_pd(x, kZero, _CMP_GE_OQ);
  __m256d re = _mm256_blendv_pd(other, t, xpos);
  __m256d im = _mm256_blendv_pd(t, other, xpos);
  const __m256d mzero = _mm256_cmp_pd(m, kZero, _CMP_EQ_OQ);
  re = _mm256_andnot_pd(mzero, re);
  im = _mm256_andnot_pd(mzero, im);
  return {re, im};
}

}  // namespace

void slit_apply(double a, double c, double* re, double* im, std::size_t count) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d zr = _mm256_sub_pd(_mm256_loadu_pd(re + i), va);
    const __m256d zi = _mm256_add_pd(_mm256_loadu_pd(im + i), kZero);
    const Vc s1 = csqrt_uhp4(_mm256_sub_pd(zr, vc), zi);
    const Vc s2 = csqrt_uhp4(_mm256_add_pd(zr, vc), zi);
    const __m256d wr = _mm256_add_pd(
        _mm256_sub_pd(_mm256_mul_pd(s1.re, s2.re), _mm256_mul_pd(s1.im, s2.im)), va);
    const __m256d wi =
        _mm256_add_pd(_mm256_mul_pd(s1.re, s2.im), _mm256_mul_pd(s1.im, s2.re));
    _mm256_storeu_pd(re + i, wr);
    _mm256_storeu_pd(im + i, wi);
  }
  if (i < count) scalar::slit_apply(a, c, re + i, im + i, count - i);
}

void bessel_step(const double* x, double q, double* y, std::size_t count) {
  const __m256d vq = _mm256_set1_pd(q);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(d, d), vq)));
  }
  if (i < count) scalar::bessel_step(x + i, q, y + i, count - i);
}

void bessel_drift(double y0, const double* x, double q, double* out, std::size_t count) {
  const __m256d vq = _mm256_set1_pd(q);
  const __m256d vy = _mm256_set1_pd(y0);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d d = _mm256_sub_pd(vy, _mm256_loadu_pd(x + i));
    const __m256d s = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(d, d), vq));
    _mm256_storeu_pd(out + i, _mm256_sub_pd(s, vy));
  }
  if (i < count) scalar::bessel_drift(y0, x + i, q, out + i, count - i);
}

Complex cauchy_sum(const double* xs, const double* ws, std::size_t count,
                   double zre, double zim) {
  const __m256d vzr = _mm256_set1_pd(zre);
  const __m256d vzi2 = _mm256_set1_pd(zim * zim);
  __m256d accr = kZero, acci = kZero;
  std::size_t k = 0;
  for (; k + 4 <= count; k += 4) {
    const __m256d dr = _mm256_sub_pd(vzr, _mm256_loadu_pd(xs + k));
    const __m256d inv = _mm256_div_pd(
        _mm256_loadu_pd(ws + k), _mm256_add_pd(_mm256_mul_pd(dr, dr), vzi2));
    accr = _mm256_add_pd(accr, _mm256_mul_pd(dr, inv));
    acci = _mm256_add_pd(acci, inv);
  }
  alignas(32) double lr[4], li[4];
  _mm256_store_pd(lr, accr);
  _mm256_store_pd(li, acci);
  double sr = (lr[0] + lr[1]) + (lr[2] + lr[3]);
  double si = (li[0] + li[1]) + (li[2] + li[3]);
  const Complex tail = scalar::cauchy_sum(xs + k, ws + k, count - k, zre, zim);
  return {sr + tail.real(), -zim * si + tail.imag()};
}

}  // namespace dle::kernels::avx2

#include "dle/halfplane_maps.hpp"

#include <cassert>
#include <cmath>

#include "dle/kernels.hpp"

namespace dle {

double SlitParams::half_width() const { return 2.0 / std::sqrt(static_cast<double>(n)); }
double SlitChain::half_width() const { return 2.0 / std::sqrt(static_cast<double>(n)); }

Complex eval_slit(const SlitParams& p, Complex z) {
  return kernels::scalar::slit_point(p.a, p.half_width(), z);
}

Complex eval_slit_inverse(const SlitParams& p, Complex w) {
  const double c = p.half_width();
  const Complex u{w.real() - p.a, w.imag() - c};
  const Complex v{w.real() - p.a, w.imag() + c};
  // sqrt with branch cut along the negative imaginary axis (the slit pulled
  // to the origin): principal everywhere except the open third quadrant.
  Complex su = std::sqrt(u);
  if (u.real() < 0.0 && std::signbit(u.imag())) su = -su;
  const Complex sv = std::sqrt(v);
  return su * sv + p.a;
}

Complex eval_chain_prefix(const SlitChain& c, std::size_t m, Complex z) {
  assert(m <= c.steps());
  const double hw = c.half_width();
  Complex w{z.real(), z.imag() + 0.0};
  for (std::size_t k = m; k-- > 0;) {
    w = kernels::scalar::slit_point(c.drivers[k], hw, w);
  }
  return w;
}

Complex eval_chain(const SlitChain& c, Complex z) {
  return eval_chain_prefix(c, c.steps(), z);
}

void eval_chain_prefix_batch(const SlitChain& c, std::size_t m, std::span<double> re,
                             std::span<double> im) {
  assert(m <= c.steps() && re.size() == im.size());
  const double hw = c.half_width();
  for (std::size_t k = m; k-- > 0;) {
    kernels::slit_apply(c.drivers[k], hw, re.data(), im.data(), re.size());
  }
}

void eval_chain_batch(const SlitChain& c, std::span<double> re, std::span<double> im) {
  eval_chain_prefix_batch(c, c.steps(), re, im);
}

Complex eval_chain_real(const SlitChain& c, std::size_t m, double x) {
  return eval_chain_prefix(c, m, Complex{x, 0.0});
}

TracedBoundaryPoint eval_chain_real_traced(const SlitChain& c, std::size_t m, double x) {
  assert(m <= c.steps());
  const double hw = c.half_width();
  TracedBoundaryPoint out;
  Complex w{x, 0.0};
  for (std::size_t k = m; k-- > 0;) {
    const bool was_real = (w.imag() == 0.0);
    w = kernels::scalar::slit_point(c.drivers[k], hw, w);
    if (was_real && w.imag() > 0.0) out.absorbed_at = static_cast<std::ptrdiff_t>(k);
  }
  out.value = w;
  return out;
}

RealInterval chain_base_interval(const SlitChain& c, std::size_t m) {
  assert(m <= c.steps());
  if (m == 0) return {0.0, 0.0};
  const double hw = c.half_width();
  const double cc = hw * hw;
  RealInterval iv{c.drivers[m - 1] - hw, c.drivers[m - 1] + hw};
  // Walk outward: the step-j chain is (step-(j+1) chain) composed after the
  // slit at drivers[j], so its base is that slit's base joined with the slit
  // map's preimage of the previous base interval.
  for (std::size_t j = m - 1; j-- > 0;) {
    const double a = c.drivers[j];
    const double ulo = iv.lo - a;
    const double uhi = iv.hi - a;
    const double pre_lo = a + std::copysign(std::sqrt(ulo * ulo + cc), ulo);
    const double pre_hi = a + std::copysign(std::sqrt(uhi * uhi + cc), uhi);
    iv.lo = std::min(a - hw, std::min(pre_lo, pre_hi));
    iv.hi = std::max(a + hw, std::max(pre_lo, pre_hi));
  }
  return iv;
}

std::vector<Complex> boundary_trace(const SlitChain& c, std::size_t branch,
                                    std::size_t samples) {
  assert(branch >= 1 && branch <= c.steps() && samples >= 2);
  const double a = c.drivers[branch - 1];
  const double hw = c.half_width();
  std::vector<Complex> pts;
  pts.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double tau = static_cast<double>(i) / static_cast<double>(samples - 1);
    pts.push_back(eval_chain_prefix(c, branch - 1, Complex{a, hw * tau}));
  }
  return pts;
}

}  // namespace dle

#pragma once

// Elementary slit maps of the upper half-plane, their inverses, and chains of
// such maps composed along a sequence of driver positions. All maps extend
// continuously to the closed half-plane; boundary points are accepted
// everywhere (slit tips and base endpoints included).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dle {

using Complex = std::complex<double>;

struct RealInterval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

// Slit of half-width 2/sqrt(n) based at the real point a.
struct SlitParams {
  double a = 0.0;
  long n = 1;
  double half_width() const;
};

// Maps H onto H minus the vertical segment {Re = a, 0 <= Im <= 2/sqrt(n)}.
// The square root is evaluated as the product of two principal square roots,
// sqrt(z-a-c)*sqrt(z-a+c) with c = 2/sqrt(n); both factors stay in the closed
// upper half-plane, which realizes the H -> H branch continuously up to the
// boundary with no case analysis.
Complex eval_slit(const SlitParams& p, Complex z);

// Inverse map, a + sqrt((w-a)^2 + 4/n) with the branch continuous on the
// closed half-plane minus the slit; points on the slit are accepted and pull
// back to the right-hand side of the base interval.
Complex eval_slit_inverse(const SlitParams& p, Complex w);

// State of a discrete evolution at scale n: drivers[k] holds the walk value
// S_n(k/n); step m composes m slit maps, newest innermost.
struct SlitChain {
  long n = 1;
  std::vector<double> drivers;
  std::size_t steps() const { return drivers.size(); }
  double half_width() const;
};

// D(m; z) = r(drivers[0]; r(drivers[1]; ... r(drivers[m-1]; z) ...))
Complex eval_chain(const SlitChain& c, Complex z);
Complex eval_chain_prefix(const SlitChain& c, std::size_t m, Complex z);

// In-place batch evaluation over SoA points (runtime SIMD kernel).
void eval_chain_batch(const SlitChain& c, std::span<double> re, std::span<double> im);
void eval_chain_prefix_batch(const SlitChain& c, std::size_t m, std::span<double> re,
                             std::span<double> im);

// Continuous boundary extension of the prefix chain at a real point.
Complex eval_chain_real(const SlitChain& c, std::size_t m, double x);

// Same, remembering the innermost composition index whose slit base absorbed
// the point (-1 when the image stays on the real axis).
struct TracedBoundaryPoint {
  Complex value;
  std::ptrdiff_t absorbed_at = -1;
};
TracedBoundaryPoint eval_chain_real_traced(const SlitChain& c, std::size_t m, double x);

// Convex hull of the real base interval of the step-m chain (the interval
// outside of which the map extends univalently across the real axis).
// Exact endpoint recursion: each step adjoins its own base [a-c, a+c] and the
// single-map preimage of the previous interval.
RealInterval chain_base_interval(const SlitChain& c, std::size_t m);

// Polyline sample of branch `branch` (1-based, created at that chain step):
// the image of the vertical slit at drivers[branch-1] under the preceding
// prefix map.
std::vector<Complex> boundary_trace(const SlitChain& c, std::size_t branch,
                                    std::size_t samples);

}  // namespace dle

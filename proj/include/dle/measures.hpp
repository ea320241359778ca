#pragma once

// Compactly supported probability measures on the real line, their Cauchy and
// reciprocal Cauchy transforms, the Levy-type metrics, Stieltjes inversion,
// and monotone convolution. Two representations are supported: weighted atoms
// and the arcsine family (the measure whose reciprocal Cauchy transform is
// the slit map a + sqrt((z-a)^2 - 4/n); for a != 0 this deforms the arcsine
// density and carries one boundary atom).

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dle/halfplane_maps.hpp"
#include "dle/loewner.hpp"

namespace dle {

struct CompactMeasure {
  struct Atom {
    double x;
    double w;
  };
  enum class Family { atoms, arcsine };

  Family family = Family::atoms;
  std::vector<Atom> atoms;  // sorted by x when family == atoms
  long n = 1;               // arcsine scale
  double shift = 0.0;       // slit position a; 0 gives the plain arcsine law
  double A = 0.0, B = 0.0;  // convex hull of the support

  static CompactMeasure point_mass(double a);
  static CompactMeasure from_atoms(std::vector<Atom> atoms);
  static CompactMeasure arcsine(long n, double shift = 0.0);

  bool is_atomic() const { return family == Family::atoms; }
  double mean() const;
  double cdf(double x) const;
  // Atomic approximation on equal-width bins (families only; atomic measures
  // return their own atoms).
  std::vector<Atom> discretized(std::size_t bins) const;
};

// Levy distance, exact for atomic measures (breakpoint scan over the finitely
// many candidate offsets); analytic families are discretized first.
double levy_distance(const CompactMeasure& mu, const CompactMeasure& nu);

// levy + max(|A_mu - A_nu|, |B_mu - B_nu|)
double rho_metric(const CompactMeasure& mu, const CompactMeasure& nu);

// G_mu(z) = int mu(dx)/(z - x). Exact weighted sum for atoms; adaptive
// Gauss-Chebyshev quadrature for the arcsine family (plus the closed-form
// boundary atom when shift != 0). Throws std::domain_error for z inside the
// continuous part of the support.
Complex cauchy_transform(const CompactMeasure& mu, Complex z);

// f_mu = 1/G_mu. For a point mass delta_a this is z - a.
Complex reciprocal_cauchy(const CompactMeasure& mu, Complex z);

struct StieltjesOptions {
  std::vector<double> y_levels{1e-2, 5e-3, 2.5e-3};
  double quad_tol = 1e-8;
  double extrapolation_tol = 5e-3;  // residual gate for the y -> 0 fit
};

// mu((x0,x1)) + [mu({x0}) + mu({x1})]/2 recovered from boundary values of the
// Cauchy transform: -(1/pi) int Im G(a+iy) da at the given y levels, then a
// least-squares fit I(y) = I0 + c1*sqrt(y) + c2*y extrapolated to y = 0 (the
// sqrt term carries the contribution of density edges inside the window).
// Throws NumericalFailure when the fit residual exceeds extrapolation_tol.
double stieltjes_invert(const std::function<Complex(Complex)>& G, double x0, double x1,
                        const StieltjesOptions& opts = {});

struct ConvolutionGrid {
  std::size_t bins = 400;
  double margin = 0.5;
  StieltjesOptions stieltjes{};
};

// Monotone convolution: the measure with f_lambda = f_mu o f_nu. Exact when
// nu is a point mass and mu is atomic (translation); otherwise G_lambda(z) =
// G_mu(f_nu(z)) is Stieltjes-inverted onto an atomic grid.
CompactMeasure monotone_convolve(const CompactMeasure& mu, const CompactMeasure& nu,
                                 const ConvolutionGrid& grid = {});

// A univalent self-map of the half-plane together with the real interval
// outside of which it extends univalently across the axis.
struct SigmaMap {
  std::function<Complex(Complex)> eval;
  double A = 0.0, B = 0.0;
};

SigmaMap sigma_from_measure(const CompactMeasure& mu);
SigmaMap sigma_from_chain(const SlitChain& chain, std::size_t m);

// Surrogate for the measure metric on maps: sup |f - g| over a grid on the
// horizontal line Im z = a, |Re z| <= R(a), plus the endpoint discrepancy
// max(|A_f - A_g|, |B_f - B_g|).
double sigma_distance(const SigmaMap& f, const SigmaMap& g, double a,
                      std::size_t grid = 129);

struct SigmaPath {
  std::vector<double> times;  // strictly increasing from 0
  std::vector<SigmaMap> maps;
};

// sum_{k=1..N} 2^-k s_k/(1+s_k), s_k = sup of sigma_distance over grid times
// <= k, truncated at N = 30 (tail below 1e-9). Requires identical time grids.
double path_distance(const SigmaPath& P, const SigmaPath& Q, double a = 0.5);

// JSON document form: {"atoms": [[x, w], ...]} or
// {"family": "arcsine", "n": n, "shift": a}.
nlohmann::json measure_to_json(const CompactMeasure& mu);
CompactMeasure measure_from_json(const nlohmann::json& doc);

}  // namespace dle

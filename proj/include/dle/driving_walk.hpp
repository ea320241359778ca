#pragma once

// Random-walk drivers: i.i.d. increments of mean 0 and variance kappa,
// piecewise-linear interpolation at scale n, and left-constant sampling.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dle/halfplane_maps.hpp"
#include "dle/rng.hpp"

namespace dle {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class LawKind { bernoulli, rademacher_scaled, uniform, gaussian, custom_atoms };

LawKind law_kind_from_name(const std::string& name);
std::string law_kind_name(LawKind kind);

// Increment law with mean 0 and variance kappa. bernoulli/rademacher_scaled
// put mass 1/2 on +-sqrt(kappa); uniform is the centered uniform law of
// variance kappa; custom atoms are validated to mean 0 and variance kappa at
// construction (tolerance 1e-12) and rejected otherwise.
struct IncrementLaw {
  LawKind kind = LawKind::bernoulli;
  double variance = 1.0;
  std::vector<std::pair<double, double>> atoms;  // (value, weight), custom only

  static IncrementLaw bernoulli(double kappa);
  static IncrementLaw rademacher(double kappa);
  static IncrementLaw uniform(double kappa);
  static IncrementLaw gaussian(double kappa);
  static IncrementLaw custom(std::vector<std::pair<double, double>> atoms, double kappa);
  static IncrementLaw make(LawKind kind, double kappa,
                           std::vector<std::pair<double, double>> atoms = {});

  bool symmetric() const;
  double sample(const RngStream& stream, std::uint64_t index) const;
};

struct WalkPath {
  long n = 1;
  std::uint64_t seed = 0;
  std::uint64_t replica = 0;
  std::vector<double> increments;  // X_1..X_m
  std::vector<double> prefix;      // prefix[k] = X_1+...+X_k, prefix[0] = 0

  std::size_t steps() const { return increments.size(); }
  double horizon() const { return static_cast<double>(steps()) / static_cast<double>(n); }
  // S_n(k/n) = n^{-1/2} (X_1+...+X_k)
  double knot(std::size_t k) const;
};

WalkPath sample_walk(const IncrementLaw& law, long n, std::size_t m, std::uint64_t seed,
                     std::uint64_t replica = 0);

// S_n(t): piecewise linear through the knots.
double interpolate(const WalkPath& w, double t);

// Left-constant sampling: value S_n(m/n) for t in [m/n, (m+1)/n).
double piecewise_constant(const WalkPath& w, double t);

// sup{|S_n(r) - S_n(s)| : 0 <= s < r <= t, r - s <= span}
double modulus_of_continuity(const WalkPath& w, double t, double span);

// Chain over the first m walk positions S_n(0/n) .. S_n((m-1)/n).
SlitChain to_chain(const WalkPath& w, std::size_t m);
SlitChain to_chain(const WalkPath& w);

}  // namespace dle

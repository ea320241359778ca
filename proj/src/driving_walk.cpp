#include "dle/driving_walk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dle {

LawKind law_kind_from_name(const std::string& name) {
  if (name == "bernoulli") return LawKind::bernoulli;
  if (name == "rademacher" || name == "rademacher-scaled") return LawKind::rademacher_scaled;
  if (name == "uniform") return LawKind::uniform;
  if (name == "gaussian" || name == "normal") return LawKind::gaussian;
  if (name == "custom" || name == "custom-atoms") return LawKind::custom_atoms;
  throw ConfigError("unknown increment law: " + name);
}

std::string law_kind_name(LawKind kind) {
  switch (kind) {
    case LawKind::bernoulli: return "bernoulli";
    case LawKind::rademacher_scaled: return "rademacher-scaled";
    case LawKind::uniform: return "uniform";
    case LawKind::gaussian: return "gaussian";
    case LawKind::custom_atoms: return "custom-atoms";
  }
  return "?";
}

static void require_positive_kappa(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw ConfigError("increment law requires variance kappa > 0");
}

IncrementLaw IncrementLaw::bernoulli(double kappa) {
  require_positive_kappa(kappa);
  return {LawKind::bernoulli, kappa, {}};
}

IncrementLaw IncrementLaw::rademacher(double kappa) {
  require_positive_kappa(kappa);
  return {LawKind::rademacher_scaled, kappa, {}};
}

IncrementLaw IncrementLaw::uniform(double kappa) {
  require_positive_kappa(kappa);
  return {LawKind::uniform, kappa, {}};
}

IncrementLaw IncrementLaw::gaussian(double kappa) {
  require_positive_kappa(kappa);
  return {LawKind::gaussian, kappa, {}};
}

IncrementLaw IncrementLaw::custom(std::vector<std::pair<double, double>> atoms, double kappa) {
  require_positive_kappa(kappa);
  if (atoms.empty()) throw ConfigError("custom law needs at least one atom");
  double wsum = 0.0, mean = 0.0, second = 0.0;
  for (const auto& [x, w] : atoms) {
    if (w < 0.0 || !std::isfinite(x) || !std::isfinite(w))
      throw ConfigError("custom law atoms must be finite with nonnegative weights");
    wsum += w;
    mean += w * x;
    second += w * x * x;
  }
  if (std::fabs(wsum - 1.0) > 1e-12) throw ConfigError("custom law weights must sum to 1");
  if (std::fabs(mean) > 1e-12) throw ConfigError("custom law must have mean 0");
  if (std::fabs(second - kappa) > 1e-12)
    throw ConfigError("custom law must have variance kappa");
  std::sort(atoms.begin(), atoms.end());
  return {LawKind::custom_atoms, kappa, std::move(atoms)};
}

IncrementLaw IncrementLaw::make(LawKind kind, double kappa,
                                std::vector<std::pair<double, double>> atoms) {
  switch (kind) {
    case LawKind::bernoulli: return bernoulli(kappa);
    case LawKind::rademacher_scaled: return rademacher(kappa);
    case LawKind::uniform: return uniform(kappa);
    case LawKind::gaussian: return gaussian(kappa);
    case LawKind::custom_atoms: return custom(std::move(atoms), kappa);
  }
  throw ConfigError("unknown increment law kind");
}

bool IncrementLaw::symmetric() const {
  if (kind != LawKind::custom_atoms) return true;
  for (const auto& [x, w] : atoms) {
    bool matched = false;
    for (const auto& [x2, w2] : atoms) {
      if (std::fabs(x + x2) <= 1e-12 && std::fabs(w - w2) <= 1e-12) {
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

double IncrementLaw::sample(const RngStream& stream, std::uint64_t index) const {
  const auto d = stream.draw(index);
  switch (kind) {
    case LawKind::bernoulli:
    case LawKind::rademacher_scaled: {
      const double root = std::sqrt(variance);
      return (d.a >> 63) ? root : -root;
    }
    case LawKind::uniform: {
      const double half = std::sqrt(3.0 * variance);
      return (2.0 * RngStream::to_unit(d.a) - 1.0) * half;
    }
    case LawKind::gaussian: {
      const double u = 1.0 - RngStream::to_unit(d.a);  // (0, 1]
      const double v = RngStream::to_unit(d.b);
      const double r = std::sqrt(-2.0 * std::log(u));
      return std::sqrt(variance) * r * std::cos(2.0 * std::numbers::pi * v);
    }
    case LawKind::custom_atoms: {
      const double u = RngStream::to_unit(d.a);
      double acc = 0.0;
      for (const auto& [x, w] : atoms) {
        acc += w;
        if (u < acc) return x;
      }
      return atoms.back().first;
    }
  }
  return 0.0;
}

double WalkPath::knot(std::size_t k) const {
  return prefix[k] / std::sqrt(static_cast<double>(n));
}

WalkPath sample_walk(const IncrementLaw& law, long n, std::size_t m, std::uint64_t seed,
                     std::uint64_t replica) {
  if (n < 1) throw ConfigError("walk scale n must be >= 1");
  WalkPath w;
  w.n = n;
  w.seed = seed;
  w.replica = replica;
  w.increments.resize(m);
  w.prefix.resize(m + 1);
  w.prefix[0] = 0.0;
  const RngStream stream(seed, replica);
  for (std::size_t k = 0; k < m; ++k) {
    w.increments[k] = law.sample(stream, k);
    w.prefix[k + 1] = w.prefix[k] + w.increments[k];
  }
  return w;
}

double interpolate(const WalkPath& w, double t) {
  const double nt = t * static_cast<double>(w.n);
  if (t < 0.0 || nt > static_cast<double>(w.steps()) * (1.0 + 1e-12) + 1e-12)
    throw std::domain_error("interpolate: t outside [0, m/n]");
  const auto m_hi = static_cast<std::size_t>(std::min(
      std::ceil(nt), static_cast<double>(w.steps())));
  if (m_hi == 0) return 0.0;
  const double frac = static_cast<double>(m_hi) - nt;  // (m - nt) in [0, 1]
  return frac * w.knot(m_hi - 1) + (1.0 - frac) * w.knot(m_hi);
}

double piecewise_constant(const WalkPath& w, double t) {
  const double nt = t * static_cast<double>(w.n);
  if (t < 0.0 || nt > static_cast<double>(w.steps()) * (1.0 + 1e-12) + 1e-12)
    throw std::domain_error("piecewise_constant: t outside [0, m/n]");
  const auto m_lo = static_cast<std::size_t>(std::min(
      std::floor(nt), static_cast<double>(w.steps())));
  return w.knot(m_lo);
}

double modulus_of_continuity(const WalkPath& w, double t, double span) {
  // Piecewise linear path: the sup over |r - s| <= span is attained with one
  // endpoint at a knot or at the domain edge, and the other at a knot or at
  // the far edge of the window. Scanning those pairs is exact.
  double best = 0.0;
  const auto value = [&](double s) { return interpolate(w, s); };
  const double n = static_cast<double>(w.n);
  const std::size_t last = std::min(w.steps(), static_cast<std::size_t>(std::floor(t * n)));
  const auto consider = [&](double s0, double s1) {
    if (s1 > t) s1 = t;
    if (s0 < 0.0) s0 = 0.0;
    if (s1 <= s0) return;
    best = std::max(best, std::fabs(value(s1) - value(s0)));
  };
  for (std::size_t k = 0; k <= last; ++k) {
    const double sk = static_cast<double>(k) / n;
    for (std::size_t j = k + 1; j <= last; ++j) {
      const double sj = static_cast<double>(j) / n;
      if (sj - sk > span + 1e-15) break;
      consider(sk, sj);
    }
    consider(sk, sk + span);
    consider(sk - span, sk);
  }
  consider(t - span, t);
  return best;
}

SlitChain to_chain(const WalkPath& w, std::size_t m) {
  SlitChain c;
  c.n = w.n;
  c.drivers.resize(m);
  for (std::size_t k = 0; k < m; ++k) c.drivers[k] = w.knot(k);
  return c;
}

SlitChain to_chain(const WalkPath& w) { return to_chain(w, w.steps()); }

}  // namespace dle

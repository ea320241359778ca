#include "dle/bessel.hpp"

#include <algorithm>
#include <cmath>

#include "dle/kernels.hpp"
#include "dle/parallel.hpp"

namespace dle {

void validate(const ChainConfig& cfg) {
  if (!(cfg.kappa > 0.0)) throw ConfigError("chain requires kappa > 0");
  if (cfg.y0 == 0.0) throw ConfigError("chain requires y0 != 0");
  if (std::fabs(cfg.law.variance - 1.0) > 1e-12)
    throw ConfigError("chain increments X' must have variance 1");
}

double chain_step(double y, double x_prime, double kappa) {
  const double d = y - x_prime;
  return std::sqrt(d * d + 4.0 / kappa);
}

std::vector<double> simulate_chain(const ChainConfig& cfg, std::uint64_t replica) {
  validate(cfg);
  std::vector<double> traj(cfg.horizon + 1);
  traj[0] = cfg.y0;
  const RngStream stream(cfg.seed, replica);
  double y = cfg.y0;
  for (std::size_t m = 0; m < cfg.horizon; ++m) {
    y = chain_step(y, cfg.law.sample(stream, m), cfg.kappa);
    traj[m + 1] = y;
  }
  return traj;
}

DriftEstimate drift_estimate(double y, double kappa, const IncrementLaw& unit_law,
                             std::size_t samples, std::uint64_t seed) {
  if (std::fabs(unit_law.variance - 1.0) > 1e-12)
    throw ConfigError("drift_estimate: X' must have variance 1");
  const double q = 4.0 / kappa;

  // Per-sample increments, then the batched delta kernel, then a sequential
  // reduction so the result does not depend on worker count or SIMD backend.
  std::vector<double> xs(samples), delta(samples);
  const RngStream stream(seed, 0);
  parallel_for((samples + 65535) / 65536, [&](std::size_t chunk) {
    const std::size_t lo = chunk * 65536;
    const std::size_t hi = std::min(samples, lo + 65536);
    for (std::size_t i = lo; i < hi; ++i) xs[i] = unit_law.sample(stream, i);
    kernels::bessel_drift(y, xs.data() + lo, q, delta.data() + lo, hi - lo);
  });

  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double d = delta[i];
    const double d2 = d * d;
    s1 += d;
    s2 += d2;
    s3 += d2 * d2;
  }
  const double s4 = static_cast<double>(samples);
  const double mean_d = s1 / s4;
  const double mean_d2 = s2 / s4;
  const double var_d = std::max(mean_d2 - mean_d * mean_d, 0.0);
  const double var_d2 = std::max(s3 / s4 - mean_d2 * mean_d2, 0.0);

  DriftEstimate est;
  est.samples = samples;
  est.scaled_drift = 2.0 * y * mean_d;
  est.scaled_drift_se = 2.0 * y * std::sqrt(var_d / s4);
  est.second_moment = mean_d2;
  est.second_moment_se = std::sqrt(var_d2 / s4);
  return est;
}

RecurrenceResult recurrence_experiment(const ChainConfig& cfg, double level,
                                       std::size_t replicas) {
  validate(cfg);
  if (!(level > 2.0 / std::sqrt(cfg.kappa)))
    throw ConfigError("recurrence level must exceed the chain floor 2/sqrt(kappa)");
  std::vector<unsigned char> exceeded(replicas, 0), returned(replicas, 0);
  parallel_for(replicas, [&](std::size_t r) {
    const RngStream stream(cfg.seed, r);
    double y = cfg.y0;
    bool up = false;
    for (std::size_t m = 0; m < cfg.horizon; ++m) {
      y = chain_step(y, cfg.law.sample(stream, m), cfg.kappa);
      if (!up && y > 2.0 * level) up = true;
      else if (up && y < level) {
        returned[r] = 1;
        break;
      }
    }
    exceeded[r] = up ? 1 : 0;
  });
  RecurrenceResult res;
  res.replicas = replicas;
  for (std::size_t r = 0; r < replicas; ++r) {
    res.exceeded += exceeded[r];
    res.returned += returned[r];
  }
  const double n = static_cast<double>(res.exceeded);
  if (n > 0.0) {
    const double p = static_cast<double>(res.returned) / n;
    res.fraction = p;
    // Wilson 95%
    const double zq = 1.959963984540054;
    const double z2 = zq * zq;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = zq * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    res.ci_lo = center - half;
    res.ci_hi = center + half;
  }
  return res;
}

}  // namespace dle

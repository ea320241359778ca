#pragma once

// Scalar Markov chain Y_m = sqrt((Y_{m-1} - X'_m)^2 + 4/kappa) driven by
// centered unit-variance increments; the discrete analogue of a Bessel
// process, transient for kappa < 4 and recurrent for kappa > 4.

#include <cstdint>
#include <vector>

#include "dle/driving_walk.hpp"

namespace dle {

struct ChainConfig {
  double kappa = 4.0;
  IncrementLaw law = IncrementLaw::rademacher(1.0);  // X', variance 1
  double y0 = 1.0;
  std::size_t horizon = 1000;
  std::uint64_t seed = 0;
};

void validate(const ChainConfig& cfg);

// sqrt((y - x')^2 + 4/kappa); never below 2/sqrt(kappa)
double chain_step(double y, double x_prime, double kappa);

// Trajectory of length horizon+1 starting at y0; deterministic in (cfg, replica).
std::vector<double> simulate_chain(const ChainConfig& cfg, std::uint64_t replica = 0);

struct DriftEstimate {
  double scaled_drift = 0.0;       // 2y E[Y_1 - y | Y_0 = y]
  double scaled_drift_se = 0.0;
  double second_moment = 0.0;      // E[(Y_1 - y)^2]
  double second_moment_se = 0.0;
  std::size_t samples = 0;
};

// Monte Carlo one-step statistics at height y (batch SIMD kernel inside).
DriftEstimate drift_estimate(double y, double kappa, const IncrementLaw& unit_law,
                             std::size_t samples, std::uint64_t seed);

struct RecurrenceResult {
  std::size_t replicas = 0;
  std::size_t exceeded = 0;   // trajectories that ever passed 2*level
  std::size_t returned = 0;   // of those, trajectories back below level
  double fraction = 0.0;      // returned / exceeded
  double ci_lo = 0.0, ci_hi = 0.0;  // 95% Wilson interval
};

// Finite-horizon return-frequency proxy: the fraction of replicas that come
// back below `level` after first exceeding 2*level.
RecurrenceResult recurrence_experiment(const ChainConfig& cfg, double level,
                                       std::size_t replicas);

}  // namespace dle

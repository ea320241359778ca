#pragma once

// Small statistics toolbox for the experiment harness: two-sample
// Kolmogorov-Smirnov, rank correlations, and basic summaries.

#include <cstddef>
#include <vector>

namespace dle {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Two-sample KS with the asymptotic Kolmogorov p-value (effective sample size
// n1 n2 / (n1 + n2)); ties are handled by the usual step-function scan.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

double pearson(const std::vector<double>& x, const std::vector<double>& y);

struct TrendResult {
  double rho = 0.0;       // Spearman rank correlation
  double p_one_sided = 1.0;  // P(T <= t) under no trend; small => negative trend
};

// Spearman correlation with average ranks for ties; one-sided p-value for a
// negative trend via the t statistic (normal approximation).
TrendResult spearman_trend(const std::vector<double>& x, const std::vector<double>& y);

double normal_cdf(double z);

}  // namespace dle

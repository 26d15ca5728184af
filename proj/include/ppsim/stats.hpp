#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ppsim/cases.hpp"
#include "ppsim/power.hpp"

namespace ppsim {

// Raised when a t-statistic is requested for samples with zero variance.
class DegenerateSampleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrialResult {
  int case_index = 0;
  std::uint64_t seed = 0;  // trial master seed; role seeds derive from it
  double mean_normalized_power = 0.0;
};

struct TTestReport {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double mu0 = 0.0;
  double statistic = 0.0;
  double alpha = 0.0;
  double critical = 0.0;
  bool accepted = false;
};

// Unbiased sample variance, sum((x - mean)^2) / (n - 1). Needs n >= 2.
double unbiased_variance(std::span<const double> samples);

// t = (mean - mu0) / sqrt(variance / n). Throws DegenerateSampleError when
// the sample variance is zero.
double t_statistic(std::span<const double> samples, double mu0);
double t_statistic(double mean, double variance, std::size_t n, double mu0);

// Critical value of the Student-t distribution with df degrees of freedom:
// the quantile at 1 - alpha/2 (two-sided) or 1 - alpha (one-sided).
// Evaluated by bisecting the tail probability, which is computed from the
// regularized incomplete beta function (continued-fraction form); absolute
// error below 1e-6.
double t_critical(std::size_t df, double alpha, bool two_sided);

// Regularized incomplete beta I_x(a, b). Exposed for verification.
double regularized_incomplete_beta(double a, double b, double x);

struct TrialsOutcome {
  std::vector<TrialResult> trials;
  TTestReport report;
};

// Multi-seed study of one case. Each trial simulates one averaging window
// plus a leading warm-up slot; the sample is the window's mean load power
// (the window starts after slot 0, so no cold-start bit enters it),
// normalized by the all-on base. The report tests H0: mean equals the
// case target. Trial k uses master seed derive_seed(master_seed, k).
TrialsOutcome run_trials(int case_index, const CaseSetup& setup,
                         std::size_t n_trials, double window_s,
                         std::uint64_t master_seed,
                         const ElectricalParams& params = {},
                         double alpha = 0.05);

// Same, with a precomputed normalization base (shared across cases).
TrialsOutcome run_trials(int case_index, const CaseSetup& setup,
                         std::size_t n_trials, double window_s,
                         std::uint64_t master_seed,
                         const ElectricalParams& params, double alpha,
                         double base_power);

}  // namespace ppsim

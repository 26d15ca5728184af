#include "ppsim/stats.hpp"

#include <cmath>

namespace ppsim {

namespace {

// Continued-fraction kernel of the regularized incomplete beta (modified
// Lentz iteration).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 400;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

// Two-sided tail probability P(|T| > t) for t >= 0, df degrees of freedom.
double t_tail_two_sided(double t, double df) {
  const double x = df / (df + t * t);
  return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

// Solves t_tail_two_sided(t) == tail for t >= 0 by bisection. The tail is
// strictly decreasing in t.
double invert_tail(double df, double tail) {
  double lo = 0.0;
  double hi = 1.0;
  while (t_tail_two_sided(hi, df) > tail) {
    hi *= 2.0;
    if (hi > 1e12) {
      throw std::invalid_argument("t critical value out of range");
    }
  }
  for (int i = 0; i < 200 && (hi - lo) > 1e-12 * (1.0 + hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (t_tail_two_sided(mid, df) > tail) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("incomplete beta parameters must be positive");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) -
                          std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double unbiased_variance(std::span<const double> samples) {
  if (samples.size() < 2) {
    throw std::invalid_argument("variance needs at least two samples");
  }
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(samples.size());
  double ss = 0.0;
  for (double x : samples) {
    const double d = x - mean;
    ss += d * d;
  }
  return ss / static_cast<double>(samples.size() - 1);
}

double t_statistic(std::span<const double> samples, double mu0) {
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(samples.size());
  return t_statistic(mean, unbiased_variance(samples), samples.size(), mu0);
}

double t_statistic(double mean, double variance, std::size_t n, double mu0) {
  if (n < 2) {
    throw std::invalid_argument("t statistic needs at least two samples");
  }
  if (variance < 0.0) {
    throw std::invalid_argument("variance must be non-negative");
  }
  if (variance == 0.0) {
    throw DegenerateSampleError("zero sample variance, t undefined");
  }
  return (mean - mu0) / std::sqrt(variance / static_cast<double>(n));
}

double t_critical(std::size_t df, double alpha, bool two_sided) {
  if (df < 1) {
    throw std::invalid_argument("degrees of freedom must be >= 1");
  }
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw std::invalid_argument("alpha must be in (0, 1]");
  }
  const double n = static_cast<double>(df);
  if (two_sided) {
    return invert_tail(n, alpha);
  }
  // One-sided: quantile at 1 - alpha, by symmetry around zero.
  if (alpha == 0.5) return 0.0;
  if (alpha < 0.5) return invert_tail(n, 2.0 * alpha);
  return -invert_tail(n, 2.0 * (1.0 - alpha));
}

TrialsOutcome run_trials(int case_index, const CaseSetup& setup,
                         std::size_t n_trials, double window_s,
                         std::uint64_t master_seed,
                         const ElectricalParams& params, double alpha) {
  return run_trials(case_index, setup, n_trials, window_s, master_seed,
                    params, alpha, normalization_base_power(params));
}

TrialsOutcome run_trials(int case_index, const CaseSetup& setup,
                         std::size_t n_trials, double window_s,
                         std::uint64_t master_seed,
                         const ElectricalParams& params, double alpha,
                         double base_power) {
  if (n_trials < 2) {
    throw std::invalid_argument("need at least two trials");
  }
  params.validate();
  const auto window_slots =
      static_cast<std::size_t>(std::llround(window_s * params.clock_hz));
  if (window_slots == 0) {
    throw std::invalid_argument("window shorter than one slot");
  }

  TrialsOutcome out;
  out.trials.reserve(n_trials);
  std::vector<double> samples;
  samples.reserve(n_trials);
  for (std::size_t k = 0; k < n_trials; ++k) {
    const std::uint64_t trial_seed = derive_seed(master_seed, k);
    SeededGenerator gen_f(derive_seed(trial_seed, seed_role::kSourceF));
    SeededGenerator gen_b(derive_seed(trial_seed, seed_role::kSourceB));
    Router router({setup.op, 0.5}, {},
                  derive_seed(trial_seed, seed_role::kMux));
    // One warm-up slot, then the measured window.
    const BitStream f = bernoulli_stream(setup.p_f, window_slots + 1, gen_f);
    const BitStream b = bernoulli_stream(setup.p_b, window_slots + 1, gen_b);
    const RunResult run = router.run_sequence(f, b);
    const std::span<const SlotTrace> window(run.traces.data() + 1,
                                            window_slots);
    const PowerChannels ch = synthesize_waveform(window, params, {});
    const double sample = ch.load.mean() / base_power;
    out.trials.push_back({case_index, trial_seed, sample});
    samples.push_back(sample);
  }

  TTestReport& report = out.report;
  report.n = n_trials;
  double mean = 0.0;
  for (double x : samples) mean += x;
  report.mean = mean / static_cast<double>(n_trials);
  report.variance = unbiased_variance(samples);
  report.mu0 = case_target(setup);
  report.statistic =
      t_statistic(report.mean, report.variance, n_trials, report.mu0);
  report.alpha = alpha;
  report.critical = t_critical(n_trials - 1, alpha, true);
  report.accepted = std::fabs(report.statistic) < report.critical;
  return out;
}

}  // namespace ppsim

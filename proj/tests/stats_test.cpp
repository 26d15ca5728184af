#include "ppsim/stats.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "testutil.hpp"
#include "exact.hpp"

using namespace ppsim;
using ppsim_test::Rat;

TEST_CASE("unbiased variance basics") {
  CHECK(unbiased_variance(std::array{0.0, 0.0, 0.0}) == 0.0);
  CHECK(unbiased_variance(std::array{0.0, 1.0}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(unbiased_variance(std::array{1.0}), std::invalid_argument);
}

TEST_CASE("unbiased variance against an exact rational oracle") {
  // Samples with denominators small enough for exact arithmetic.
  const std::array samples = {0.125, 0.25, 0.5, 0.75};
  const std::array<Rat, 4> exact = {Rat(1, 8), Rat(1, 4), Rat(1, 2),
                                    Rat(3, 4)};
  Rat mean(0);
  for (const Rat& x : exact) mean += x;
  mean /= 4;
  Rat ss(0);
  for (const Rat& x : exact) ss += (x - mean) * (x - mean);
  const Rat var = ss / 3;
  CHECK(unbiased_variance(samples) ==
        doctest::Approx(boost::rational_cast<double>(var)).epsilon(1e-15));
}

TEST_CASE("t statistic from published summary tuples") {
  CHECK(ppsim_test::near(
      t_statistic(0.809403, 0.013607, 200, 0.81),
      -0.0723, 1e-3));
  CHECK(ppsim_test::near(
      t_statistic(0.903492, 0.006513, 200, 0.9),
      0.6119, 1e-3));
  CHECK(t_statistic(0.5, 0.01, 200, 0.5) == 0.0);
}

TEST_CASE("t statistic degenerate and invalid inputs") {
  CHECK_THROWS_AS(t_statistic(std::array{0.3, 0.3, 0.3}, 0.3),
                  DegenerateSampleError);
  CHECK_THROWS_AS(t_statistic(0.5, 0.0, 200, 0.5), DegenerateSampleError);
  CHECK_THROWS_AS(t_statistic(0.5, 0.01, 1, 0.5), std::invalid_argument);
}

TEST_CASE("t statistic sign and scale invariance") {
  const std::array samples = {0.4, 0.5, 0.7, 0.55};
  const double t1 = t_statistic(samples, 0.5);
  CHECK((t1 > 0) == (0.5375 > 0.5));
  std::array scaled = samples;
  for (double& x : scaled) x *= 3.0;
  CHECK(t_statistic(scaled, 1.5) == doctest::Approx(t1).epsilon(1e-12));
}

TEST_CASE("t critical values") {
  CHECK(ppsim_test::near(
      t_critical(199, 0.05, true),
      1.972, 1e-3));
  // Classic table values.
  CHECK(ppsim_test::near(
      t_critical(1, 0.05, true),
      12.706, 2e-3));
  CHECK(ppsim_test::near(
      t_critical(10, 0.05, true),
      2.228, 2e-3));
  CHECK(ppsim_test::near(
      t_critical(30, 0.10, true),
      1.697, 2e-3));
  CHECK(ppsim_test::near(
      t_critical(199, 1.0, true),
      0.0, 1e-9));
  CHECK_THROWS_AS(t_critical(0, 0.05, true), std::invalid_argument);
  CHECK_THROWS_AS(t_critical(10, 0.0, true), std::invalid_argument);
  CHECK_THROWS_AS(t_critical(10, 1.5, true), std::invalid_argument);
}

TEST_CASE("t critical approaches the normal limit for large df") {
  // Oracle: invert the standard normal tail with bisection over erfc.
  const auto normal_two_sided = [](double alpha) {
    double lo = 0.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double tail = std::erfc(mid / std::sqrt(2.0));
      (tail > alpha ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  const double limit = normal_two_sided(0.05);
  CHECK(ppsim_test::near(
      limit,
      1.95996, 1e-4));
  CHECK(ppsim_test::near(
      t_critical(2000000, 0.05, true),
      limit, 1e-4));
}

TEST_CASE("t critical is monotone in alpha and df") {
  double prev = t_critical(199, 0.01, true);
  for (double alpha : {0.02, 0.05, 0.1, 0.2, 0.5}) {
    const double cur = t_critical(199, alpha, true);
    CHECK(cur < prev);
    prev = cur;
  }
  prev = t_critical(2, 0.05, true);
  for (std::size_t df : {5u, 10u, 50u, 200u, 1000u}) {
    const double cur = t_critical(df, 0.05, true);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("one-sided critical values") {
  // One-sided 0.025 equals two-sided 0.05.
  CHECK(t_critical(199, 0.025, false) ==
        doctest::Approx(t_critical(199, 0.05, true)).epsilon(1e-9));
  CHECK(t_critical(199, 0.5, false) == 0.0);
  CHECK(t_critical(199, 0.975, false) ==
        doctest::Approx(-t_critical(199, 0.05, true)).epsilon(1e-9));
}

TEST_CASE("incomplete beta endpoints and symmetry") {
  CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
  // I_x(a, b) + I_{1-x}(b, a) == 1
  for (double x : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double left = regularized_incomplete_beta(3.5, 1.25, x);
    const double right = regularized_incomplete_beta(1.25, 3.5, 1.0 - x);
    CHECK(left + right == doctest::Approx(1.0).epsilon(1e-12));
  }
  // I_x(1, 1) is the identity.
  CHECK(regularized_incomplete_beta(1.0, 1.0, 0.42) ==
        doctest::Approx(0.42).epsilon(1e-12));
}

TEST_CASE("run_trials accepts the target for a well-behaved case") {
  const CaseSetup mul99 = verification_cases()[0];
  const TrialsOutcome out = run_trials(
      0, mul99, 200, 1e-3, derive_seed(kDefaultMasterSeed, seed_role::kCaseBase));
  CHECK(out.trials.size() == 200);
  CHECK(out.report.n == 200);
  CHECK(out.report.mu0 == doctest::Approx(0.81));
  CHECK(ppsim_test::near(
      out.report.critical,
      1.972, 1e-3));
  CHECK(out.report.accepted);
  CHECK(ppsim_test::near(
      out.report.mean,
      0.81, 0.03));
}

TEST_CASE("run_trials case 12 mean near 0.45") {
  const CaseSetup add45 = verification_cases()[12];
  const TrialsOutcome out =
      run_trials(12, add45, 200, 1e-3,
                 derive_seed(kDefaultMasterSeed, seed_role::kCaseBase + 12));
  CHECK(ppsim_test::near(
      out.report.mean,
      0.45, 0.03));
}

TEST_CASE("run_trials degenerate when every sample is identical") {
  const CaseSetup all_on{OpKind::Multiplication, 1.0, 1.0};
  CHECK_THROWS_AS(run_trials(0, all_on, 2, 1e-3, 1), DegenerateSampleError);
}

TEST_CASE("run_trials needs at least two trials") {
  CHECK_THROWS_AS(run_trials(0, verification_cases()[0], 1, 1e-3, 1),
                  std::invalid_argument);
}

TEST_CASE("rejection rate under the null is close to alpha") {
  // The harness tests its own simulator output, so over many repetitions
  // the rejection frequency must sit near the significance level.
  const CaseSetup setup = verification_cases()[11];  // addition, 0.65
  const ElectricalParams params;
  const double base = normalization_base_power(params);
  int rejections = 0;
  const int reps = 1000;
  for (int r = 0; r < reps; ++r) {
    const TrialsOutcome out =
        run_trials(11, setup, 16, 1e-3, derive_seed(777, r), params, 0.05,
                   base);
    if (!out.report.accepted) {
      ++rejections;
    }
  }
  const double rate = double(rejections) / double(reps);
  CHECK(ppsim_test::near(
      rate,
      0.05, 0.02));
}

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "repel/errors.hpp"
#include "repel/rng.hpp"
#include "repel/stats.hpp"

using namespace repel;

namespace {

std::vector<double> exps(Rng& rng, std::size_t n, double rate) {
  std::exponential_distribution<double> d(rate);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

std::vector<std::int64_t> poissons(Rng& rng, std::size_t n, double mean) {
  std::poisson_distribution<std::int64_t> d(mean);
  std::vector<std::int64_t> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

double poisson_pmf(double mean, std::int64_t k) {
  return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
}

}  // namespace

TEST(Stats, KsCalibrationUnderNull) {
  int pass = 0;
  for (int s = 0; s < 100; ++s) {
    Rng rng = make_rng(100, s);
    pass += ks_two_sample(exps(rng, 5000, 1.0), exps(rng, 5000, 1.0)).verdict == Verdict::Pass;
  }
  EXPECT_GE(pass, 95);
}

TEST(Stats, KsDetectsShift) {
  Rng rng = make_rng(101, 0);
  const auto r = ks_two_sample(exps(rng, 100000, 1.0), exps(rng, 100000, 1.2));
  EXPECT_EQ(r.verdict, Verdict::Fail);
  // population KS distance between Exp(1) and Exp(1.2)
  const double x = std::log(1.2) / 0.2;
  EXPECT_NEAR(r.statistic, std::exp(-x) - std::exp(-1.2 * x), 0.01);
}

TEST(Stats, TooFewSamples) {
  std::vector<double> a(10, 1.0), b(1000, 1.0);
  EXPECT_THROW(ks_two_sample(a, b), TooFewSamples);
  EXPECT_THROW(ks_one_sample(a, [](double) { return 0.5; }), TooFewSamples);
  EXPECT_THROW(chi_square_pmf({1, 2, 3}, [](std::int64_t) { return 0.1; }), TooFewSamples);
}

TEST(Stats, KsOneSample) {
  Rng rng = make_rng(102, 0);
  const auto r = ks_one_sample(exps(rng, 20000, 1.0), [](double x) { return -std::expm1(-x); });
  EXPECT_EQ(r.verdict, Verdict::Pass);
}

TEST(Stats, ChiSquarePmf) {
  Rng rng = make_rng(103, 0);
  const auto s = poissons(rng, 100000, 2.0);
  EXPECT_EQ(chi_square_pmf(s, [](std::int64_t k) { return poisson_pmf(2.0, k); }).verdict, Verdict::Pass);
  EXPECT_EQ(chi_square_pmf(s, [](std::int64_t k) { return poisson_pmf(2.3, k); }).verdict, Verdict::Fail);
  EXPECT_THROW(chi_square_pmf(s, [](std::int64_t) { return 0.0; }), DomainError);
}

TEST(Stats, ChiSquareTwoSample) {
  Rng rng = make_rng(104, 0);
  EXPECT_EQ(chi_square_two_sample(poissons(rng, 50000, 3.0), poissons(rng, 60000, 3.0)).verdict, Verdict::Pass);
  EXPECT_EQ(chi_square_two_sample(poissons(rng, 50000, 3.0), poissons(rng, 50000, 3.2)).verdict, Verdict::Fail);
}

TEST(Stats, ChiSquareSurvival) {
  EXPECT_NEAR(chi_square_sf(3.841458820694124, 1.0), 0.05, 1e-12);
  EXPECT_NEAR(chi_square_sf(2.0 * 3.0, 2.0), std::exp(-3.0), 1e-14);
}

TEST(Stats, Wasserstein) {
  std::vector<double> a = {0.1, 0.4, 0.9, 1.7};
  EXPECT_EQ(wasserstein_1d(a, a), 0.0);
  std::vector<double> b = a;
  for (auto& x : b) x += 0.25;
  EXPECT_NEAR(wasserstein_1d(a, b), 0.25, 1e-15);

  // U[0,1] vs U[0,1] with 10^4 samples: sqrt(N) * W1 stays O(1) across repetitions
  std::vector<double> scaled;
  for (int s = 0; s < 20; ++s) {
    Rng rng = make_rng(105, s);
    std::vector<double> u(10000), v(10000);
    for (auto& x : u) x = uniform01(rng);
    for (auto& x : v) x = uniform01(rng);
    scaled.push_back(std::sqrt(10000.0) * wasserstein_1d(u, v));
  }
  EXPECT_GT(mean(scaled), 0.1);
  EXPECT_LT(mean(scaled), 1.5);
}

TEST(Stats, ReportsAndVerdicts) {
  auto z = z_report("z", 103.0, 100.0, 1.0);
  EXPECT_EQ(z.verdict, Verdict::Fail);
  z = z_report("z", 102.0, 100.0, 1.0);
  EXPECT_EQ(z.verdict, Verdict::Pass);
  EXPECT_EQ(binomial_report("b", 500, 1000, 0.5).verdict, Verdict::Pass);
  EXPECT_EQ(tolerance_report("t", 1e-9, 1e-10).verdict, Verdict::Fail);
  std::vector<TestReport> rs = {z, bool_report("ok", true)};
  rs[0].seed = 77;
  EXPECT_TRUE(all_pass(rs));
  const std::string csv = reports_csv(rs);
  EXPECT_NE(csv.find(",77,"), std::string::npos);
  EXPECT_NE(reports_table(rs).find("[PASS] ok"), std::string::npos);
  rs.push_back(bool_report("bad", false));
  EXPECT_FALSE(all_pass(rs));
}

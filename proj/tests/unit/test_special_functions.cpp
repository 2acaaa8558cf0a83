#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "repel/errors.hpp"
#include "repel/rng.hpp"
#include "repel/special_functions.hpp"
#include "repel/stats.hpp"

using namespace repel;

namespace {

// log I_nu(z) at 40 digits (mpmath)
struct Golden {
  double nu, z, value;
};
const Golden kLogI[] = {
    {0.5, 2.0, 0.71600242968946804298},   {0, 1.0, 0.23591435850717864869},
    {0.3, 0.01, -1.4813011697677152676},  {-0.5, 5.0, 3.2763879094774939356},
    {1.7, 12.0, 9.7238065263169479169},   {0.25, 29.0, 26.400704143493831811},
    {0.4, 31.0, 28.365543697478173154},   {-0.7, 80.0, 76.888538659886525254},
    {2.0, 250.0, 246.31281598545570358},  {0.5, 700.0, 695.80552129927362492},
};
const Golden kLogK[] = {
    {0.3, 0.5, -0.02380702734543257338}, {0.3, 1.9, -2.0296657660207179297}, {0.3, 2.1, -2.276897166774938189},
    {0.7, 5.0, -5.5569641382392463631},  {0.5, 3.0, -3.3235147916893274133}, {0.9, 40.0, -41.611733954913310222},
    {0.1, 300.0, -302.62649922031589929},
};
const double kPmf0At2[] = {0.43867627983704873938, 0.43867627983704873938,  0.10966906995926218484,
                           0.012185452217695798316, 0.00076159076360598739475, 0.00003046363054423949579,
                           8.4621195956220821639e-7, 1.7269631827800167682e-8, 2.6983799730937762002e-10,
                           3.3313333001157730867e-12, 3.3313333001157730867e-14};

}  // namespace

TEST(SpecialFunctions, LogBesselIGolden) {
  for (const auto& g : kLogI) {
    const double tol = g.z <= 30.0 ? 1e-12 : 1e-10;
    EXPECT_NEAR(log_bessel_i(g.nu, g.z), g.value, tol * std::max(1.0, std::abs(g.value))) << g.nu << " " << g.z;
  }
  EXPECT_EQ(log_bessel_i(0.0, 0.0), 0.0);
  const double closed = std::log(std::sqrt(2.0 / (std::numbers::pi * 2.0)) * std::sinh(2.0));
  EXPECT_NEAR(log_bessel_i(0.5, 2.0), closed, 1e-13);
}

TEST(SpecialFunctions, IntegerOrderAlias) {
  for (double z : {0.1, 1.0, 10.0}) EXPECT_EQ(log_bessel_i(-1.0, z), log_bessel_i(1.0, z));
}

TEST(SpecialFunctions, DomainErrors) {
  EXPECT_THROW(log_bessel_i(-1.5, 1.0), DomainError);
  EXPECT_THROW(log_bessel_i(0.5, 0.0), DomainError);
  EXPECT_THROW(log_bessel_i(0.5, -1.0), DomainError);
  EXPECT_THROW(log_bessel_k(1.0, 1.0), DomainError);
  EXPECT_THROW(log_bessel_k(0.5, 0.0), DomainError);
  EXPECT_THROW(bessel_pmf(-1.2, 1.0, 0), DomainError);
}

TEST(SpecialFunctions, Ratios) {
  EXPECT_NEAR(bessel_i_ratio(-0.5, 0.5, 1.0), 1.3130352854993313036, 1e-13);
  for (double z : {0.01, 0.7, 3.0, 40.0}) EXPECT_NEAR(bessel_i_ratio(0.5, -0.5, z), std::tanh(z), 1e-13);
  // small-argument leading order 2 alpha / z
  EXPECT_NEAR(bessel_i_ratio(-0.7, 0.3, 1e-4), 6000.0000384615357879, 1e-8);
  EXPECT_NEAR(bessel_i_ratio(-1.0, 0.0, 1e-6) / 5e-7, 1.0, 1e-6);
  EXPECT_EQ(bessel_i_ratio(0.5, -0.5, 0.0), 0.0);
  EXPECT_NO_THROW(bessel_i_ratio(0.3, -0.7, 700.0));
  for (double a : {0.5, 0.7, 1.0, 2.0}) {
    double prev = INFINITY;
    for (double z = 0.01; z < 18.0; z *= 1.5) {
      const double r = bessel_i_ratio(a - 1.0, a, z);
      EXPECT_LT(r, prev);
      prev = r;
    }
  }
  // below alpha = 1/2 the ratio dips under 1 and climbs back
  EXPECT_NEAR(bessel_i_ratio(-0.8, 0.2, 1.0), 0.78173552, 1e-8);
  EXPECT_NEAR(bessel_i_ratio(-0.8, 0.2, 2.0), 0.8244811, 1e-7);
}

TEST(SpecialFunctions, BesselKGolden) {
  for (const auto& g : kLogK) EXPECT_NEAR(log_bessel_k(g.nu, g.z), g.value, 1e-11 * std::max(1.0, std::abs(g.value)));
  for (double z : {0.1, 1.0, 2.0, 7.0})
    EXPECT_NEAR(log_bessel_k(0.5, z), std::log(std::sqrt(std::numbers::pi / (2.0 * z))) - z, 1e-12);
  // both branches near the switch
  for (double nu : {0.2, 0.5, 0.8})
    EXPECT_NEAR(detail::log_bessel_k_identity(nu, 2.0), detail::log_bessel_k_integral(nu, 2.0), 1e-11);
}

TEST(SpecialFunctions, ScaledK) {
  for (double nu : {0.5, 0.7, 0.9}) EXPECT_NEAR(bessel_kk(nu, 1e-6), 1.0, 1e-4);
  EXPECT_NEAR(bessel_kk(0.3, 1e-6), 0.99976030723212909417, 1e-9);
  EXPECT_NEAR(bessel_kk(0.5, 2.0), std::exp(-2.0), 1e-14);
  EXPECT_EQ(log_bessel_kk(0.4, 0.0), 0.0);
}

TEST(SpecialFunctions, PmfGolden) {
  for (int n = 0; n <= 10; ++n) EXPECT_NEAR(bessel_pmf(0.0, 2.0, n) / kPmf0At2[n], 1.0, 1e-12) << n;
  const double neg[] = {0.099327927419433207829, 0.44697567338744943523, 0.33523175504058707642,
                        0.10056952651217612293, 0.01616295961802830547};
  for (int n = 0; n < 5; ++n) EXPECT_NEAR(bessel_pmf(-0.5, 3.0, n), neg[n], 1e-14);
  EXPECT_EQ(bessel_pmf(0.7, 0.0, 0), 1.0);
  EXPECT_EQ(bessel_pmf(0.7, 0.0, 3), 0.0);
  EXPECT_EQ(bessel_pmf(-1.0, 2.0, 0), 0.0);
}

TEST(SpecialFunctions, PmfNormalization) {
  for (double nu : {-1.0, -0.5, 0.0, 0.5, 1.0})
    for (double z : {0.01, 1.0, 10.0, 100.0}) {
      double s = 0.0;
      for (int n = 0; n < 1000; ++n) s += bessel_pmf(nu, z, n);
      EXPECT_NEAR(s, 1.0, 1e-12) << nu << " " << z;
    }
}

TEST(SpecialFunctions, SeriesAsymptoticOverlap) {
  for (double nu : {-1.0, -0.5, 0.0, 0.5, 1.0, 2.5})
    for (double z = 25.0; z <= 35.0; z += 0.5)
      EXPECT_NEAR(detail::log_bessel_i_series(nu, z), detail::log_bessel_i_asymptotic(nu, z), 1e-9);
}

TEST(SpecialFunctions, SamplerMatchesPmf) {
  Rng rng = make_rng(11, 0);
  for (auto [nu, z] : std::vector<std::pair<double, double>>{{0.0, 2.0}, {-0.5, 5.0}, {1.0, 30.0}}) {
    std::vector<std::int64_t> s(200000);
    for (auto& v : s) v = sample_bessel(nu, z, rng);
    const auto r = chi_square_pmf(s, [&](std::int64_t n) { return bessel_pmf(nu, z, n); });
    EXPECT_GT(*r.p_value, 0.01) << nu << " " << z;
  }
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(sample_bessel(0.3, 0.0, rng), 0);
    EXPECT_GT(sample_bessel(-1.0, 1.0, rng), 0);
  }
}

TEST(SpecialFunctions, PoissonDirichletSticks) {
  Rng rng = make_rng(12, 0);
  EXPECT_EQ(sample_pd_sticks(0.0, 2.5, 1e-9, rng), std::vector<double>{2.5});
  EXPECT_THROW(sample_pd_sticks(-0.1, 1.0, 1e-9, rng), DomainError);
  const int n = 40000;
  std::vector<double> mean_k(4, 0.0);
  for (int i = 0; i < n; ++i) {
    const auto s = sample_pd_sticks(1.0, 1.0, 1e-9, rng);
    double total = 0.0;
    for (double x : s) {
      EXPECT_GT(x, 0.0);
      total += x;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    for (std::size_t k = 0; k < 4 && k < s.size(); ++k) mean_k[k] += s[k] / n;
  }
  // rank k stick has mean 2^-k; standard error below 0.003
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(mean_k[k], std::ldexp(1.0, -(k + 1)), 0.01);
}

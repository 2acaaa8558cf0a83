#include "repel/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "repel/errors.hpp"

namespace repel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSeriesLimit = 30.0;

bool is_integer(double x) { return std::floor(x) == x; }

// Negative integer orders alias to their absolute value.
double effective_order(double nu) {
  if (nu < 0.0 && is_integer(nu)) return -nu;
  if (nu < -1.0) throw DomainError("Bessel order below -1");
  return nu;
}

}  // namespace

double log_gamma(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

namespace detail {

double log_bessel_i_series(double nu, double z) {
  nu = effective_order(nu);
  const double half = 0.5 * z;
  const double q = half * half;
  if (z <= kSeriesLimit) {
    double term = 1.0, sum = 1.0;
    for (int n = 0; n < 100000; ++n) {
      term *= q / ((n + 1.0) * (n + 1.0 + nu));
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return nu * std::log(half) - log_gamma(nu + 1.0) + std::log(sum);
  }
  // Log-scaled summation around the peak term.
  const double lq = std::log(q);
  std::vector<double> lt;
  lt.reserve(static_cast<std::size_t>(z) + 64);
  double cur = -log_gamma(nu + 1.0), peak = cur;
  lt.push_back(cur);
  for (int n = 0;; ++n) {
    cur += lq - std::log(n + 1.0) - std::log(n + 1.0 + nu);
    lt.push_back(cur);
    peak = std::max(peak, cur);
    if (cur < peak - 45.0 || n > 100000) break;
  }
  double sum = 0.0;
  for (double v : lt) sum += std::exp(v - peak);
  return nu * std::log(half) + peak + std::log(sum);
}

double log_bessel_i_asymptotic(double nu, double z) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0, prev = kInf;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (8.0 * k * z);
    const double mag = std::abs(term);
    if (mag > prev) break;
    sum += term;
    prev = mag;
    if (mag < 1e-17 * std::abs(sum)) break;
  }
  return z - 0.5 * std::log(2.0 * std::numbers::pi * z) + std::log(sum);
}

double log_bessel_k_identity(double nu, double z) {
  const double a = log_bessel_i(-nu, z), b = log_bessel_i(nu, z);
  // I_{-nu} - I_nu = I_{-nu} (1 - exp(b - a))
  return std::log(std::numbers::pi / (2.0 * std::sin(std::numbers::pi * nu))) + a + std::log(-std::expm1(b - a));
}

// K_nu(z) = ∫_0^∞ exp(-z cosh t) cosh(nu t) dt, trapezoid rule (spectrally accurate here).
double log_bessel_k_integral(double nu, double z) {
  const double h = std::min(0.05, 0.25 / std::sqrt(z));
  const double tmax = std::acosh(1.0 + 80.0 / z) + 1.0;
  double sum = 0.5;
  for (int k = 1;; ++k) {
    const double t = k * h;
    if (t > tmax) break;
    sum += std::exp(-z * (std::cosh(t) - 1.0)) * std::cosh(nu * t);
  }
  return -z + std::log(h * sum);
}

}  // namespace detail

double log_bessel_i(double nu, double z) {
  const double v = effective_order(nu);
  if (!(z >= 0.0) || std::isnan(z)) throw DomainError("Bessel argument must be nonnegative");
  if (z == 0.0) {
    if (v == 0.0) return 0.0;
    throw DomainError("log I_nu(0) undefined for nu != 0");
  }
  if (std::isinf(z)) return kInf;
  if (z <= kSeriesLimit) return detail::log_bessel_i_series(v, z);
  if (v * v <= 0.25 * z) return detail::log_bessel_i_asymptotic(v, z);
  return detail::log_bessel_i_series(v, z);
}

double bessel_i_ratio(double nu_num, double nu_den, double z) {
  const double a = effective_order(nu_num), b = effective_order(nu_den);
  if (!(z >= 0.0)) throw DomainError("Bessel argument must be nonnegative");
  if (a == b) return 1.0;
  if (z == 0.0) return a > b ? 0.0 : kInf;
  return std::exp(log_bessel_i(a, z) - log_bessel_i(b, z));
}

double log_bessel_k(double nu, double z) {
  if (!(nu > 0.0 && nu < 1.0)) throw DomainError("K_nu order must lie in (0,1)");
  if (!(z > 0.0)) throw DomainError("K_nu argument must be positive");
  if (std::isinf(z)) return -kInf;
  return z <= 2.0 ? detail::log_bessel_k_identity(nu, z) : detail::log_bessel_k_integral(nu, z);
}

double log_bessel_kk(double nu, double z) {
  if (!(nu > 0.0 && nu < 1.0)) throw DomainError("K_nu order must lie in (0,1)");
  if (z == 0.0) return 0.0;
  return std::log(2.0) + nu * std::log(0.5 * z) + log_bessel_k(nu, z) - log_gamma(nu);
}

double bessel_kk(double nu, double z) { return std::exp(log_bessel_kk(nu, z)); }

double log_bessel_pmf(double nu, double z, std::int64_t n) {
  if (nu < -1.0) throw DomainError("Bessel order below -1");
  if (!(z >= 0.0)) throw DomainError("Bessel argument must be nonnegative");
  if (n < 0) return -kInf;
  if (z == 0.0) return n == 0 ? 0.0 : -kInf;
  if (nu == -1.0 && n == 0) return -kInf;
  const double dn = static_cast<double>(n);
  return (2.0 * dn + nu) * std::log(0.5 * z) - log_gamma(dn + 1.0) - log_gamma(dn + nu + 1.0) -
         log_bessel_i(nu, z);
}

double bessel_pmf(double nu, double z, std::int64_t n) { return std::exp(log_bessel_pmf(nu, z, n)); }

std::int64_t sample_bessel(double nu, double z, Rng& rng) {
  if (nu < -1.0) throw DomainError("Bessel order below -1");
  if (!(z >= 0.0)) throw DomainError("Bessel argument must be nonnegative");
  if (z == 0.0) return 0;
  const double q = 0.25 * z * z;
  const std::int64_t lo = nu == -1.0 ? 1 : 0;
  // Mode: largest n with (n)(n+nu) <= q, i.e. pmf(n)/pmf(n-1) >= 1.
  const double root = 0.5 * (-nu + std::sqrt(nu * nu + 4.0 * q));
  const std::int64_t mode = std::max<std::int64_t>(lo, static_cast<std::int64_t>(std::floor(root)));
  const double pm = bessel_pmf(nu, z, mode);

  // Window of pmf values around the mode, then inverse CDF from the left.
  std::vector<double> left;  // pmf(mode-1), pmf(mode-2), ...
  double p = pm;
  for (std::int64_t n = mode; n > lo; --n) {
    p *= n * (n + nu) / q;
    if (p < 1e-18 * pm) break;
    left.push_back(p);
  }
  const double u = uniform01(rng);
  double cum = 0.0;
  for (std::size_t i = left.size(); i-- > 0;) {
    cum += left[i];
    if (u <= cum) return mode - static_cast<std::int64_t>(i) - 1;
  }
  p = pm;
  for (std::int64_t n = mode;; ++n) {
    cum += p;
    if (u <= cum) return n;
    p *= q / ((n + 1.0) * (n + 1.0 + nu));
    if (p < 1e-300 && cum > 1.0 - 1e-14) return n + 1;
  }
}

std::vector<double> sample_pd_sticks(double alpha, double mass, double epsilon, Rng& rng) {
  if (!(alpha >= 0.0)) throw DomainError("Poisson-Dirichlet parameter must be nonnegative");
  if (!(mass > 0.0) || !(epsilon > 0.0)) throw DomainError("stick mass and epsilon must be positive");
  if (alpha == 0.0) return {mass};
  std::vector<double> sticks;
  double remaining = mass;
  while (remaining >= epsilon * mass) {
    // Beta(1, alpha) fraction
    const double v = -std::expm1(std::log(uniform01(rng)) / alpha);
    const double d = v * remaining;
    if (!(d > 0.0)) continue;
    sticks.push_back(d);
    remaining -= d;
  }
  if (remaining > 0.0) sticks.push_back(remaining);
  return sticks;
}

}  // namespace repel

#pragma once

#include <cstdint>
#include <vector>

#include "repel/rng.hpp"

namespace repel {

// log Γ(x) for x > 0; reentrant.
double log_gamma(double x);

// log I_nu(z). nu >= -1 (negative integer orders alias to |nu|); z > 0, or z = 0 with nu = 0.
double log_bessel_i(double nu, double z);
// I_num(z) / I_den(z) in log scale, with analytic limits at z = 0.
double bessel_i_ratio(double nu_num, double nu_den, double z);

// log K_nu(z) for 0 < nu < 1, z > 0.
double log_bessel_k(double nu, double z);
// log of 2 (z/2)^nu K_nu(z) / Γ(nu); tends to 0 as z -> 0.
double log_bessel_kk(double nu, double z);
double bessel_kk(double nu, double z);

// Discrete Bessel(nu, z) law on {0,1,2,...}; Dirac at 0 when z = 0.
double log_bessel_pmf(double nu, double z, std::int64_t n);
double bessel_pmf(double nu, double z, std::int64_t n);
std::int64_t sample_bessel(double nu, double z, Rng& rng);

// Size-biased stick breaking with Beta(1, alpha) fractions; leftover below
// epsilon * mass is appended as a final stick. alpha = 0 gives [mass].
std::vector<double> sample_pd_sticks(double alpha, double mass, double epsilon, Rng& rng);

namespace detail {
double log_bessel_i_series(double nu, double z);
double log_bessel_i_asymptotic(double nu, double z);
double log_bessel_k_identity(double nu, double z);
double log_bessel_k_integral(double nu, double z);
}  // namespace detail

}  // namespace repel

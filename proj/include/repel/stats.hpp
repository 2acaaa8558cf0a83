#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace repel {

enum class Verdict { Pass, Fail, Skip };

struct TestReport {
  std::string name;
  double statistic = 0.0;
  std::optional<double> p_value;
  std::optional<double> sigma;  // |deviation| in standard errors
  std::size_t n1 = 0, n2 = 0;
  Verdict verdict = Verdict::Skip;
  std::uint64_t seed = 0;
  std::string detail;
};

inline constexpr double kPThreshold = 0.01;
inline constexpr double kSigmaThreshold = 3.0;

const char* verdict_name(Verdict v);
// PASS iff p > threshold, or |sigma| < 3 when only a deviation is available.
Verdict decide(const TestReport& r);
TestReport finalize(TestReport r);

// Tolerance check for deterministic identities.
TestReport tolerance_report(std::string name, double max_error, double tolerance);
TestReport bool_report(std::string name, bool ok, std::string detail = {});

double kolmogorov_q(double lambda);
double chi_square_sf(double x, double dof);

TestReport ks_two_sample(std::vector<double> a, std::vector<double> b, std::string name = "ks2");
TestReport ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf, std::string name = "ks1");
// Goodness of fit of integer samples to a pmf; tails merged until expected >= 5 per bin.
TestReport chi_square_pmf(const std::vector<std::int64_t>& samples, const std::function<double(std::int64_t)>& pmf,
                          std::string name = "chi2");
// Homogeneity of two integer samples.
TestReport chi_square_two_sample(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
                                 std::string name = "chi2-2s");
// Observed counts against expected probabilities per category.
TestReport chi_square_counts(const std::vector<double>& observed, const std::vector<double>& probs,
                             std::string name = "chi2");
TestReport z_report(std::string name, double observed, double expected, double std_error);
TestReport binomial_report(std::string name, std::size_t successes, std::size_t n, double p);

double wasserstein_1d(std::vector<double> a, std::vector<double> b);

double mean(const std::vector<double>& a);
double variance(const std::vector<double>& a);

std::string reports_csv(const std::vector<TestReport>& reports);
std::string reports_table(const std::vector<TestReport>& reports);
bool all_pass(const std::vector<TestReport>& reports);

}  // namespace repel

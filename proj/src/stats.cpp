#include "repel/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "repel/errors.hpp"

namespace repel {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    default: return "SKIP";
  }
}

Verdict decide(const TestReport& r) {
  if (r.p_value) return *r.p_value > kPThreshold ? Verdict::Pass : Verdict::Fail;
  if (r.sigma) return std::abs(*r.sigma) < kSigmaThreshold ? Verdict::Pass : Verdict::Fail;
  return Verdict::Skip;
}

TestReport finalize(TestReport r) {
  r.verdict = decide(r);
  return r;
}

TestReport tolerance_report(std::string name, double max_error, double tolerance) {
  TestReport r;
  r.name = std::move(name);
  r.statistic = max_error;
  r.verdict = (max_error <= tolerance) ? Verdict::Pass : Verdict::Fail;
  char buf[64];
  std::snprintf(buf, sizeof buf, "tol=%.1e", tolerance);
  r.detail = buf;
  return r;
}

TestReport bool_report(std::string name, bool ok, std::string detail) {
  TestReport r;
  r.name = std::move(name);
  r.statistic = ok ? 1.0 : 0.0;
  r.verdict = ok ? Verdict::Pass : Verdict::Fail;
  r.detail = std::move(detail);
  return r;
}

double kolmogorov_q(double lambda) {
  if (lambda < 1e-3) return 1.0;
  if (lambda < 1.18) {
    // small-argument form: 1 - sqrt(2π)/λ Σ exp(-(2k-1)^2 π^2 / (8 λ^2))
    const double c = -M_PI * M_PI / (8.0 * lambda * lambda);
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) s += std::exp(c * (2 * k - 1) * (2 * k - 1));
    return std::clamp(1.0 - std::sqrt(2.0 * M_PI) / lambda * s, 0.0, 1.0);
  }
  double s = 0.0, sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double t = std::exp(-2.0 * k * k * lambda * lambda);
    s += sign * t;
    sign = -sign;
    if (t < 1e-18) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

double chi_square_sf(double x, double dof) {
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

TestReport ks_two_sample(std::vector<double> a, std::vector<double> b, std::string name) {
  if (a.size() < 100 || b.size() < 100) throw TooFewSamples("KS test needs at least 100 samples per side");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = a.size(), nb = b.size();
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double ne = na * nb / (na + nb);
  const double sq = std::sqrt(ne);
  TestReport r;
  r.name = std::move(name);
  r.statistic = d;
  r.p_value = kolmogorov_q((sq + 0.12 + 0.11 / sq) * d);
  r.n1 = a.size();
  r.n2 = b.size();
  return finalize(r);
}

TestReport ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf, std::string name) {
  if (a.size() < 100) throw TooFewSamples("KS test needs at least 100 samples");
  std::sort(a.begin(), a.end());
  const double n = a.size();
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double f = cdf(a[i]);
    d = std::max({d, std::abs((i + 1) / n - f), std::abs(f - i / n)});
  }
  const double sq = std::sqrt(n);
  TestReport r;
  r.name = std::move(name);
  r.statistic = d;
  r.p_value = kolmogorov_q((sq + 0.12 + 0.11 / sq) * d);
  r.n1 = a.size();
  return finalize(r);
}

namespace {

// Merge adjacent categories (in order) until every merged expected count >= 5.
void merge_bins(std::vector<double>& obs, std::vector<double>& expct) {
  std::vector<double> mo, me;
  double co = 0.0, ce = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    co += obs[i];
    ce += expct[i];
    if (ce >= 5.0) {
      mo.push_back(co);
      me.push_back(ce);
      co = ce = 0.0;
    }
  }
  if (ce > 0.0 || co > 0.0) {
    if (me.empty()) {
      mo.push_back(co);
      me.push_back(ce);
    } else {
      mo.back() += co;
      me.back() += ce;
    }
  }
  obs.swap(mo);
  expct.swap(me);
}

}  // namespace

TestReport chi_square_counts(const std::vector<double>& observed, const std::vector<double>& probs, std::string name) {
  double n = std::accumulate(observed.begin(), observed.end(), 0.0);
  if (n < 100) throw TooFewSamples("chi-square test needs at least 100 samples");
  double ptot = std::accumulate(probs.begin(), probs.end(), 0.0);
  std::vector<double> obs = observed, ex(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) ex[i] = probs[i] * n;
  // Mass outside the listed categories is folded into the last one.
  if (!ex.empty() && ptot < 1.0) ex.back() += (1.0 - ptot) * n;
  merge_bins(obs, ex);
  double stat = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (ex[i] <= 0.0) {
      if (obs[i] > 0.0) stat = INFINITY;
      continue;
    }
    stat += (obs[i] - ex[i]) * (obs[i] - ex[i]) / ex[i];
  }
  TestReport r;
  r.name = std::move(name);
  r.statistic = stat;
  r.n1 = static_cast<std::size_t>(n);
  const double dof = static_cast<double>(obs.size()) - 1.0;
  r.p_value = dof < 1.0 ? 1.0 : chi_square_sf(stat, dof);
  char buf[48];
  std::snprintf(buf, sizeof buf, "bins=%zu", obs.size());
  r.detail = buf;
  return finalize(r);
}

TestReport chi_square_pmf(const std::vector<std::int64_t>& samples, const std::function<double(std::int64_t)>& pmf,
                          std::string name) {
  if (samples.size() < 100) throw TooFewSamples("chi-square test needs at least 100 samples");
  const std::int64_t hi = *std::max_element(samples.begin(), samples.end());
  const std::int64_t lo = std::min<std::int64_t>(0, *std::min_element(samples.begin(), samples.end()));
  std::vector<double> obs(static_cast<std::size_t>(hi - lo + 1), 0.0), probs(obs.size(), 0.0);
  for (auto s : samples) obs[static_cast<std::size_t>(s - lo)] += 1.0;
  double ptot = 0.0;
  for (std::int64_t k = lo; k <= hi; ++k) {
    probs[static_cast<std::size_t>(k - lo)] = pmf(k);
    ptot += probs[static_cast<std::size_t>(k - lo)];
  }
  if (ptot <= 0.0) throw DomainError("chi-square: pmf has no mass on the sample support");
  return chi_square_counts(obs, probs, std::move(name));
}

TestReport chi_square_two_sample(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
                                 std::string name) {
  if (a.size() < 100 || b.size() < 100) throw TooFewSamples("chi-square test needs at least 100 samples per side");
  std::map<std::int64_t, std::pair<double, double>> cnt;
  for (auto v : a) cnt[v].first += 1.0;
  for (auto v : b) cnt[v].second += 1.0;
  const double na = a.size(), nb = b.size(), n = na + nb;
  // merge ordered categories until the smaller expected count reaches 5
  std::vector<std::pair<double, double>> bins;
  std::pair<double, double> acc{0, 0};
  const double fmin = std::min(na, nb) / n;
  for (auto& [k, c] : cnt) {
    acc.first += c.first;
    acc.second += c.second;
    if ((acc.first + acc.second) * fmin >= 5.0) {
      bins.push_back(acc);
      acc = {0, 0};
    }
  }
  if (acc.first + acc.second > 0) {
    if (bins.empty()) bins.push_back(acc);
    else {
      bins.back().first += acc.first;
      bins.back().second += acc.second;
    }
  }
  double stat = 0.0;
  for (auto& [oa, ob] : bins) {
    const double t = oa + ob;
    const double ea = t * na / n, eb = t * nb / n;
    stat += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
  }
  TestReport r;
  r.name = std::move(name);
  r.statistic = stat;
  r.n1 = a.size();
  r.n2 = b.size();
  const double dof = static_cast<double>(bins.size()) - 1.0;
  r.p_value = dof < 1.0 ? 1.0 : chi_square_sf(stat, dof);
  char buf[48];
  std::snprintf(buf, sizeof buf, "bins=%zu", bins.size());
  r.detail = buf;
  return finalize(r);
}

TestReport z_report(std::string name, double observed, double expected, double std_error) {
  TestReport r;
  r.name = std::move(name);
  r.statistic = observed;
  r.sigma = std_error > 0.0 ? (observed - expected) / std_error : (observed == expected ? 0.0 : INFINITY);
  char buf[96];
  std::snprintf(buf, sizeof buf, "expected=%.6g se=%.3g", expected, std_error);
  r.detail = buf;
  return finalize(r);
}

TestReport binomial_report(std::string name, std::size_t successes, std::size_t n, double p) {
  const double se = std::sqrt(n * p * (1.0 - p));
  TestReport r = z_report(std::move(name), static_cast<double>(successes), n * p, se);
  r.n1 = n;
  return r;
}

double wasserstein_1d(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw TooFewSamples("Wasserstein distance needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  // ∫ |F_a - F_b| over the merged support
  const double na = a.size(), nb = b.size();
  std::size_t i = 0, j = 0;
  double x = std::min(a[0], b[0]), w = 0.0;
  while (i < a.size() || j < b.size()) {
    double next;
    if (j >= b.size() || (i < a.size() && a[i] <= b[j])) next = a[i];
    else next = b[j];
    w += std::abs(i / na - j / nb) * (next - x);
    x = next;
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
  }
  return w;
}

double mean(const std::vector<double>& a) {
  return a.empty() ? 0.0 : std::accumulate(a.begin(), a.end(), 0.0) / a.size();
}

double variance(const std::vector<double>& a) {
  if (a.size() < 2) return 0.0;
  const double m = mean(a);
  double s = 0.0;
  for (double v : a) s += (v - m) * (v - m);
  return s / (a.size() - 1);
}

std::string reports_csv(const std::vector<TestReport>& reports) {
  std::ostringstream os;
  os << "name,statistic,p_value,sigma,n1,n2,verdict,seed,detail\n";
  for (const auto& r : reports) {
    os << r.name << ',' << r.statistic << ',';
    if (r.p_value) os << *r.p_value;
    os << ',';
    if (r.sigma) os << *r.sigma;
    os << ',' << r.n1 << ',' << r.n2 << ',' << verdict_name(r.verdict) << ',' << r.seed << ",\"" << r.detail << "\"\n";
  }
  return os.str();
}

std::string reports_table(const std::vector<TestReport>& reports) {
  std::ostringstream os;
  char buf[512];
  for (const auto& r : reports) {
    char q[48];
    if (r.p_value) std::snprintf(q, sizeof q, "p=%.4f", *r.p_value);
    else if (r.sigma) std::snprintf(q, sizeof q, "sigma=%.3f", *r.sigma);
    else std::snprintf(q, sizeof q, "stat=%.3g", r.statistic);
    std::snprintf(buf, sizeof buf, "  [%s] %-58s %-16s %s\n", verdict_name(r.verdict), r.name.c_str(), q,
                  r.detail.c_str());
    os << buf;
  }
  return os.str();
}

bool all_pass(const std::vector<TestReport>& reports) {
  for (const auto& r : reports)
    if (r.verdict == Verdict::Fail) return false;
  return true;
}

}  // namespace repel

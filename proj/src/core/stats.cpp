#include "core/stats.hpp"

#include <algorithm>

#include "core/market.hpp"

namespace sc {

namespace {

constexpr double kTieSlack = 1e-7;  // relative slack when comparing point probabilities

double lchoose(long long n, long long k) {
  return std::lgamma(static_cast<double>(n + 1)) - std::lgamma(static_cast<double>(k + 1)) -
         std::lgamma(static_cast<double>(n - k + 1));
}

}  // namespace

double fisher_exact(long long a, long long b, long long c, long long d) {
  if (a < 0 || b < 0 || c < 0 || d < 0)
    throw Error(Errc::validation, "fisher_exact: cell counts must be non-negative");
  long long r1 = a + b, r2 = c + d, c1 = a + c, c2 = b + d;
  if (r1 == 0 || r2 == 0 || c1 == 0 || c2 == 0)
    throw Error(Errc::validation, "fisher_exact: empty margin");
  long long n = r1 + r2;
  long long lo = std::max(0LL, c1 - r2), hi = std::min(r1, c1);
  double denom = lchoose(n, c1);
  double lp_obs = lchoose(r1, a) + lchoose(r2, c1 - a) - denom;
  double total = 0.0;
  long long included = 0;
  for (long long x = lo; x <= hi; ++x) {
    double lp = lchoose(r1, x) + lchoose(r2, c1 - x) - denom;
    if (lp <= lp_obs + kTieSlack) {
      total += std::exp(lp);
      ++included;
    }
  }
  // the whole support sums to probability one by definition; return that
  // exactly rather than the accumulated rounding of the log-pmf terms
  if (included == hi - lo + 1) return 1.0;
  return std::min(total, 1.0);
}

double binomial_test(long long k, long long n, double p0) {
  if (n < 1 || k < 0 || k > n)
    throw Error(Errc::validation, "binomial_test: need 0 <= k <= n, n >= 1");
  if (!(p0 >= 0.0 && p0 <= 1.0))
    throw Error(Errc::validation, "binomial_test: p0 must lie in [0, 1]");
  if (p0 == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p0 == 1.0) return k == n ? 1.0 : 0.0;
  double lp = std::log(p0), lq = std::log1p(-p0);
  auto lpmf = [&](long long x) { return lchoose(n, x) + x * lp + (n - x) * lq; };
  double base = lpmf(k);
  double total = 0.0;
  long long included = 0;
  for (long long x = 0; x <= n; ++x) {
    double v = lpmf(x);
    if (v <= base + kTieSlack) {
      total += std::exp(v);
      ++included;
    }
  }
  if (included == n + 1) return 1.0;  // full support: exactly one
  return std::min(total, 1.0);
}

double paired_difference_test(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty())
    throw Error(Errc::validation, "paired test needs two equally long non-empty streams");
  long long le = 0, ge = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    double d = a[k] - b[k];
    if (d <= 0) ++le;
    if (d >= 0) ++ge;
  }
  double n = static_cast<double>(a.size());
  double p = 2.0 * std::min(le / n, ge / n);
  return std::min(p, 1.0);
}

}  // namespace sc

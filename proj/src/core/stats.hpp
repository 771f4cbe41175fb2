#pragma once

#include <cmath>
#include <vector>

namespace sc {

// Kahan-Babuska (Neumaier) compensated summation. mean() applies an
// fma-corrected division so that averaging T identical values returns that
// value bit-exactly.
class NeumaierSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

  double mean(long long count) const {
    double t = static_cast<double>(count);
    double q = sum_ / t;
    double rem = std::fma(-q, t, sum_) + comp_;
    return q + rem / t;
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Exact two-sided tests. Both sum every outcome whose point probability is
// at most the observed one's (with a tiny relative slack against ties lost
// to rounding).

// 2x2 table {{a, b}, {c, d}} with fixed margins.
double fisher_exact(long long a, long long b, long long c, long long d);

// k successes out of n at null success probability p0.
double binomial_test(long long k, long long n, double p0);

// Sign-style test for paired draw streams: p = 2 * min(share(diff <= 0),
// share(diff >= 0)), clipped to 1. Identical streams give p = 1.
double paired_difference_test(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace sc

#include <doctest.h>

#include <random>
#include <vector>

#include "core/market.hpp"
#include "core/stats.hpp"

TEST_CASE("compensated sums survive adversarial orderings") {
  sc::NeumaierSum sum;
  sum.add(1.0);
  sum.add(1e100);
  sum.add(1.0);
  sum.add(-1e100);
  CHECK(sum.value() == 2.0);  // naive summation returns 0 here
}

TEST_CASE("compensated mean of identical values is bit-exact") {
  for (double x : {49.0 / 18.0, 0.1, 1.0 / 3.0, 2.7182818284590452}) {
    for (long long count : {2LL, 7LL, 36LL, 1000LL}) {
      sc::NeumaierSum sum;
      for (long long k = 0; k < count; ++k) sum.add(x);
      CHECK(sum.mean(count) == x);
    }
  }
}

TEST_CASE("compensated mean tracks long accumulations closely") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  sc::NeumaierSum sum;
  long double exact = 0.0L;
  for (int k = 0; k < 100000; ++k) {
    double x = u(rng);
    sum.add(x);
    exact += static_cast<long double>(x);
  }
  CHECK(sum.value() == doctest::Approx(static_cast<double>(exact)).epsilon(1e-15));
}

TEST_CASE("fisher exact test matches reference values") {
  // 28-of-108 vs 31-of-108: far from significant
  CHECK(sc::fisher_exact(28, 80, 31, 77) == doctest::Approx(0.760227831479957).epsilon(1e-9));
  // perfectly symmetric tables cannot discriminate at all
  CHECK(sc::fisher_exact(10, 10, 10, 10) == doctest::Approx(1.0));
  CHECK(sc::fisher_exact(28, 80, 28, 80) == doctest::Approx(1.0));
  // transposing the table leaves the p-value unchanged
  CHECK(sc::fisher_exact(28, 31, 80, 77) ==
        doctest::Approx(sc::fisher_exact(28, 80, 31, 77)).epsilon(1e-9));
  // a strongly diagonal table is very unlikely under independence
  CHECK(sc::fisher_exact(20, 1, 2, 19) == doctest::Approx(1.724823814172531e-08).epsilon(1e-7));
  // zero cells are fine
  CHECK(sc::fisher_exact(0, 5, 5, 0) == doctest::Approx(0.00793650793650794).epsilon(1e-9));
  CHECK_THROWS_AS(sc::fisher_exact(-1, 2, 3, 4), sc::Error);
  CHECK_THROWS_AS(sc::fisher_exact(0, 0, 0, 0), sc::Error);
}

TEST_CASE("binomial test matches reference values") {
  // zero successes in 108 trials at 5%
  CHECK(sc::binomial_test(0, 108, 0.05) ==
        doctest::Approx(0.006860713462530307).epsilon(1e-9));
  CHECK(sc::binomial_test(5, 10, 0.5) == doctest::Approx(1.0));
  CHECK(sc::binomial_test(7, 10, 0.5) == doctest::Approx(0.3437499999999999).epsilon(1e-9));
  CHECK(sc::binomial_test(50, 100, 0.3) ==
        doctest::Approx(2.7720542263007482e-05).epsilon(1e-7));
  // degenerate nulls
  CHECK(sc::binomial_test(0, 10, 0.0) == doctest::Approx(1.0));
  CHECK(sc::binomial_test(1, 10, 0.0) == doctest::Approx(0.0));
  CHECK(sc::binomial_test(10, 10, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(sc::binomial_test(11, 10, 0.5), sc::Error);
  CHECK_THROWS_AS(sc::binomial_test(1, 10, 1.5), sc::Error);
}

TEST_CASE("paired difference test") {
  std::vector<double> a = {1, 2, 3, 4};
  CHECK(sc::paired_difference_test(a, a) == doctest::Approx(1.0));
  // one-sided domination: every diff positive
  std::vector<double> b = {0, 1, 2, 3};
  CHECK(sc::paired_difference_test(a, b) == doctest::Approx(0.0));
  // balanced signs
  std::vector<double> c = {2, 1, 4, 3};
  CHECK(sc::paired_difference_test(a, c) == doctest::Approx(1.0));
  CHECK_THROWS_AS(sc::paired_difference_test(a, {1.0}), sc::Error);
  CHECK_THROWS_AS(sc::paired_difference_test({}, {}), sc::Error);
}

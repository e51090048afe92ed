#include "doctest.h"

#include <cmath>

#include "netsim/bounds.hpp"
#include "support.hpp"

using namespace netsim;

TEST_SUITE_BEGIN("bounds");

TEST_CASE("si bound formulas") {
  const BoundResult r = si_bound({900, 4, 0, 1.0, 0.01});
  CHECK(r.C == doctest::Approx(14400.0 * std::exp(2.0)));
  CHECK(r.C == doctest::Approx(106402.4).epsilon(1e-5));
  CHECK(r.K == doctest::Approx((std::exp(4.0) - 1.0) / 4.0));
  CHECK(r.K == doctest::Approx(13.3995).epsilon(1e-4));
  CHECK(r.bound == doctest::Approx(r.C * r.K * 0.01));
  CHECK(r.bound == doctest::Approx(14257.4).epsilon(1e-4));
  CHECK(r.vacuous);  // far beyond n = 900

  CHECK_THROWS_AS(si_bound({900, 4, 0, 1.0, 1.5}), std::invalid_argument);
}

TEST_CASE("sis bound formulas") {
  const BoundResult r = sis_bound({900, 4, 0.2, 1.0, 0.01});
  CHECK(r.C == doctest::Approx(3600.0 * (4.0 * std::exp(2.0) + 0.2)));
  CHECK(r.C == doctest::Approx(107122.4).epsilon(1e-4));
  CHECK(r.K == doctest::Approx((std::exp(4.2) - 1.0) / 4.2));
  CHECK(r.K == doctest::Approx(15.64).epsilon(1e-3));

  // mu = 0 collapses to the SI constants
  const BoundResult z = sis_bound({900, 4, 0.0, 1.0, 0.01});
  const BoundResult s = si_bound({900, 4, 0.0, 1.0, 0.01});
  CHECK(z.K == doctest::Approx(s.K));
  CHECK(z.C == doctest::Approx(s.C));
}

TEST_CASE("bounds are monotone in n, k, T and h") {
  const BoundInputs base{200, 3, 0.1, 0.5, 0.05};
  const double b0 = sis_bound(base).bound;
  for (int i = 0; i < 4; ++i) {
    BoundInputs bumped = base;
    (i == 0 ? bumped.n : i == 1 ? bumped.k : i == 2 ? bumped.T : bumped.h) *= 1.3;
    if (bumped.h > 1) bumped.h = 1;
    CHECK(sis_bound(bumped).bound > b0);
    CHECK(si_bound(bumped).bound > si_bound(base).bound);
  }
}

TEST_CASE("log_gamma against arbitrary-precision references") {
  // reference values computed offline at 40 significant digits
  static constexpr struct {
    double x;
    double lg;
  } kRefs[] = {
      {0.5, 0.5723649429247000870717},    {0.75, 0.2032809514312953714814},
      {1.0, 0.0},                         {1.5, -0.1207822376352452223455},
      {2.0, 0.0},                         {2.5, 0.2846828704729191596325},
      {3.25, 0.9358019311087253582585},   {5.0, 3.178053830347945619647},
      {7.5, 7.534364236758732955158},     {9.99, 12.77931521435019288046},
      {10.0, 12.80182748008146961121},    {12.345, 18.3501469802931979769},
      {25.0, 54.78472939811231919009},    {63.5, 198.935764929929476647},
      {100.0, 359.134205369575398776},    {1000.5, 5908.674175848677488684},
      {12345.0, 103953.5324720478963945}, {100000.0, 1051287.708973656894901},
      {3200000.0, 44731709.80647173125633},
      {10000000.0, 151180949.3694739139401},
  };
  for (const auto& ref : kRefs) {
    const double err = std::abs(log_gamma(ref.x) - ref.lg);
    CHECK(err <= 1e-12 * std::max(1.0, std::abs(ref.lg)));
  }
  CHECK_THROWS_AS(log_gamma(0.0), std::invalid_argument);
  CHECK_THROWS_AS(log_gamma(-1.0), std::invalid_argument);
}

TEST_CASE("nb mean") {
  CHECK(nb_mean({3, 0.5}) == doctest::Approx(3.0));
  CHECK(nb_mean({1, 0.0}) == doctest::Approx(0.0));
  const double p = -std::expm1(-1.0);  // 1 - 1/e
  CHECK(nb_mean({0.5, p}) == doctest::Approx(0.5 * (std::exp(1.0) - 1.0)));
  CHECK(nb_mean({0.5, p}) == doctest::Approx(0.8591).epsilon(1e-4));
  CHECK_THROWS_AS(nb_mean({2, 1.0}), std::invalid_argument);
}

TEST_CASE("nb pmf and cdf") {
  CHECK(nb_cdf({1, 0.5}, 0) == doctest::Approx(0.5));  // geometric
  // r=2, p=0.5 by hand: pmf(0)=0.25, pmf(1)=0.25
  CHECK(nb_pmf({2, 0.5}, 0) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(nb_pmf({2, 0.5}, 1) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(nb_cdf({2, 0.5}, 1) == doctest::Approx(0.5).epsilon(1e-9));

  // normalization under adaptive truncation
  for (const NegBinomial d : {NegBinomial{0.5, 0.3}, NegBinomial{2.5, 0.7},
                              NegBinomial{7.0, 0.2}}) {
    double sum = 0;
    std::uint64_t y = 0;
    while (true) {
      const double term = nb_pmf(d, y);
      sum += term;
      if (term < 1e-13 && static_cast<double>(y) > nb_mean(d)) break;
      ++y;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(nb_cdf(d, y) == doctest::Approx(1.0).epsilon(1e-9));
  }

  // monotone in y; pointwise decreasing as p grows
  const NegBinomial lo{1.7, 0.3}, hi{1.7, 0.5};
  double prev = -1;
  for (std::uint64_t y = 0; y < 30; ++y) {
    const double c = nb_cdf(lo, y);
    CHECK(c >= prev);
    prev = c;
    CHECK(nb_cdf(hi, y) <= c + 1e-12);
  }
}

TEST_CASE("nb sampling agrees with the analytic mean") {
  rng::Stream stream(15);
  const NegBinomial d{0.5, -std::expm1(-1.0)};
  const int n = 200000;
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = static_cast<double>(nb_sample(stream, d));
  const auto m = testsup::mean_stats(xs);
  CHECK(std::abs(m.mean - nb_mean(d)) < 3 * m.stderr_mean);
  CHECK(nb_sample(stream, {0.0, 0.5}) == 0);
  CHECK(nb_sample(stream, {2.0, 0.0}) == 0);
}

TEST_CASE("lemma S2 instances") {
  CHECK(lemma_s2_check(0.0, 0.5));  // equality 0 <= 0
  CHECK(lemma_s2_check(5.0, 1.0));  // e^5-1 = 147.4 <= 5 e^5 = 742.1
  CHECK_THROWS_AS(lemma_s2_check(-1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(lemma_s2_check(1.0, 1.5), std::invalid_argument);
}

TEST_CASE("lemma S3 instances") {
  CHECK(lemma_s3_check(2.0, 2.0, 5.0));   // a = b: exact zero
  CHECK(lemma_s3_check(1.0, 4.0, 0.0));   // t = 0: exact zero
  CHECK(lemma_s3_check(0.5, 2.0, -3.0));  // the lemma covers t <= 0
  CHECK_THROWS_AS(lemma_s3_check(3.0, 1.0, 0.5), std::invalid_argument);
}

TEST_SUITE_END();

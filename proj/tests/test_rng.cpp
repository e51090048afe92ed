#include "doctest.h"

#include <cmath>
#include <set>

#include "netsim/rng.hpp"
#include "support.hpp"

using namespace netsim;

TEST_SUITE_BEGIN("rng");

TEST_CASE("keyed draws are pure functions of their keys") {
  const auto k1 = rng::derive_key(7, rng::tag::edge, 3, 0);
  const auto k2 = rng::derive_key(7, rng::tag::edge, 3, 0);
  CHECK(k1 == k2);
  CHECK(rng::exp_from_key(k1) == rng::exp_from_key(k2));
  CHECK(rng::derive_key(7, rng::tag::edge, 3, 1) != k1);
  CHECK(rng::derive_key(7, rng::tag::edge, 4, 0) != k1);
  CHECK(rng::derive_key(8, rng::tag::edge, 3, 0) != k1);
  CHECK(rng::derive_key(7, rng::tag::recovery, 3, 0) != k1);
}

TEST_CASE("streams are reproducible and well ranged") {
  rng::Stream a(123), b(123);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.next_unit();
    CHECK(u == b.next_unit());
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
  rng::Stream c(123);
  for (int i = 0; i < 1000; ++i) CHECK(c.next_exponential() > 0.0);
}

TEST_CASE("unit and exponential moments") {
  rng::Stream s(99);
  const int n = 200000;
  std::vector<double> us(n), es(n);
  for (int i = 0; i < n; ++i) {
    us[i] = s.next_unit();
    es[i] = s.next_exponential();
  }
  const auto mu = testsup::mean_stats(us);
  CHECK(std::abs(mu.mean - 0.5) < 4 * mu.stderr_mean);
  CHECK(mu.sd == doctest::Approx(std::sqrt(1.0 / 12)).epsilon(0.02));
  const auto me = testsup::mean_stats(es);
  CHECK(std::abs(me.mean - 1.0) < 4 * me.stderr_mean);
  CHECK(me.sd == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("next_below stays in range and covers values") {
  rng::Stream s(5);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = s.next_below(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("gamma and poisson sampler moments") {
  rng::Stream s(31);
  const int n = 100000;
  std::vector<double> gs(n);
  for (int i = 0; i < n; ++i) gs[i] = rng::gamma_sample(s, 2.5);
  const auto mg = testsup::mean_stats(gs);
  CHECK(std::abs(mg.mean - 2.5) < 4 * mg.stderr_mean);
  CHECK(mg.sd == doctest::Approx(std::sqrt(2.5)).epsilon(0.03));

  std::vector<double> low_shape(n);
  for (int i = 0; i < n; ++i) low_shape[i] = rng::gamma_sample(s, 0.4);
  const auto ml = testsup::mean_stats(low_shape);
  CHECK(std::abs(ml.mean - 0.4) < 4 * ml.stderr_mean);

  std::vector<double> ps(n);
  for (int i = 0; i < n; ++i)
    ps[i] = static_cast<double>(rng::poisson_sample(s, 3.7));
  const auto mp = testsup::mean_stats(ps);
  CHECK(std::abs(mp.mean - 3.7) < 4 * mp.stderr_mean);
  CHECK(mp.sd == doctest::Approx(std::sqrt(3.7)).epsilon(0.03));

  // splitting path for large means
  std::vector<double> big(20000);
  for (auto& v : big) v = static_cast<double>(rng::poisson_sample(s, 150.0));
  const auto mb = testsup::mean_stats(big);
  CHECK(std::abs(mb.mean - 150.0) < 4 * mb.stderr_mean);
}

TEST_SUITE_END();

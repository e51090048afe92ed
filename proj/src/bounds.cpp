#include "netsim/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace netsim {

namespace {

void check_bound_inputs(const BoundInputs& in) {
  if (!(in.h > 0)) throw std::invalid_argument("bounds: h must be > 0");
  if (in.h > 1)
    throw std::invalid_argument("bounds: not established for h > 1");
  if (!(in.T > 0)) throw std::invalid_argument("bounds: T must be > 0");
  if (!(in.n > 0) || !(in.k >= 1))
    throw std::invalid_argument("bounds: need n > 0 and k >= 1");
}

}  // namespace

BoundResult si_bound(const BoundInputs& in) {
  check_bound_inputs(in);
  BoundResult r;
  r.C = in.n * in.k * in.k * std::exp(in.k - 2.0);
  r.K = (std::exp(in.k * in.T) - 1.0) / in.k;
  r.bound = r.C * r.K * in.h;
  r.vacuous = r.bound > in.n;
  return r;
}

BoundResult sis_bound(const BoundInputs& in) {
  check_bound_inputs(in);
  if (!(in.mu >= 0)) throw std::invalid_argument("bounds: mu must be >= 0");
  BoundResult r;
  r.C = in.n * in.k * (in.k * std::exp(in.k - 2.0) + in.mu);
  const double rate = in.k + in.mu;
  r.K = (std::exp(rate * in.T) - 1.0) / rate;
  r.bound = r.C * r.K * in.h;
  r.vacuous = r.bound > in.n;
  return r;
}

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("log_gamma: domain is x > 0");
  // Lift x into [10, inf): lgamma(x) = lgamma(x+m) - sum log(x+i).
  double shift = 0.0;
  while (x < 10.0) {
    shift += std::log(x);
    x += 1.0;
  }
  // Stirling series: (x-1/2)log x - x + log(2*pi)/2 + sum B_2j/(2j(2j-1)x^(2j-1)).
  static constexpr double kHalfLog2Pi = 0.91893853320467274178;
  static constexpr double kCoeff[] = {
      1.0 / 12.0,        -1.0 / 360.0,      1.0 / 1260.0,  -1.0 / 1680.0,
      1.0 / 1188.0,      -691.0 / 360360.0, 1.0 / 156.0,
  };
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 0.0;
  double power = inv;
  for (double c : kCoeff) {
    series += c * power;
    power *= inv2;
  }
  return (x - 0.5) * std::log(x) - x + kHalfLog2Pi + series - shift;
}

double nb_mean(const NegBinomial& d) {
  if (!(d.p < 1.0)) throw std::invalid_argument("nb: p must be < 1");
  if (!(d.p >= 0.0) || !(d.r >= 0.0))
    throw std::invalid_argument("nb: need r >= 0 and p in [0,1)");
  return d.r * d.p / (1.0 - d.p);
}

double nb_pmf(const NegBinomial& d, std::uint64_t y) {
  if (!(d.r >= 0.0) || !(d.p >= 0.0) || !(d.p < 1.0))
    throw std::invalid_argument("nb: need r >= 0 and p in [0,1)");
  if (d.r == 0.0 || d.p == 0.0) return y == 0 ? 1.0 : 0.0;
  const double yd = static_cast<double>(y);
  const double log_pmf = log_gamma(yd + d.r) - log_gamma(yd + 1.0) - log_gamma(d.r) +
                         yd * std::log(d.p) + d.r * std::log1p(-d.p);
  return std::exp(log_pmf);
}

double nb_cdf(const NegBinomial& d, std::uint64_t y) {
  double sum = 0.0;
  for (std::uint64_t j = 0; j <= y; ++j) sum += nb_pmf(d, j);
  return sum < 1.0 ? sum : 1.0;
}

std::uint64_t nb_sample(rng::Stream& stream, const NegBinomial& d) {
  if (!(d.p >= 0.0) || !(d.p < 1.0) || !(d.r >= 0.0))
    throw std::invalid_argument("nb: need r >= 0 and p in [0,1)");
  if (d.r == 0.0 || d.p == 0.0) return 0;
  const double mixture_rate = rng::gamma_sample(stream, d.r) * d.p / (1.0 - d.p);
  return rng::poisson_sample(stream, mixture_rate);
}

bool lemma_s2_check(double c, double h) {
  if (c < 0 || h < 0 || h > 1)
    throw std::invalid_argument("lemma S2: domain is c >= 0, 0 <= h <= 1");
  return std::expm1(c * h) <= h * c * std::exp(c);
}

bool lemma_s3_check(double a, double b, double t) {
  if (!(0 <= a && a <= b)) throw std::invalid_argument("lemma S3: need 0 <= a <= b");
  const double lhs = (b - a) * t - (std::exp(-a * t) - std::exp(-b * t));
  return lhs >= -1e-12;
}

}  // namespace netsim

#pragma once

#include <cstdint>

#include "netsim/rng.hpp"

namespace netsim {

struct BoundInputs {
  double n = 900;  // node count
  double k = 4;    // max degree
  double mu = 0;   // recovery rate (SIS)
  double T = 1;    // horizon = i*h
  double h = 0.01; // step size, must be <= 1 for the bounds to hold
};

struct BoundResult {
  double C = 0;
  double K = 0;
  double bound = 0;  // C*K*h
  bool vacuous = false;  // bound exceeds n, the largest possible error
};

// C = n k^2 e^(k-2), K = (1/k)(e^(kT)-1), bound = C*K*h. Requires h <= 1.
BoundResult si_bound(const BoundInputs& in);

// C = n k (k e^(k-2) + mu), K = (1/(k+mu))(e^((k+mu)T)-1), bound = C*K*h.
BoundResult sis_bound(const BoundInputs& in);

// log Gamma(x) for x >= 0.5: argument lift into [10, inf) followed by the
// Stirling series with Bernoulli-number correction terms. Relative error
// below 1e-12 across [0.5, 1e7] (checked against arbitrary-precision
// reference values in the tests).
double log_gamma(double x);

// Number of successes before r failures, success probability p.
struct NegBinomial {
  double r;  // real shape > 0
  double p;  // in [0, 1)
};

// r*p/(1-p)
double nb_mean(const NegBinomial& d);

// Gamma(y+r)/(y! Gamma(r)) * p^y * (1-p)^r via log_gamma
double nb_pmf(const NegBinomial& d, std::uint64_t y);

// sum of the pmf over 0..y
double nb_cdf(const NegBinomial& d, std::uint64_t y);

// Gamma-Poisson mixture; supports real r (r = 0 yields 0).
std::uint64_t nb_sample(rng::Stream& stream, const NegBinomial& d);

// exp(c*h) - 1 <= h*c*exp(c) for c >= 0, 0 <= h <= 1
bool lemma_s2_check(double c, double h);

// (b-a)*t - (exp(-a*t) - exp(-b*t)) >= 0 for 0 <= a <= b, any t
// (1e-12 slack for floating point)
bool lemma_s3_check(double a, double b, double t);

}  // namespace netsim

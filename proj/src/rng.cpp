#include "netsim/rng.hpp"

namespace netsim::rng {

double normal_sample(Stream& s) noexcept {
  // Box-Muller; the second variate of the pair is discarded.
  const double u1 = s.next_unit();
  const double u2 = s.next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

double gamma_sample(Stream& s, double shape) noexcept {
  if (shape < 1.0) {
    // Boost via Gamma(shape+1): Gamma(a) = Gamma(a+1) * U^(1/a)
    const double u = s.next_unit();
    return gamma_sample(s, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal_sample(s);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = s.next_unit();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::uint64_t poisson_sample(Stream& s, double mean) noexcept {
  if (mean <= 0.0) return 0;
  // Knuth's product method underflows for large means; split first.
  std::uint64_t total = 0;
  while (mean > 60.0) {
    total += poisson_sample(s, mean / 2.0);
    mean /= 2.0;
  }
  const double threshold = std::exp(-mean);
  std::uint64_t count = 0;
  double prod = s.next_unit();
  while (prod > threshold) {
    ++count;
    prod *= s.next_unit();
  }
  return total + count;
}

}  // namespace netsim::rng

#include "netsim/process.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "netsim/rng.hpp"

namespace netsim {

std::uint32_t InfectionState::infected_count() const noexcept {
  std::uint32_t c = 0;
  for (std::uint8_t b : bits_) c += b;
  return c;
}

std::string InfectionState::to_hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  const std::uint32_t n = size();
  std::string out((n + 3) / 4, '0');
  for (std::uint32_t c = 0; c < out.size(); ++c) {
    std::uint32_t v = 0;
    for (std::uint32_t b = 0; b < 4 && 4 * c + b < n; ++b)
      v |= static_cast<std::uint32_t>(bits_[4 * c + b]) << b;
    out[c] = digits[v];
  }
  return out;
}

InfectionState InfectionState::from_hex(std::uint32_t n, std::string_view hex) {
  if (hex.size() != (n + 3) / 4)
    throw std::invalid_argument("state: hex string length mismatch");
  InfectionState x(n);
  for (std::uint32_t c = 0; c < hex.size(); ++c) {
    const char ch = hex[c];
    std::uint32_t v;
    if (ch >= '0' && ch <= '9') v = ch - '0';
    else if (ch >= 'a' && ch <= 'f') v = ch - 'a' + 10;
    else throw std::invalid_argument("state: bad hex digit");
    for (std::uint32_t b = 0; b < 4; ++b) {
      const std::uint32_t j = 4 * c + b;
      if (v & (1u << b)) {
        if (j >= n) throw std::invalid_argument("state: bit beyond node count");
        x.infect(j);
      }
    }
  }
  return x;
}

std::uint32_t infected_neighbor_count(const Graph& g, const InfectionState& x,
                                      std::uint32_t j) {
  if (j >= g.node_count()) throw std::invalid_argument("n(j,x): node out of range");
  if (x.infected(j)) return 0;
  std::uint32_t count = 0;
  for (const HalfEdge& he : g.neighbors(j)) count += x.infected(he.to);
  return count;
}

std::uint64_t neighbor_count_l1_diff(const Graph& g, const InfectionState& x,
                                     const InfectionState& z) {
  std::uint64_t total = 0;
  for (std::uint32_t j = 0; j < g.node_count(); ++j) {
    const std::int64_t a = infected_neighbor_count(g, x, j);
    const std::int64_t b = infected_neighbor_count(g, z, j);
    total += static_cast<std::uint64_t>(a > b ? a - b : b - a);
  }
  return total;
}

bool dominates(const InfectionState& x, const InfectionState& z) {
  if (x.size() != z.size())
    throw std::invalid_argument("dominates: state length mismatch");
  for (std::uint32_t j = 0; j < x.size(); ++j)
    if (z.infected(j) && !x.infected(j)) return false;
  return true;
}

std::uint32_t l1_distance(const InfectionState& x, const InfectionState& z) {
  if (x.size() != z.size())
    throw std::invalid_argument("l1_distance: state length mismatch");
  std::uint32_t d = 0;
  for (std::uint32_t j = 0; j < x.size(); ++j) d += x.infected(j) != z.infected(j);
  return d;
}

InfectionState random_initial_state(const Graph& g, const InitSpec& init) {
  if (init.prevalence < 0.0 || init.prevalence > 1.0)
    throw std::invalid_argument("init: prevalence must be in [0,1]");
  const std::uint32_t n = g.node_count();
  const auto count =
      static_cast<std::uint32_t>(std::floor(init.prevalence * n + 0.5));

  rng::Stream stream(rng::derive_key(init.seed, rng::tag::init));
  std::vector<std::uint32_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0u);
  InfectionState x(n);
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::uint32_t>(stream.next_below(n - i));
    std::swap(ids[i], ids[j]);
    x.infect(ids[i]);
  }
  return x;
}

}  // namespace netsim

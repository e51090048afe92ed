#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "netsim/graph.hpp"

namespace netsim {

enum class ProcessKind { si, sis };

struct ProcessParams {
  ProcessKind kind = ProcessKind::si;
  double beta = 1.0;  // per-edge infection rate
  double mu = 0.0;    // per-node recovery rate, SIS only
};

inline void check_params(const ProcessParams& p) {
  if (!(p.beta > 0)) throw std::invalid_argument("process: beta must be > 0");
  if (p.kind == ProcessKind::sis && !(p.mu >= 0))
    throw std::invalid_argument("process: mu must be >= 0");
}

struct InitSpec {
  double prevalence = 0.1;  // fraction of nodes initially infected
  std::uint64_t seed = 0;
};

// Binary infection vector x over nodes 0..n-1.
class InfectionState {
 public:
  InfectionState() = default;
  explicit InfectionState(std::uint32_t n) : bits_(n, 0) {}

  std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(bits_.size()); }
  bool infected(std::uint32_t j) const { return bits_[j] != 0; }
  void infect(std::uint32_t j) { bits_[j] = 1; }
  void make_susceptible(std::uint32_t j) { bits_[j] = 0; }

  // |x|
  std::uint32_t infected_count() const noexcept;

  bool operator==(const InfectionState&) const = default;

  // Little-endian nibbles: hex digit c encodes nodes 4c..4c+3, node 4c
  // being the digit's least significant bit.
  std::string to_hex() const;
  static InfectionState from_hex(std::uint32_t n, std::string_view hex);

  const std::vector<std::uint8_t>& raw() const noexcept { return bits_; }

 private:
  std::vector<std::uint8_t> bits_;
};

// n(j,x): infected neighbors of susceptible j; defined as 0 for infected j.
std::uint32_t infected_neighbor_count(const Graph& g, const InfectionState& x,
                                      std::uint32_t j);

// sum_j |n(j,x) - n(j,z)|
std::uint64_t neighbor_count_l1_diff(const Graph& g, const InfectionState& x,
                                     const InfectionState& z);

// componentwise x >= z
bool dominates(const InfectionState& x, const InfectionState& z);

// |x - z| in the 1-norm
std::uint32_t l1_distance(const InfectionState& x, const InfectionState& z);

// Exactly round(prevalence*n) distinct nodes infected, uniform without
// replacement, reproducible from the seed. Rounding is half-up.
InfectionState random_initial_state(const Graph& g, const InitSpec& init);

}  // namespace netsim

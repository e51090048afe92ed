#pragma once

#include <cstdint>
#include <vector>

#include "netsim/graph.hpp"
#include "netsim/process.hpp"
#include "netsim/rng.hpp"

namespace netsim {

enum class EventKind : std::uint8_t { infection, recovery };

struct Event {
  double time;
  std::uint32_t node;
  EventKind kind;
};

struct SimCounters {
  std::uint64_t events_total = 0;
  // Activations of susceptible-infected edge timers, including the initial
  // activation set. Recovery timers are not counted.
  std::uint64_t timers_created = 0;
  std::uint64_t steps = 0;
};

struct Trajectory {
  InfectionState initial;
  InfectionState final_state;
  std::vector<Event> events;  // empty unless record_events
  double t_end = 0;
  SimCounters counters;
  bool events_recorded = false;
};

struct DesOptions {
  bool record_events = true;
};

// Exact CTMC sample of the SI/SIS contact process (Gillespie direct method).
// From state x the total rate is beta*sum_{j in S(x)} n(j,x) plus, for SIS,
// mu*|x|; the next event is an infection of susceptible j with probability
// proportional to beta*n(j,x) or a recovery of a uniform infected node.
Trajectory run_des(const Graph& g, const ProcessParams& p, const InfectionState& x0,
                   double t_end, rng::Stream& stream, const DesOptions& opt = {});

// State after all events with time <= t (cadlag). Requires a trajectory
// recorded with record_events.
InfectionState state_at(const Trajectory& tr, double t);

// Event-log dump: header "time,node,kind", times with 9 significant digits.
std::string trajectory_csv(const Trajectory& tr);

}  // namespace netsim

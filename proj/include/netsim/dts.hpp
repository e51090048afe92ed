#pragma once

#include <cstdint>
#include <vector>

#include "netsim/des.hpp"
#include "netsim/graph.hpp"
#include "netsim/process.hpp"
#include "netsim/rng.hpp"

namespace netsim {

enum class StepPolicy {
  truncate,       // floor(t_end/h) full steps
  partial_final,  // plus one shorter step covering the remainder
};

struct DtsConfig {
  double h = 0.01;
  double t_end = 1.0;
  StepPolicy policy = StepPolicy::truncate;
};

struct DtsTrajectory {
  std::vector<InfectionState> states;  // X_0..X_M when keep_states
  std::vector<double> times;           // observation time per kept state
  InfectionState final_state;
  double h = 0;
  // events_total = node flips, steps = steps taken, timers_created = S-I
  // edges summed over step starts (one timer per active edge per step).
  SimCounters counters;
};

struct DtsOptions {
  bool keep_states = true;
};

// One synchronous step of length h computed against the start-of-step state:
// susceptible j flips with probability 1-exp(-h*beta*n(j,x)); for SIS each
// infected node flips with probability 1-exp(-mu*h). Draw order is node id
// ascending, one uniform per candidate.
InfectionState dts_step(const Graph& g, const ProcessParams& p,
                        const InfectionState& x, double h, rng::Stream& stream);

DtsTrajectory run_dts(const Graph& g, const ProcessParams& p,
                      const InfectionState& x0, const DtsConfig& cfg,
                      rng::Stream& stream, const DtsOptions& opt = {});

// Per-step prevalence dump: header "step,time,prevalence". Requires a
// trajectory recorded with keep_states.
std::string prevalence_csv(const DtsTrajectory& tr);

}  // namespace netsim

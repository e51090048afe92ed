#pragma once

#include <cstdint>
#include <vector>

#include "netsim/dts.hpp"
#include "netsim/graph.hpp"
#include "netsim/process.hpp"
#include "netsim/rng.hpp"

namespace netsim {

// The per-step randomness block A_i: every variate consumed while simulating
// the interval ((i-1)h, ih] is a pure function of (master seed, replication,
// step index, entity id, draw ordinal). Ordinal 0 is the edge's shared
// first draw; higher ordinals extend the stream when SIS reactivates an
// edge within the step.
class RandomBlock {
 public:
  RandomBlock(std::uint64_t master_seed, std::uint64_t replication,
              std::uint64_t step_index)
      : base_(rng::derive_key(master_seed, rng::tag::block, replication, step_index)),
        step_(step_index) {}

  double edge_exp(std::uint32_t edge, std::uint32_t ordinal) const {
    return rng::exp_from_key(rng::derive_key(base_, rng::tag::edge, edge, ordinal));
  }
  double recovery_exp(std::uint32_t node, std::uint32_t ordinal) const {
    return rng::exp_from_key(
        rng::derive_key(base_, rng::tag::recovery, node, ordinal));
  }
  std::uint64_t step_index() const { return step_; }

 private:
  std::uint64_t base_;
  std::uint64_t step_;
};

// Both chains driven by one block sequence, with reusable scratch. A single
// instance serves one replication at a time (not thread-shareable).
class CoupledEngine {
 public:
  CoupledEngine(const Graph& g, const ProcessParams& p);

  // DTS transition g(x, A_i): susceptible j flips iff the first draw of some
  // S-I edge at j is <= beta*h; infected j recovers iff its first recovery
  // draw is <= mu*h. Timers are read against the start-of-step state only.
  InfectionState dts_step(const InfectionState& x, const RandomBlock& block,
                          double h);

  // DES transition g~(x, A_i): event-driven pass over [0,h). Edges active at
  // step start fire at (first draw)/beta; a timer activated in-step at time t
  // fires a fresh full exponential after t. One-step law equals the CTMC
  // kernel over time h.
  InfectionState des_span(const InfectionState& x, const RandomBlock& block,
                          double h);

 private:
  struct EdgeScratch {
    std::uint64_t stamp = 0;
    std::uint32_t next_ordinal = 0;
    std::uint32_t token = 0;
  };
  struct NodeScratch {
    std::uint64_t stamp = 0;
    std::uint32_t next_ordinal = 0;
  };
  struct SpanEvent {
    double time;
    std::uint32_t id;     // edge id or node id
    std::uint32_t token;  // edge activation token; unused for recoveries
    bool is_recovery;
  };

  void touch_edge(std::uint32_t e);
  void touch_node(std::uint32_t v);
  void activate_edge(std::uint32_t e, double now, const RandomBlock& block, double h);
  void schedule_recovery(std::uint32_t v, double now, const RandomBlock& block,
                         double h);
  void push_event(SpanEvent ev);
  SpanEvent pop_event();

  const Graph& g_;
  ProcessParams p_;
  std::uint64_t serial_ = 0;  // distinguishes spans so scratch needs no clearing
  std::vector<std::uint8_t> work_;
  std::vector<EdgeScratch> edge_scratch_;
  std::vector<NodeScratch> node_scratch_;
  std::vector<SpanEvent> heap_;
};

InfectionState coupled_dts_step(const Graph& g, const ProcessParams& p,
                                const InfectionState& x, const RandomBlock& block,
                                double h);
InfectionState coupled_des_span(const Graph& g, const ProcessParams& p,
                                const InfectionState& x, const RandomBlock& block,
                                double h);

// f(x,a) = (g(x,a)-x)/h componentwise.
std::vector<double> increment_map_f(const Graph& g, const ProcessParams& p,
                                    const InfectionState& x,
                                    const RandomBlock& block, double h);

struct CoupledStepRecord {
  double time;
  double step_len;        // h, except possibly the final partial step
  std::uint32_t eps_l1;   // |X_i - X~_i|
  std::uint32_t d_units;  // |X~_i - g(X~_{i-1}, A_i)|; |d_i| = d_units / step_len
  bool dominance_ok;      // X~_i >= X_i
};

struct CoupledPath {
  double h = 0;
  std::uint32_t steps = 0;
  std::vector<CoupledStepRecord> records;
  InfectionState final_true;    // X~_M
  InfectionState final_approx;  // X_M
  std::vector<InfectionState> true_states;    // kept only on request
  std::vector<InfectionState> approx_states;
  bool states_recorded = false;
};

struct CoupledOptions {
  bool keep_states = false;
};

// Advances X~ and X step-by-step from shared RandomBlocks and records the
// per-step global error, local error and dominance flag.
CoupledPath run_coupled(const Graph& g, const ProcessParams& p,
                        const InfectionState& x0, const DtsConfig& cfg,
                        std::uint64_t master_seed, std::uint64_t replication,
                        const CoupledOptions& opt = {});

// Per-step means over a set of replications.
struct ErrorReport {
  double h = 0;
  std::uint32_t steps = 0;
  std::uint32_t replications = 0;
  std::vector<double> mean_eps_l1;  // indexed by step-1
  std::vector<double> mean_d_l1;    // d_units/h averaged
  double mean_final_eps_l1 = 0;
  double mean_final_eps_signed = 0;  // mean of |X_M| - |X~_M| (weak error, nodes)
  double mean_d_overall = 0;
  double mean_d_first = 0;
  std::uint64_t dominance_violations = 0;
  std::uint64_t total_steps = 0;
};

ErrorReport aggregate_paths(const std::vector<CoupledPath>& paths);

// Lemma S6 one-step stochastic-dominance check on the 30x30 torus:
// |X~_1|-|X_1| <= NB((|X_1|-|x0|)k/(k-2), 1-exp(-h(k-2))) in distribution,
// both sides Monte Carlo, one-sided CDF tolerance 0.02.
struct DominanceCdfReport {
  bool pass = false;
  double max_violation = 0;  // max over y of (F_bound(y) - F_observed(y))
  std::uint32_t points = 0;
  double mean_observed = 0;
  double mean_bound = 0;
};

DominanceCdfReport lemma_s6_check(double h, std::uint32_t replications,
                                  std::uint64_t seed);

}  // namespace netsim

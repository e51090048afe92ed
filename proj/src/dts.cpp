#include "netsim/dts.hpp"

#include <cmath>
#include <stdexcept>

namespace netsim {

namespace {

// Infected-neighbor counts for every node, O(|I| * k).
void count_infected_neighbors(const Graph& g, const InfectionState& x,
                              std::vector<std::uint32_t>& counts) {
  counts.assign(g.node_count(), 0);
  for (std::uint32_t v = 0; v < g.node_count(); ++v) {
    if (!x.infected(v)) continue;
    for (const HalfEdge& he : g.neighbors(v)) ++counts[he.to];
  }
}

}  // namespace

namespace {

InfectionState dts_step_counted(const Graph& g, const ProcessParams& p,
                                const InfectionState& x, double h,
                                rng::Stream& stream, std::uint64_t* si_edges) {
  check_params(p);
  if (h < 0) throw std::invalid_argument("dts: h must be >= 0");
  if (x.size() != g.node_count())
    throw std::invalid_argument("dts: state size mismatch");

  std::vector<std::uint32_t> counts;
  count_infected_neighbors(g, x, counts);

  // 1-exp(-h*beta*c) memoized per count value.
  std::vector<double> p_infect(g.max_degree() + 1, 0.0);
  for (std::uint32_t c = 1; c < p_infect.size(); ++c)
    p_infect[c] = -std::expm1(-h * p.beta * static_cast<double>(c));
  const bool recovery_on = p.kind == ProcessKind::sis && p.mu > 0;
  const double p_recover = recovery_on ? -std::expm1(-p.mu * h) : 0.0;

  InfectionState next = x;
  std::uint64_t active_edges = 0;
  for (std::uint32_t j = 0; j < g.node_count(); ++j) {
    if (!x.infected(j)) {
      const std::uint32_t c = counts[j];
      active_edges += c;
      if (c > 0 && stream.next_unit() < p_infect[c]) next.infect(j);
    } else if (recovery_on) {
      if (stream.next_unit() < p_recover) next.make_susceptible(j);
    }
  }
  if (si_edges != nullptr) *si_edges = active_edges;
  return next;
}

}  // namespace

InfectionState dts_step(const Graph& g, const ProcessParams& p,
                        const InfectionState& x, double h, rng::Stream& stream) {
  return dts_step_counted(g, p, x, h, stream, nullptr);
}

DtsTrajectory run_dts(const Graph& g, const ProcessParams& p,
                      const InfectionState& x0, const DtsConfig& cfg,
                      rng::Stream& stream, const DtsOptions& opt) {
  if (!(cfg.h > 0)) throw std::invalid_argument("dts: h must be > 0");
  if (!(cfg.t_end > 0)) throw std::invalid_argument("dts: t_end must be > 0");

  DtsTrajectory tr;
  tr.h = cfg.h;

  const auto full_steps = static_cast<std::uint64_t>(std::floor(cfg.t_end / cfg.h));
  const double remainder = cfg.t_end - static_cast<double>(full_steps) * cfg.h;

  InfectionState x = x0;
  double t = 0;
  if (opt.keep_states) {
    tr.states.push_back(x);
    tr.times.push_back(0.0);
  }
  auto advance = [&](double step_len) {
    std::uint64_t si_edges = 0;
    InfectionState next = dts_step_counted(g, p, x, step_len, stream, &si_edges);
    tr.counters.events_total += l1_distance(next, x);
    tr.counters.timers_created += si_edges;
    ++tr.counters.steps;
    t += step_len;
    x = std::move(next);
    if (opt.keep_states) {
      tr.states.push_back(x);
      tr.times.push_back(t);
    }
  };
  for (std::uint64_t i = 0; i < full_steps; ++i) advance(cfg.h);
  if (cfg.policy == StepPolicy::partial_final && remainder > 1e-12) advance(remainder);

  tr.final_state = std::move(x);
  return tr;
}

std::string prevalence_csv(const DtsTrajectory& tr) {
  if (tr.states.empty())
    throw std::logic_error("prevalence_csv: trajectory has no recorded states");
  std::string csv = "step,time,prevalence\n";
  const double n = tr.final_state.size();
  char buf[64];
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g\n", i, tr.times[i],
                  tr.states[i].infected_count() / n);
    csv += buf;
  }
  return csv;
}

}  // namespace netsim

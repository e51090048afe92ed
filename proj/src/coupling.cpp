#include "netsim/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "netsim/bounds.hpp"

namespace netsim {

CoupledEngine::CoupledEngine(const Graph& g, const ProcessParams& p)
    : g_(g),
      p_(p),
      work_(g.node_count(), 0),
      edge_scratch_(g.edge_count()),
      node_scratch_(g.node_count()) {
  check_params(p);
}

InfectionState CoupledEngine::dts_step(const InfectionState& x,
                                       const RandomBlock& block, double h) {
  const double edge_threshold = p_.beta * h;
  const bool recovery_on = p_.kind == ProcessKind::sis && p_.mu > 0;
  const double recovery_threshold = p_.mu * h;

  InfectionState next = x;
  for (std::uint32_t j = 0; j < g_.node_count(); ++j) {
    if (!x.infected(j)) {
      for (const HalfEdge& he : g_.neighbors(j)) {
        if (!x.infected(he.to)) continue;
        if (block.edge_exp(he.edge, 0) <= edge_threshold) {
          next.infect(j);
          break;
        }
      }
    } else if (recovery_on) {
      if (block.recovery_exp(j, 0) <= recovery_threshold) next.make_susceptible(j);
    }
  }
  return next;
}

void CoupledEngine::touch_edge(std::uint32_t e) {
  EdgeScratch& s = edge_scratch_[e];
  if (s.stamp != serial_) {
    s.stamp = serial_;
    s.next_ordinal = 0;
    s.token = 0;
  }
}

void CoupledEngine::touch_node(std::uint32_t v) {
  NodeScratch& s = node_scratch_[v];
  if (s.stamp != serial_) {
    s.stamp = serial_;
    s.next_ordinal = 0;
  }
}

void CoupledEngine::push_event(SpanEvent ev) {
  heap_.push_back(ev);
  std::push_heap(heap_.begin(), heap_.end(),
                 [](const SpanEvent& a, const SpanEvent& b) { return a.time > b.time; });
}

CoupledEngine::SpanEvent CoupledEngine::pop_event() {
  std::pop_heap(heap_.begin(), heap_.end(),
                [](const SpanEvent& a, const SpanEvent& b) { return a.time > b.time; });
  SpanEvent ev = heap_.back();
  heap_.pop_back();
  return ev;
}

void CoupledEngine::activate_edge(std::uint32_t e, double now,
                                  const RandomBlock& block, double h) {
  touch_edge(e);
  EdgeScratch& s = edge_scratch_[e];
  const std::uint32_t ordinal = s.next_ordinal++;
  ++s.token;
  const double fire = now + block.edge_exp(e, ordinal) / p_.beta;
  if (fire < h) push_event({fire, e, s.token, false});
}

void CoupledEngine::schedule_recovery(std::uint32_t v, double now,
                                      const RandomBlock& block, double h) {
  touch_node(v);
  NodeScratch& s = node_scratch_[v];
  const std::uint32_t ordinal = s.next_ordinal++;
  const double fire = now + block.recovery_exp(v, ordinal) / p_.mu;
  if (fire < h) push_event({fire, v, 0, true});
}

InfectionState CoupledEngine::des_span(const InfectionState& x,
                                       const RandomBlock& block, double h) {
  ++serial_;
  heap_.clear();
  const std::uint32_t n = g_.node_count();
  std::copy(x.raw().begin(), x.raw().end(), work_.begin());
  const bool recovery_on = p_.kind == ProcessKind::sis && p_.mu > 0;

  // Timers active at step start: one per S-I edge (first draws = A_i), and
  // for SIS one recovery timer per infected node.
  for (std::uint32_t u = 0; u < n; ++u) {
    if (!work_[u]) continue;
    for (const HalfEdge& he : g_.neighbors(u))
      if (!work_[he.to]) activate_edge(he.edge, 0.0, block, h);
    if (recovery_on) schedule_recovery(u, 0.0, block, h);
  }

  while (!heap_.empty()) {
    const SpanEvent ev = pop_event();
    if (ev.is_recovery) {
      const std::uint32_t v = ev.id;
      if (!work_[v]) throw std::logic_error("coupling: recovery of susceptible node");
      work_[v] = 0;
      for (const HalfEdge& he : g_.neighbors(v)) {
        if (work_[he.to]) activate_edge(he.edge, ev.time, block, h);
        else {
          touch_edge(he.edge);
          ++edge_scratch_[he.edge].token;  // cancel: edge no longer S-I
        }
      }
    } else {
      const std::uint32_t e = ev.id;
      touch_edge(e);
      if (edge_scratch_[e].token != ev.token) continue;  // stale activation
      const auto [a, b] = g_.edges()[e];
      const std::uint32_t s = work_[a] ? b : a;
      if (work_[s]) throw std::logic_error("coupling: live timer on I-I edge");
      work_[s] = 1;
      for (const HalfEdge& he : g_.neighbors(s)) {
        if (!work_[he.to]) activate_edge(he.edge, ev.time, block, h);
        else {
          touch_edge(he.edge);
          ++edge_scratch_[he.edge].token;  // covers the fired edge as well
        }
      }
      if (recovery_on) schedule_recovery(s, ev.time, block, h);
    }
  }

  InfectionState out(n);
  for (std::uint32_t v = 0; v < n; ++v)
    if (work_[v]) out.infect(v);
  return out;
}

InfectionState coupled_dts_step(const Graph& g, const ProcessParams& p,
                                const InfectionState& x, const RandomBlock& block,
                                double h) {
  CoupledEngine engine(g, p);
  return engine.dts_step(x, block, h);
}

InfectionState coupled_des_span(const Graph& g, const ProcessParams& p,
                                const InfectionState& x, const RandomBlock& block,
                                double h) {
  CoupledEngine engine(g, p);
  return engine.des_span(x, block, h);
}

std::vector<double> increment_map_f(const Graph& g, const ProcessParams& p,
                                    const InfectionState& x,
                                    const RandomBlock& block, double h) {
  if (!(h > 0)) throw std::invalid_argument("increment map: h must be > 0");
  const InfectionState next = coupled_dts_step(g, p, x, block, h);
  std::vector<double> f(g.node_count(), 0.0);
  for (std::uint32_t j = 0; j < g.node_count(); ++j) {
    const int delta = static_cast<int>(next.infected(j)) - static_cast<int>(x.infected(j));
    f[j] = static_cast<double>(delta) / h;
  }
  return f;
}

CoupledPath run_coupled(const Graph& g, const ProcessParams& p,
                        const InfectionState& x0, const DtsConfig& cfg,
                        std::uint64_t master_seed, std::uint64_t replication,
                        const CoupledOptions& opt) {
  if (!(cfg.h > 0)) throw std::invalid_argument("coupled: h must be > 0");
  if (!(cfg.t_end > 0)) throw std::invalid_argument("coupled: t_end must be > 0");
  if (x0.size() != g.node_count())
    throw std::invalid_argument("coupled: state size mismatch");

  const auto full_steps = static_cast<std::uint64_t>(std::floor(cfg.t_end / cfg.h));
  const double remainder = cfg.t_end - static_cast<double>(full_steps) * cfg.h;
  const bool partial =
      cfg.policy == StepPolicy::partial_final && remainder > 1e-12;

  CoupledPath path;
  path.h = cfg.h;
  path.states_recorded = opt.keep_states;

  CoupledEngine engine(g, p);
  InfectionState x_true = x0;
  InfectionState x_approx = x0;
  if (opt.keep_states) {
    path.true_states.push_back(x_true);
    path.approx_states.push_back(x_approx);
  }

  const std::uint64_t total = full_steps + (partial ? 1 : 0);
  double t = 0;
  for (std::uint64_t i = 1; i <= total; ++i) {
    const double step_len = (i <= full_steps) ? cfg.h : remainder;
    t += step_len;
    const RandomBlock block(master_seed, replication, i);

    InfectionState true_next = engine.des_span(x_true, block, step_len);
    InfectionState counterfactual = engine.dts_step(x_true, block, step_len);
    InfectionState approx_next = engine.dts_step(x_approx, block, step_len);

    path.records.push_back({t, step_len, l1_distance(approx_next, true_next),
                            l1_distance(true_next, counterfactual),
                            dominates(true_next, approx_next)});
    x_true = std::move(true_next);
    x_approx = std::move(approx_next);
    if (opt.keep_states) {
      path.true_states.push_back(x_true);
      path.approx_states.push_back(x_approx);
    }
  }
  path.steps = static_cast<std::uint32_t>(total);
  path.final_true = std::move(x_true);
  path.final_approx = std::move(x_approx);
  return path;
}

ErrorReport aggregate_paths(const std::vector<CoupledPath>& paths) {
  ErrorReport report;
  if (paths.empty()) return report;
  report.h = paths.front().h;
  report.steps = paths.front().steps;
  report.replications = static_cast<std::uint32_t>(paths.size());
  report.mean_eps_l1.assign(report.steps, 0.0);
  report.mean_d_l1.assign(report.steps, 0.0);

  double d_sum = 0;
  double d_first_sum = 0;
  double final_eps_sum = 0;
  double final_signed_sum = 0;
  for (const CoupledPath& path : paths) {
    if (path.steps != report.steps)
      throw std::invalid_argument("aggregate: step-count mismatch");
    for (std::uint32_t s = 0; s < path.steps; ++s) {
      const CoupledStepRecord& rec = path.records[s];
      report.mean_eps_l1[s] += rec.eps_l1;
      report.mean_d_l1[s] += rec.d_units / rec.step_len;
      report.dominance_violations += rec.dominance_ok ? 0 : 1;
      d_sum += rec.d_units / rec.step_len;
    }
    report.total_steps += path.steps;
    d_first_sum += path.records.front().d_units / path.records.front().step_len;
    final_eps_sum += path.records.back().eps_l1;
    final_signed_sum += static_cast<double>(path.final_approx.infected_count()) -
                        static_cast<double>(path.final_true.infected_count());
  }
  const double r = static_cast<double>(report.replications);
  for (std::uint32_t s = 0; s < report.steps; ++s) {
    report.mean_eps_l1[s] /= r;
    report.mean_d_l1[s] /= r;
  }
  report.mean_final_eps_l1 = final_eps_sum / r;
  report.mean_final_eps_signed = final_signed_sum / r;
  report.mean_d_overall = d_sum / static_cast<double>(report.total_steps);
  report.mean_d_first = d_first_sum / r;
  return report;
}

DominanceCdfReport lemma_s6_check(double h, std::uint32_t replications,
                                  std::uint64_t seed) {
  const Graph g = make_torus(30, 30);
  const ProcessParams p{ProcessKind::si, 1.0, 0.0};
  const double k = g.max_degree();
  const double nb_p = -std::expm1(-h * (k - 2.0));

  CoupledEngine engine(g, p);
  std::vector<std::uint32_t> observed(replications);
  std::vector<std::uint32_t> bound(replications);
  rng::Stream nb_stream(rng::derive_key(seed, rng::tag::misc, 0x53u, 6u));
  for (std::uint32_t rep = 0; rep < replications; ++rep) {
    const InfectionState x0 = random_initial_state(
        g, InitSpec{0.1, rng::derive_key(seed, rng::tag::init, rep)});
    const RandomBlock block(seed, rep, 1);
    const InfectionState x1 = engine.dts_step(x0, block, h);
    const InfectionState x1_true = engine.des_span(x0, block, h);
    if (!dominates(x1_true, x1))
      throw std::logic_error("lemma_s6: coupled SI dominance violated");
    const std::uint32_t direct = x1.infected_count() - x0.infected_count();
    observed[rep] = x1_true.infected_count() - x1.infected_count();
    bound[rep] = static_cast<std::uint32_t>(nb_sample(
        nb_stream, NegBinomial{static_cast<double>(direct) * k / (k - 2.0), nb_p}));
  }

  const std::uint32_t y_max =
      std::max(*std::max_element(observed.begin(), observed.end()),
               *std::max_element(bound.begin(), bound.end()));
  std::vector<std::uint64_t> obs_hist(y_max + 2, 0), bound_hist(y_max + 2, 0);
  double obs_sum = 0, bound_sum = 0;
  for (std::uint32_t rep = 0; rep < replications; ++rep) {
    ++obs_hist[observed[rep]];
    ++bound_hist[bound[rep]];
    obs_sum += observed[rep];
    bound_sum += bound[rep];
  }

  DominanceCdfReport report;
  report.points = y_max + 1;
  report.mean_observed = obs_sum / replications;
  report.mean_bound = bound_sum / replications;
  double obs_cdf = 0, bound_cdf = 0;
  for (std::uint32_t y = 0; y <= y_max; ++y) {
    obs_cdf += static_cast<double>(obs_hist[y]) / replications;
    bound_cdf += static_cast<double>(bound_hist[y]) / replications;
    report.max_violation = std::max(report.max_violation, bound_cdf - obs_cdf);
  }
  report.pass = report.max_violation <= 0.02;
  return report;
}

}  // namespace netsim

#include "netsim/des.hpp"

#include <cstdio>
#include <stdexcept>

namespace netsim {

namespace {

// Incremental bookkeeping for the direct method: infected-node list for
// uniform recovery picks, and the set of susceptible nodes with at least one
// infected neighbor ("active") with their counts for weighted infection picks.
class DirectMethod {
 public:
  DirectMethod(const Graph& g, const InfectionState& x0)
      : g_(g),
        infected_(x0.raw()),
        ni_(g.node_count(), 0),
        active_pos_(g.node_count(), kAbsent),
        infected_pos_(g.node_count(), kAbsent) {
    for (std::uint32_t v = 0; v < g_.node_count(); ++v)
      if (infected_[v]) push_infected(v);
    for (std::uint32_t v = 0; v < g_.node_count(); ++v) {
      if (infected_[v]) continue;
      std::uint32_t c = 0;
      for (const HalfEdge& he : g_.neighbors(v)) c += infected_[he.to];
      if (c > 0) {
        ni_[v] = c;
        push_active(v);
        weight_ += c;
      }
    }
  }

  std::uint64_t infection_weight() const { return weight_; }
  std::uint64_t infected_count() const { return infected_list_.size(); }
  std::uint64_t initial_si_edges() const { return weight_; }

  // Weighted pick of a susceptible node; coord is uniform on [0, weight_).
  std::uint32_t pick_infection_target(double coord) const {
    double acc = 0;
    for (std::uint32_t v : active_) {
      acc += ni_[v];
      if (coord < acc) return v;
    }
    return active_.back();  // guards against floating-point edge at coord ~ weight_
  }

  std::uint32_t pick_recovery_target(std::uint64_t idx) const {
    return infected_list_[idx];
  }

  // Returns the number of S-I edge timers newly activated by the event.
  std::uint64_t apply_infection(std::uint32_t j) {
    infected_[j] = 1;
    weight_ -= ni_[j];
    ni_[j] = 0;
    drop_active(j);
    push_infected(j);
    std::uint64_t activated = 0;
    for (const HalfEdge& he : g_.neighbors(j)) {
      const std::uint32_t w = he.to;
      if (infected_[w]) continue;
      if (ni_[w] == 0) push_active(w);
      ++ni_[w];
      ++weight_;
      ++activated;
    }
    return activated;
  }

  std::uint64_t apply_recovery(std::uint32_t i) {
    infected_[i] = 0;
    drop_infected(i);
    std::uint64_t activated = 0;
    std::uint32_t c = 0;
    for (const HalfEdge& he : g_.neighbors(i)) {
      const std::uint32_t w = he.to;
      if (infected_[w]) {
        ++c;  // edge i-w is S-I again: a fresh timer
        ++activated;
      } else if (ni_[w] > 0) {
        --ni_[w];
        --weight_;
        if (ni_[w] == 0) drop_active(w);
      }
    }
    if (c > 0) {
      ni_[i] = c;
      push_active(i);
      weight_ += c;
    }
    return activated;
  }

  InfectionState snapshot() const {
    InfectionState x(g_.node_count());
    for (std::uint32_t v = 0; v < g_.node_count(); ++v)
      if (infected_[v]) x.infect(v);
    return x;
  }

 private:
  static constexpr std::uint32_t kAbsent = UINT32_MAX;

  void push_active(std::uint32_t v) {
    active_pos_[v] = static_cast<std::uint32_t>(active_.size());
    active_.push_back(v);
  }
  void drop_active(std::uint32_t v) {
    const std::uint32_t pos = active_pos_[v];
    if (pos == kAbsent) return;
    active_[pos] = active_.back();
    active_pos_[active_[pos]] = pos;
    active_.pop_back();
    active_pos_[v] = kAbsent;
  }
  void push_infected(std::uint32_t v) {
    infected_pos_[v] = static_cast<std::uint32_t>(infected_list_.size());
    infected_list_.push_back(v);
  }
  void drop_infected(std::uint32_t v) {
    const std::uint32_t pos = infected_pos_[v];
    infected_list_[pos] = infected_list_.back();
    infected_pos_[infected_list_[pos]] = pos;
    infected_list_.pop_back();
    infected_pos_[v] = kAbsent;
  }

  const Graph& g_;
  std::vector<std::uint8_t> infected_;
  std::vector<std::uint32_t> ni_;
  std::vector<std::uint32_t> active_;       // susceptible nodes with ni > 0
  std::vector<std::uint32_t> active_pos_;
  std::vector<std::uint32_t> infected_list_;
  std::vector<std::uint32_t> infected_pos_;
  std::uint64_t weight_ = 0;  // sum of ni over active nodes
};

}  // namespace

Trajectory run_des(const Graph& g, const ProcessParams& p, const InfectionState& x0,
                   double t_end, rng::Stream& stream, const DesOptions& opt) {
  check_params(p);
  if (!(t_end >= 0)) throw std::invalid_argument("des: t_end must be >= 0");
  if (x0.size() != g.node_count())
    throw std::invalid_argument("des: state size mismatch");

  Trajectory tr;
  tr.initial = x0;
  tr.t_end = t_end;
  tr.events_recorded = opt.record_events;

  DirectMethod dm(g, x0);
  tr.counters.timers_created = dm.initial_si_edges();
  const bool recovery_on = p.kind == ProcessKind::sis && p.mu > 0;

  double t = 0;
  for (;;) {
    const double infection_rate = p.beta * static_cast<double>(dm.infection_weight());
    const double recovery_rate =
        recovery_on ? p.mu * static_cast<double>(dm.infected_count()) : 0.0;
    const double total = infection_rate + recovery_rate;
    if (total <= 0) break;  // absorbing

    t += stream.next_exponential() / total;
    if (t > t_end) break;

    const double coord = stream.next_unit() * total;
    if (coord < infection_rate) {
      const std::uint32_t j = dm.pick_infection_target(coord / p.beta);
      tr.counters.timers_created += dm.apply_infection(j);
      if (opt.record_events) tr.events.push_back({t, j, EventKind::infection});
    } else {
      const std::uint64_t idx = stream.next_below(dm.infected_count());
      const std::uint32_t i = dm.pick_recovery_target(idx);
      tr.counters.timers_created += dm.apply_recovery(i);
      if (opt.record_events) tr.events.push_back({t, i, EventKind::recovery});
    }
    ++tr.counters.events_total;
  }
  tr.counters.steps = tr.counters.events_total;
  tr.final_state = dm.snapshot();
  return tr;
}

std::string trajectory_csv(const Trajectory& tr) {
  if (!tr.events_recorded)
    throw std::logic_error("trajectory_csv: trajectory has no recorded events");
  std::string csv = "time,node,kind\n";
  char buf[48];
  for (const Event& e : tr.events) {
    std::snprintf(buf, sizeof buf, "%.9g", e.time);
    csv += buf;
    csv += ',';
    csv += std::to_string(e.node);
    csv += ',';
    csv += e.kind == EventKind::infection ? "infection" : "recovery";
    csv += '\n';
  }
  return csv;
}

InfectionState state_at(const Trajectory& tr, double t) {
  if (t < 0 || t > tr.t_end) throw std::invalid_argument("state_at: t out of range");
  if (!tr.events_recorded)
    throw std::logic_error("state_at: trajectory has no recorded events");
  InfectionState x = tr.initial;
  for (const Event& e : tr.events) {
    if (e.time > t) break;
    if (e.kind == EventKind::infection) x.infect(e.node);
    else x.make_susceptible(e.node);
  }
  return x;
}

}  // namespace netsim

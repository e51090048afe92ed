#include "netsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <thread>

#include "netsim/bounds.hpp"

namespace netsim {

namespace {

std::uint32_t resolve_workers(std::uint32_t requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace

void parallel_for_index(std::uint32_t count, std::uint32_t workers,
                        const std::function<void(std::uint32_t)>& fn) {
  workers = std::min(resolve_workers(workers), count == 0 ? 1u : count);
  if (workers <= 1) {
    for (std::uint32_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::uint32_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::uint32_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::uint32_t i = next.fetch_add(1);
        if (i >= count) return;
        fn(i);
      }
    });
  }
  for (std::thread& th : pool) th.join();
}

namespace {

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

InfectionState initial_state_for_rep(const Graph& g, const ExperimentConfig& cfg,
                                     std::uint32_t rep) {
  return random_initial_state(
      g, InitSpec{cfg.init.prevalence,
                  rng::derive_key(cfg.master_seed, rng::tag::init, rep)});
}

Graph graph_for_rep(const ExperimentConfig& cfg, std::uint32_t rep) {
  GraphSpec spec = cfg.graph;
  if (cfg.regenerate_graph_per_rep)
    spec.seed = rng::derive_key(cfg.master_seed, rng::tag::graph, rep, spec.seed);
  return build_graph(spec);
}

std::string dts_label(double h) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "dts h=%g", h);
  return buf;
}

}  // namespace

ExperimentResult run_replicated(const ExperimentConfig& cfg) {
  if (cfg.replications < 1)
    throw std::invalid_argument("experiment: replications must be >= 1");
  if (cfg.mode == RunMode::coupled)
    throw std::invalid_argument("experiment: use run_coupled_replicated for coupled mode");
  if (cfg.mode == RunMode::dts && cfg.h_values.empty())
    throw std::invalid_argument("experiment: dts mode needs h values");

  const Graph shared_graph = build_graph(cfg.graph);
  const bool run_dts_algs = cfg.mode == RunMode::dts;
  const std::size_t algs = 1 + (run_dts_algs ? cfg.h_values.size() : 0);

  std::vector<std::vector<ReplicationRecord>> per_rep(cfg.replications);
  parallel_for_index(cfg.replications, cfg.workers,
                    [&](std::uint32_t rep) {
    std::optional<Graph> local_graph;
    if (cfg.regenerate_graph_per_rep) local_graph.emplace(graph_for_rep(cfg, rep));
    const Graph& g = local_graph ? *local_graph : shared_graph;
    const InfectionState x0 = initial_state_for_rep(g, cfg, rep);
    const double n = g.node_count();

    std::vector<ReplicationRecord>& out = per_rep[rep];
    out.reserve(algs);
    {
      rng::Stream stream(rng::derive_key(cfg.master_seed, rng::tag::des, rep));
      const auto start = std::chrono::steady_clock::now();
      const Trajectory tr =
          run_des(g, cfg.params, x0, cfg.t_end, stream, DesOptions{false});
      out.push_back({rep, "des", 0.0,
                     tr.final_state.infected_count() / n, tr.counters.events_total,
                     tr.counters.steps, tr.counters.timers_created,
                     elapsed_seconds(start)});
    }
    if (run_dts_algs) {
      for (std::size_t hi = 0; hi < cfg.h_values.size(); ++hi) {
        const double h = cfg.h_values[hi];
        rng::Stream stream(
            rng::derive_key(cfg.master_seed, rng::tag::dts, rep, hi));
        const auto start = std::chrono::steady_clock::now();
        const DtsTrajectory tr =
            run_dts(g, cfg.params, x0, DtsConfig{h, cfg.t_end, cfg.policy}, stream,
                    DtsOptions{false});
        out.push_back({rep, dts_label(h), h,
                       tr.final_state.infected_count() / n,
                       tr.counters.events_total, tr.counters.steps,
                       tr.counters.timers_created, elapsed_seconds(start)});
      }
    }
  });

  ExperimentResult result;
  result.records.reserve(cfg.replications * algs);
  for (const auto& rec_list : per_rep)
    result.records.insert(result.records.end(), rec_list.begin(), rec_list.end());

  // Summary rows in algorithm order: des first, then each h.
  std::vector<std::string> labels{"des"};
  if (run_dts_algs)
    for (double h : cfg.h_values) labels.push_back(dts_label(h));
  double des_mean_prev = 0;
  for (const std::string& label : labels) {
    SummaryRow row;
    row.algorithm = label;
    double prev_sum = 0;
    std::uint64_t count = 0;
    for (const ReplicationRecord& rec : result.records) {
      if (rec.algorithm != label) continue;
      row.mean_events += static_cast<double>(rec.events);
      row.mean_steps += static_cast<double>(rec.steps);
      row.mean_timers += static_cast<double>(rec.timers);
      row.mean_cpu_seconds += rec.wall_seconds;
      prev_sum += rec.prevalence;
      ++count;
    }
    row.mean_events /= count;
    row.mean_steps /= count;
    row.mean_timers /= count;
    row.mean_cpu_seconds /= count;
    const double mean_prev = prev_sum / count;
    if (label == "des") des_mean_prev = mean_prev;
    else row.prev_diff = std::abs(mean_prev - des_mean_prev);
    result.summary.push_back(std::move(row));
  }
  return result;
}

Trajectory rerun_des_replication(const ExperimentConfig& cfg, std::uint32_t rep) {
  const Graph g = cfg.regenerate_graph_per_rep ? graph_for_rep(cfg, rep)
                                               : build_graph(cfg.graph);
  const InfectionState x0 = initial_state_for_rep(g, cfg, rep);
  rng::Stream stream(rng::derive_key(cfg.master_seed, rng::tag::des, rep));
  return run_des(g, cfg.params, x0, cfg.t_end, stream, DesOptions{true});
}

DtsTrajectory rerun_dts_replication(const ExperimentConfig& cfg, std::uint32_t rep,
                                    std::size_t h_index) {
  const Graph g = cfg.regenerate_graph_per_rep ? graph_for_rep(cfg, rep)
                                               : build_graph(cfg.graph);
  const InfectionState x0 = initial_state_for_rep(g, cfg, rep);
  rng::Stream stream(rng::derive_key(cfg.master_seed, rng::tag::dts, rep, h_index));
  return run_dts(g, cfg.params, x0,
                 DtsConfig{cfg.h_values.at(h_index), cfg.t_end, cfg.policy}, stream,
                 DtsOptions{true});
}

std::vector<CoupledRunResult> run_coupled_replicated(const ExperimentConfig& cfg,
                                                     bool keep_paths) {
  if (cfg.h_values.empty())
    throw std::invalid_argument("experiment: coupled mode needs h values");
  const Graph g = build_graph(cfg.graph);

  std::vector<CoupledRunResult> results;
  for (std::size_t hi = 0; hi < cfg.h_values.size(); ++hi) {
    const double h = cfg.h_values[hi];
    std::vector<CoupledPath> paths(cfg.replications);
    parallel_for_index(cfg.replications, cfg.workers,
                      [&](std::uint32_t rep) {
      const InfectionState x0 = initial_state_for_rep(g, cfg, rep);
      paths[rep] = run_coupled(g, cfg.params, x0,
                               DtsConfig{h, cfg.t_end, cfg.policy},
                               rng::derive_key(cfg.master_seed, rng::tag::misc, hi),
                               rep);
    });
    CoupledRunResult out;
    out.h = h;
    out.report = aggregate_paths(paths);
    if (keep_paths) out.paths = std::move(paths);
    results.push_back(std::move(out));
  }
  return results;
}

std::pair<double, double> least_squares_line(const std::vector<double>& x,
                                             const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-12)
    throw std::invalid_argument("fit: abscissae are not distinct");
  const double slope = (n * sxy - sx * sy) / denom;
  return {slope, (sy - slope * sx) / n};
}

SweepResult step_size_sweep(const ExperimentConfig& cfg) {
  if (cfg.h_values.size() < 3)
    throw std::invalid_argument("sweep: need >= 3 step sizes");
  {
    auto sorted = cfg.h_values;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("sweep: step sizes must be distinct");
  }

  SweepResult result;
  if (cfg.mode == RunMode::coupled) {
    const double n = static_cast<double>(build_graph(cfg.graph).node_count());
    const auto runs = run_coupled_replicated(cfg, true);
    for (const CoupledRunResult& run : runs) {
      double sum = 0, sum_sq = 0;
      for (const CoupledPath& path : run.paths) {
        const double v = path.records.back().eps_l1 / n;
        sum += v;
        sum_sq += v * v;
      }
      const double reps = static_cast<double>(run.paths.size());
      const double mean = sum / reps;
      const double var = std::max(0.0, sum_sq / reps - mean * mean);
      result.points.push_back({run.h, mean, std::sqrt(var / reps)});
    }
  } else {
    ExperimentConfig dts_cfg = cfg;
    dts_cfg.mode = RunMode::dts;
    const ExperimentResult res = run_replicated(dts_cfg);
    // Per-h |mean prevalence difference| vs the common DES baseline; the
    // standard error combines both independent means.
    double des_mean = 0, des_var = 0;
    for (std::size_t hi = 0; hi <= cfg.h_values.size(); ++hi) {
      const std::string label = hi == 0 ? "des" : dts_label(cfg.h_values[hi - 1]);
      double sum = 0, sum_sq = 0;
      std::uint64_t count = 0;
      for (const ReplicationRecord& rec : res.records) {
        if (rec.algorithm != label) continue;
        sum += rec.prevalence;
        sum_sq += rec.prevalence * rec.prevalence;
        ++count;
      }
      const double mean = sum / count;
      const double var = std::max(0.0, sum_sq / count - mean * mean) / count;
      if (hi == 0) {
        des_mean = mean;
        des_var = var;
      } else {
        result.points.push_back(
            {cfg.h_values[hi - 1], std::abs(mean - des_mean), std::sqrt(var + des_var)});
      }
    }
  }

  std::vector<double> lx, ly;
  for (const SweepPoint& pt : result.points) {
    if (pt.mean_gap <= 0) {
      result.degenerate = true;
      return result;
    }
    lx.push_back(std::log10(pt.h));
    ly.push_back(std::log10(pt.mean_gap));
  }
  std::tie(result.slope, result.intercept) = least_squares_line(lx, ly);
  return result;
}

namespace {

// P(Gamma(shape,1) <= t) for integer shape (Erlang CDF).
double erlang_cdf(std::uint32_t shape, double t) {
  if (t <= 0) return 0;
  double term = 1.0;
  double sum = 1.0;
  for (std::uint32_t j = 1; j < shape; ++j) {
    term *= t / j;
    sum += term;
  }
  return 1.0 - std::exp(-t) * sum;
}

std::uint32_t default_tree_depth(std::uint32_t m, std::uint32_t k, double t) {
  // Smallest depth whose union bound on reaching any deepest node is < 1e-4:
  // count(d) * P(sum of d Exp(1) <= t).
  double count = m;
  for (std::uint32_t d = 1; d <= 40; ++d) {
    if (count * erlang_cdf(d, t) < 1e-4) return d;
    count *= (k - 1);
  }
  return 40;
}

}  // namespace

YuleReport yule_oracle_test(std::uint32_t m, std::uint32_t k, double t,
                            std::uint32_t replications, std::uint64_t seed,
                            std::uint32_t depth) {
  if (k < 3) throw std::invalid_argument("yule: k must be >= 3");
  if (depth == 0) depth = default_tree_depth(m, k, t);
  const Graph g = make_tree(m, k, depth);
  const ProcessParams p{ProcessKind::si, 1.0, 0.0};

  // Nodes at the truncation boundary: ids are assigned level by level, so the
  // deepest level is exactly the trailing id range.
  std::uint64_t level = m;
  for (std::uint32_t d = 1; d < depth; ++d) level *= (k - 1);
  const std::uint32_t boundary_begin =
      static_cast<std::uint32_t>(g.node_count() - level);

  InfectionState x0(g.node_count());
  x0.infect(0);

  std::vector<std::uint32_t> infections(replications);
  std::atomic<std::uint64_t> boundary_hits{0};
  parallel_for_index(replications, 0, [&](std::uint32_t rep) {
    rng::Stream stream(rng::derive_key(seed, rng::tag::des, rep));
    const Trajectory tr = run_des(g, p, x0, t, stream, DesOptions{false});
    infections[rep] = tr.final_state.infected_count() - 1;
    for (std::uint32_t v = boundary_begin; v < g.node_count(); ++v)
      if (tr.final_state.infected(v)) {
        boundary_hits.fetch_add(1);
        break;
      }
  });

  YuleReport report;
  report.depth = depth;
  report.boundary_hits = boundary_hits.load();
  if (static_cast<double>(report.boundary_hits) >= 1e-3 * replications)
    throw std::runtime_error(
        "yule: truncation boundary reached too often; increase depth");

  const NegBinomial nb{static_cast<double>(m) / (k - 2),
                       -std::expm1(-(static_cast<double>(k) - 2) * t)};
  const std::uint32_t y_max =
      *std::max_element(infections.begin(), infections.end());
  std::vector<std::uint64_t> hist(y_max + 1, 0);
  double sum = 0;
  for (std::uint32_t v : infections) {
    ++hist[v];
    sum += v;
  }
  double emp_cdf = 0, ks = 0;
  for (std::uint32_t y = 0; y <= y_max; ++y) {
    emp_cdf += static_cast<double>(hist[y]) / replications;
    ks = std::max(ks, std::abs(emp_cdf - nb_cdf(nb, y)));
  }
  report.ks_distance = ks;
  report.critical_value = 1.63 / std::sqrt(static_cast<double>(replications)) * 1.5;
  report.empirical_mean = sum / replications;
  report.expected_mean = nb_mean(nb);
  report.pass = ks < report.critical_value;
  return report;
}

DominanceReport dominance_oracle_test(const Graph& g, const InfectionState& x0,
                                      double t, std::uint32_t replications,
                                      std::uint64_t seed) {
  const ProcessParams p{ProcessKind::si, 1.0, 0.0};
  const double k = g.max_degree();
  if (k <= 2) throw std::invalid_argument("dominance oracle: needs k > 2");
  const NegBinomial nb{x0.infected_count() * k / (k - 2.0), -std::expm1(-(k - 2.0) * t)};

  std::vector<std::uint32_t> infections(replications);
  parallel_for_index(replications, 0, [&](std::uint32_t rep) {
    rng::Stream stream(rng::derive_key(seed, rng::tag::des, rep));
    const Trajectory tr = run_des(g, p, x0, t, stream, DesOptions{false});
    infections[rep] = tr.final_state.infected_count() - x0.infected_count();
  });

  DominanceReport report;
  report.bound_mean = nb_mean(nb);
  const std::uint32_t y_max =
      *std::max_element(infections.begin(), infections.end());
  std::vector<std::uint64_t> hist(y_max + 1, 0);
  double sum = 0;
  for (std::uint32_t v : infections) {
    ++hist[v];
    sum += v;
  }
  report.empirical_mean = sum / replications;
  double emp_cdf = 0;
  for (std::uint32_t y = 0; y <= y_max; ++y) {
    emp_cdf += static_cast<double>(hist[y]) / replications;
    report.max_violation =
        std::max(report.max_violation, nb_cdf(nb, y) - 0.02 - emp_cdf);
  }
  report.pass = report.max_violation <= 0;
  return report;
}

}  // namespace netsim

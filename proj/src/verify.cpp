#include "netsim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "netsim/bounds.hpp"
#include "netsim/coupling.hpp"

namespace netsim {

namespace {

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

}  // namespace

CheckResult check_lemma_s2_grid(std::uint32_t points, std::uint64_t seed) {
  rng::Stream stream(rng::derive_key(seed, rng::tag::misc, 0x5332u));
  std::uint32_t failures = 0;
  // Half deterministic grid over [0,20]x[0,1], half random points.
  std::uint32_t side = static_cast<std::uint32_t>(std::sqrt(points / 2.0));
  if (side < 2) side = 0;
  for (std::uint32_t i = 0; i < side; ++i)
    for (std::uint32_t j = 0; j < side; ++j) {
      const double c = 20.0 * i / (side - 1);
      const double h = 1.0 * j / (side - 1);
      if (!lemma_s2_check(c, h)) ++failures;
    }
  for (std::uint32_t i = side * side; i < points; ++i)
    if (!lemma_s2_check(20.0 * stream.next_unit(), stream.next_unit())) ++failures;
  return {"lemma_s2_grid", failures == 0,
          fmt("%u points, %u failures", points, failures)};
}

CheckResult check_lemma_s3_grid(std::uint32_t points, std::uint64_t seed) {
  rng::Stream stream(rng::derive_key(seed, rng::tag::misc, 0x5333u));
  std::uint32_t failures = 0;
  for (std::uint32_t i = 0; i < points; ++i) {
    double a = 10.0 * stream.next_unit();
    double b = 10.0 * stream.next_unit();
    if (a > b) std::swap(a, b);
    const double t = 20.0 * stream.next_unit() - 10.0;  // the lemma covers t <= 0
    if (!lemma_s3_check(a, b, t)) ++failures;
  }
  return {"lemma_s3_grid", failures == 0,
          fmt("%u points, %u failures", points, failures)};
}

CheckResult check_lemma_s8(std::uint32_t pairs, std::uint64_t seed) {
  const Graph torus = make_torus(12, 12);
  const Graph small_world = make_small_world(12, 12, 5, seed);
  rng::Stream stream(rng::derive_key(seed, rng::tag::misc, 0x5338u));
  std::uint32_t failures = 0;
  for (std::uint32_t i = 0; i < pairs; ++i) {
    const Graph& g = (i % 2 == 0) ? torus : small_world;
    const std::uint32_t n = g.node_count();
    InfectionState z(n);
    for (std::uint32_t v = 0; v < n; ++v)
      if (stream.next_unit() < 0.3) z.infect(v);
    InfectionState x = z;  // x = z plus extra infections, so x >= z
    const auto extra = 1 + stream.next_below(10);
    for (std::uint64_t e = 0; e < extra; ++e)
      x.infect(static_cast<std::uint32_t>(stream.next_below(n)));
    const std::uint64_t lhs = neighbor_count_l1_diff(g, x, z);
    const std::uint64_t rhs =
        static_cast<std::uint64_t>(g.max_degree()) * l1_distance(x, z);
    if (lhs > rhs) ++failures;
  }
  return {"lemma_s8_pairs", failures == 0,
          fmt("%u pairs, %u failures", pairs, failures)};
}

CheckResult check_theorem_1a(std::uint64_t min_steps, std::uint64_t seed) {
  const Graph torus = make_torus(12, 12);
  const Graph small_world = make_small_world(12, 12, 5, seed);
  const ProcessParams p{ProcessKind::si, 1.0, 0.0};
  const double h_values[] = {0.01, 0.1, 0.5};

  std::uint64_t steps_done = 0, violations = 0, rep = 0;
  while (steps_done < min_steps) {
    const Graph& g = (rep % 2 == 0) ? torus : small_world;
    const double h = h_values[rep % 3];
    const InfectionState x0 = random_initial_state(
        g, InitSpec{0.1, rng::derive_key(seed, rng::tag::init, rep)});
    const CoupledPath path = run_coupled(
        g, p, x0, DtsConfig{h, 50 * h, StepPolicy::truncate}, seed, rep);
    for (const CoupledStepRecord& rec : path.records)
      violations += rec.dominance_ok ? 0 : 1;
    steps_done += path.steps;
    ++rep;
  }
  return {"theorem_1a_dominance", violations == 0,
          fmt("%llu coupled SI steps, %llu dominance violations",
              static_cast<unsigned long long>(steps_done),
              static_cast<unsigned long long>(violations))};
}

ConvergenceStudy run_convergence_study(ProcessKind kind,
                                       const std::vector<double>& h_values,
                                       std::uint32_t replications,
                                       std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.graph = GraphSpec{};  // 30x30 torus
  cfg.params = ProcessParams{kind, 1.0, kind == ProcessKind::sis ? 0.2 : 0.0};
  cfg.init.prevalence = 0.1;
  cfg.t_end = 1.0;
  cfg.replications = replications;
  cfg.h_values = h_values;
  cfg.mode = RunMode::coupled;
  cfg.master_seed = seed;

  ConvergenceStudy study;
  study.kind = kind;
  study.h_values = h_values;
  for (const CoupledRunResult& run : run_coupled_replicated(cfg))
    study.reports.push_back(run.report);
  return study;
}

CheckResult check_global_bound(const ConvergenceStudy& study, double mu) {
  bool pass = true;
  std::string detail;
  for (std::size_t i = 0; i < study.h_values.size(); ++i) {
    const double h = study.h_values[i];
    BoundInputs in{900, 4, mu, 1.0, h};
    const BoundResult bound =
        study.kind == ProcessKind::si ? si_bound(in) : sis_bound(in);
    const double measured = study.reports[i].mean_final_eps_l1;
    if (measured > bound.bound) pass = false;
    detail += fmt("h=%g: %.4g<=%.4g ", h, measured, bound.bound);
  }
  return {study.kind == ProcessKind::si ? "theorem_2a_global_bound"
                                        : "theorem_2b_global_bound",
          pass, detail};
}

CheckResult check_global_slope(const ConvergenceStudy& study) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < study.h_values.size(); ++i) {
    lx.push_back(std::log10(study.h_values[i]));
    ly.push_back(std::log10(study.reports[i].mean_final_eps_l1 / 900.0));
  }
  const auto [slope, intercept] = least_squares_line(lx, ly);
  const bool pass = slope >= 0.7 && slope <= 1.3;
  return {study.kind == ProcessKind::si ? "strong_order_slope_si"
                                        : "strong_order_slope_sis",
          pass, fmt("slope=%.3f (expect [0.7,1.3])", slope)};
}

CheckResult check_local_bound(const ConvergenceStudy& study, double mu) {
  bool pass = true;
  std::string detail;
  for (std::size_t i = 0; i < study.h_values.size(); ++i) {
    const double h = study.h_values[i];
    const double C = study.kind == ProcessKind::si
                         ? 900.0 * 16.0 * std::exp(2.0)
                         : 900.0 * 4.0 * (4.0 * std::exp(2.0) + mu);
    const double measured = study.reports[i].mean_d_overall;
    if (measured > C * h) pass = false;
    detail += fmt("h=%g: %.4g<=%.4g ", h, measured, C * h);
  }
  return {study.kind == ProcessKind::si ? "lemma_3a_local_bound"
                                        : "lemma_3b_local_bound",
          pass, detail};
}

CheckResult check_d1_slope(ProcessKind kind, const std::vector<double>& h_values,
                           std::uint32_t replications, std::uint64_t seed) {
  const Graph g = make_torus(30, 30);
  const ProcessParams p{kind, 1.0, kind == ProcessKind::sis ? 0.2 : 0.0};

  std::vector<double> lx, ly;
  for (std::size_t hi = 0; hi < h_values.size(); ++hi) {
    const double h = h_values[hi];
    std::vector<double> d(replications);
    parallel_for_index(replications, 0, [&](std::uint32_t rep) {
      CoupledEngine engine(g, p);
      const InfectionState x0 = random_initial_state(
          g, InitSpec{0.1, rng::derive_key(seed, rng::tag::init, hi, rep)});
      const RandomBlock block(rng::derive_key(seed, rng::tag::misc, hi), rep, 1);
      const InfectionState x1_true = engine.des_span(x0, block, h);
      const InfectionState x1_cf = engine.dts_step(x0, block, h);
      d[rep] = l1_distance(x1_true, x1_cf) / h;
    });
    double d_sum = 0;
    for (double v : d) d_sum += v;
    lx.push_back(std::log10(h));
    ly.push_back(std::log10(d_sum / replications));
  }
  const auto [slope, intercept] = least_squares_line(lx, ly);
  const bool pass = slope >= 0.7 && slope <= 1.3;
  return {kind == ProcessKind::si ? "lemma_3a_d1_slope" : "lemma_3b_d1_slope",
          pass, fmt("slope=%.3f (expect [0.7,1.3])", slope)};
}

CheckResult check_lipschitz(ProcessKind kind, std::uint32_t pairs,
                            std::uint32_t blocks, std::uint64_t seed) {
  const Graph g = make_torus(30, 30);
  const double mu = kind == ProcessKind::sis ? 0.2 : 0.0;
  const ProcessParams p{kind, 1.0, mu};
  const double L = g.max_degree() + (kind == ProcessKind::sis ? mu : 0.0);
  const double h = 0.1;

  std::vector<double> margins(pairs, -1e300);
  parallel_for_index(pairs, 0, [&](std::uint32_t pair) {
    CoupledEngine engine(g, p);
    rng::Stream pair_stream(rng::derive_key(seed, rng::tag::misc, 0x4c50u, pair));
    InfectionState z = random_initial_state(
        g, InitSpec{0.1, rng::derive_key(seed, rng::tag::init, pair)});
    InfectionState x = z;
    const auto extra = 1 + pair_stream.next_below(5);
    for (std::uint64_t e = 0; e < extra; ++e)
      x.infect(static_cast<std::uint32_t>(pair_stream.next_below(g.node_count())));
    const double dist = l1_distance(x, z);
    if (dist == 0) return;

    double sum = 0, sum_sq = 0;
    for (std::uint32_t b = 0; b < blocks; ++b) {
      const RandomBlock block(rng::derive_key(seed, rng::tag::block, pair), b, 1);
      const InfectionState gx = engine.dts_step(x, block, h);
      const InfectionState gz = engine.dts_step(z, block, h);
      // |f(x,A)-f(z,A)| = (1/h) sum_j |(gx_j - x_j) - (gz_j - z_j)|
      std::uint32_t units = 0;
      for (std::uint32_t j = 0; j < g.node_count(); ++j) {
        const int dx = static_cast<int>(gx.infected(j)) - static_cast<int>(x.infected(j));
        const int dz = static_cast<int>(gz.infected(j)) - static_cast<int>(z.infected(j));
        units += static_cast<std::uint32_t>(std::abs(dx - dz));
      }
      const double v = units / h;
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / blocks;
    const double var = std::max(0.0, sum_sq / blocks - mean * mean);
    const double se = std::sqrt(var / blocks);
    margins[pair] = mean - (L * dist + 3.0 * se);
  });
  double worst_margin = -1e300;
  for (double m : margins) worst_margin = std::max(worst_margin, m);
  const bool pass = worst_margin <= 0;
  return {kind == ProcessKind::si ? "lemma_4a_lipschitz" : "lemma_4b_lipschitz",
          pass,
          fmt("%u pairs x %u blocks, worst margin %.4g (pass when <= 0)", pairs,
              blocks, worst_margin)};
}

CheckResult check_yule(std::uint32_t m, std::uint32_t k, double t,
                       std::uint32_t replications, std::uint64_t seed) {
  const YuleReport rep = yule_oracle_test(m, k, t, replications, seed);
  return {fmt("lemma_s4_yule_m%u_k%u", m, k), rep.pass,
          fmt("t=%g depth=%u KS=%.5f crit=%.5f mean=%.4f nb_mean=%.4f", t,
              rep.depth, rep.ks_distance, rep.critical_value, rep.empirical_mean,
              rep.expected_mean)};
}

CheckResult check_s5_dominance(std::uint32_t replications, std::uint64_t seed) {
  const Graph g = make_torus(30, 30);
  const InfectionState x0 = random_initial_state(
      g, InitSpec{0.1, rng::derive_key(seed, rng::tag::init, 0x5335u)});
  const DominanceReport rep = dominance_oracle_test(g, x0, 0.1, replications, seed);
  return {"lemma_s5_dominance", rep.pass,
          fmt("max CDF violation %.4g (pass when <= 0), mean %.3f vs bound %.3f",
              rep.max_violation, rep.empirical_mean, rep.bound_mean)};
}

CheckResult check_s6_dominance(double h, std::uint32_t replications,
                               std::uint64_t seed) {
  const DominanceCdfReport rep = lemma_s6_check(h, replications, seed);
  return {"lemma_s6_dominance", rep.pass,
          fmt("h=%g max CDF gap %.4g (tol 0.02), mean %.3f vs bound %.3f", h,
              rep.max_violation, rep.mean_observed, rep.mean_bound)};
}

CheckResult check_nb_divisibility(std::uint32_t samples, std::uint64_t seed) {
  // NB(r1,p) + NB(r2,p) ~ NB(r1+r2,p) compared by two-sample KS.
  const double r1 = 1.0 / 3.0, r2 = 5.0 / 4.0, p = 0.45;
  rng::Stream stream(rng::derive_key(seed, rng::tag::misc, 0x4e42u));
  std::vector<std::uint64_t> sum_samples(samples), direct_samples(samples);
  std::uint64_t y_max = 0;
  for (std::uint32_t i = 0; i < samples; ++i) {
    sum_samples[i] = nb_sample(stream, NegBinomial{r1, p}) +
                     nb_sample(stream, NegBinomial{r2, p});
    direct_samples[i] = nb_sample(stream, NegBinomial{r1 + r2, p});
    y_max = std::max({y_max, sum_samples[i], direct_samples[i]});
  }
  std::vector<double> cdf_a(y_max + 1, 0), cdf_b(y_max + 1, 0);
  for (std::uint32_t i = 0; i < samples; ++i) {
    cdf_a[sum_samples[i]] += 1.0;
    cdf_b[direct_samples[i]] += 1.0;
  }
  double ks = 0, acc_a = 0, acc_b = 0;
  for (std::uint64_t y = 0; y <= y_max; ++y) {
    acc_a += cdf_a[y] / samples;
    acc_b += cdf_b[y] / samples;
    ks = std::max(ks, std::abs(acc_a - acc_b));
  }
  return {"nb_divisibility", ks < 0.01,
          fmt("two-sample KS %.5f (tol 0.01) at %u samples", ks, samples)};
}

std::vector<CheckResult> run_suite(const std::string& suite,
                                   const VerifyOptions& opt) {
  const auto scaled = [&](double base) {
    return static_cast<std::uint32_t>(std::max(1.0, base * opt.scale));
  };
  std::vector<CheckResult> results;
  const bool lemmas = suite == "lemmas" || suite == "all";
  const bool coupling = suite == "coupling" || suite == "all";
  const bool oracles = suite == "oracles" || suite == "all";
  if (!lemmas && !coupling && !oracles)
    throw std::invalid_argument("verify: unknown suite '" + suite + "'");

  if (lemmas) {
    results.push_back(check_lemma_s2_grid(scaled(10000), opt.seed));
    results.push_back(check_lemma_s3_grid(scaled(10000), opt.seed));
    results.push_back(check_lemma_s8(scaled(10000), opt.seed));
  }
  if (coupling) {
    results.push_back(check_theorem_1a(scaled(20000), opt.seed));
    const std::vector<double> sweep_h{0.005, 0.01, 0.02, 0.05, 0.1};
    for (const ProcessKind kind : {ProcessKind::si, ProcessKind::sis}) {
      const double mu = kind == ProcessKind::sis ? 0.2 : 0.0;
      const ConvergenceStudy study =
          run_convergence_study(kind, sweep_h, scaled(100), opt.seed);
      results.push_back(check_global_bound(study, mu));
      results.push_back(check_global_slope(study));
      results.push_back(check_local_bound(study, mu));
      results.push_back(check_d1_slope(kind, {0.01, 0.05, 0.2}, scaled(2000), opt.seed));
      results.push_back(check_lipschitz(kind, 20, scaled(2000), opt.seed));
    }
    results.push_back(check_s6_dominance(0.1, scaled(20000), opt.seed));
  }
  if (oracles) {
    results.push_back(check_yule(2, 4, 0.3, scaled(20000), opt.seed));
    results.push_back(check_yule(3, 3, 0.5, scaled(20000), opt.seed));
    results.push_back(check_yule(4, 4, 0.2, scaled(20000), opt.seed));
    results.push_back(check_s5_dominance(scaled(20000), opt.seed));
    results.push_back(check_nb_divisibility(scaled(100000), opt.seed));
  }
  return results;
}

}  // namespace netsim

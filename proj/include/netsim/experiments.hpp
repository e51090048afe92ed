#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "netsim/coupling.hpp"
#include "netsim/des.hpp"
#include "netsim/dts.hpp"
#include "netsim/graph.hpp"
#include "netsim/process.hpp"

namespace netsim {

// Runs fn(i) for i in [0, count) on a fixed worker pool (0 = hardware
// concurrency). Each index's work must depend only on the index, so the
// schedule cannot change any result.
void parallel_for_index(std::uint32_t count, std::uint32_t workers,
                        const std::function<void(std::uint32_t)>& fn);

enum class RunMode { des, dts, coupled };

struct ExperimentConfig {
  GraphSpec graph;
  ProcessParams params;
  InitSpec init;  // init.seed is ignored; per-replication seeds are derived
  double t_end = 1.0;
  std::uint32_t replications = 1500;
  std::vector<double> h_values;  // dts/coupled modes
  RunMode mode = RunMode::des;
  StepPolicy policy = StepPolicy::truncate;
  std::uint64_t master_seed = 1;
  std::uint32_t workers = 0;  // 0 = hardware concurrency
  bool regenerate_graph_per_rep = false;
};

struct ReplicationRecord {
  std::uint32_t rep;
  std::string algorithm;  // "des" or "dts h=<h>"
  double h;               // 0 for DES
  double prevalence;      // |x| / n at the end of the run
  std::uint64_t events;
  std::uint64_t steps;
  std::uint64_t timers;   // S-I edge timers (cost accounting; not in the CSV)
  double wall_seconds;
};

struct SummaryRow {
  std::string algorithm;
  double mean_events = 0;
  double mean_steps = 0;
  double mean_timers = 0;
  double mean_cpu_seconds = 0;
  std::optional<double> prev_diff;  // |mean prevalence - DES mean|; empty for DES
};

struct ExperimentResult {
  std::vector<ReplicationRecord> records;
  std::vector<SummaryRow> summary;
};

// DES mode runs the exact engine only; DTS mode runs a DES baseline plus one
// DTS per h value. Each replication draws its own initial state from
// (master_seed, rep), shared across algorithms, so prevalence differences are
// not inflated by initial-state noise. Records are bit-reproducible for a
// given master_seed regardless of worker count.
ExperimentResult run_replicated(const ExperimentConfig& cfg);

// Re-executes one replication with the exact per-rep derived seeds, keeping
// the full event log / state sequence (for dumps; determinism makes the
// rerun identical to the harness run).
Trajectory rerun_des_replication(const ExperimentConfig& cfg, std::uint32_t rep);
DtsTrajectory rerun_dts_replication(const ExperimentConfig& cfg, std::uint32_t rep,
                                    std::size_t h_index);

struct CoupledRunResult {
  double h;
  ErrorReport report;
  std::vector<CoupledPath> paths;  // kept only when keep_paths
};

std::vector<CoupledRunResult> run_coupled_replicated(const ExperimentConfig& cfg,
                                                     bool keep_paths = false);

struct SweepPoint {
  double h;
  double mean_gap;  // coupled: mean |eps_M|/n; independent: |mean prev diff|
  double std_error;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  double slope = 0;
  double intercept = 0;
  bool degenerate = false;  // some gap was zero; slope undefined
};

// Least-squares line on log10(gap) vs log10(h). Requires >= 3 distinct h.
SweepResult step_size_sweep(const ExperimentConfig& cfg);

// Fits y = slope*x + intercept; used by the sweep and exposed for tests.
std::pair<double, double> least_squares_line(const std::vector<double>& x,
                                             const std::vector<double>& y);

struct YuleReport {
  bool pass = false;
  double ks_distance = 0;
  double critical_value = 0;
  std::uint32_t depth = 0;
  std::uint64_t boundary_hits = 0;
  double empirical_mean = 0;
  double expected_mean = 0;
};

// Lemma S4: SI spread from the root of an (m, k-1, ...) tree compared with
// NB(m/(k-2), 1-exp(-(k-2)t)) by KS distance. depth = 0 picks the smallest
// depth whose union-bound leaf-hit probability is < 1e-4; the empirical
// boundary-hit fraction must still be < 1e-3 or the run is rejected.
YuleReport yule_oracle_test(std::uint32_t m, std::uint32_t k, double t,
                            std::uint32_t replications, std::uint64_t seed,
                            std::uint32_t depth = 0);

struct DominanceReport {
  bool pass = false;
  double max_violation = 0;  // max over y of (nb_cdf(y) - tolerance) - F_emp(y)
  double empirical_mean = 0;
  double bound_mean = 0;
};

// Lemma S5: N(t)-N(0) from the SI DES is dominated in distribution by
// NB(|x0|k/(k-2), 1-exp(-(k-2)t)); empirical CDF must sit above the exact
// NB CDF minus a 0.02 Monte-Carlo allowance at every integer.
DominanceReport dominance_oracle_test(const Graph& g, const InfectionState& x0,
                                      double t, std::uint32_t replications,
                                      std::uint64_t seed);

}  // namespace netsim

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netsim/experiments.hpp"
#include "netsim/process.hpp"

namespace netsim {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // measured statistic, threshold, parameters
};

// Scalar-inequality grids (Lemma S2, Lemma S3) and the Lemma S8
// combinatorial inequality on sampled state pairs over random graphs.
CheckResult check_lemma_s2_grid(std::uint32_t points, std::uint64_t seed);
CheckResult check_lemma_s3_grid(std::uint32_t points, std::uint64_t seed);
CheckResult check_lemma_s8(std::uint32_t pairs, std::uint64_t seed);

// Theorem 1A: coupled SI dominance over at least min_steps steps mixed over
// torus/small-world graphs and h in {0.01, 0.1, 0.5}. Zero tolerance.
CheckResult check_theorem_1a(std::uint64_t min_steps, std::uint64_t seed);

// Shared coupled sweep: per-h error report on the 30x30 torus.
struct ConvergenceStudy {
  ProcessKind kind;
  std::vector<double> h_values;
  std::vector<ErrorReport> reports;  // parallel to h_values
};

ConvergenceStudy run_convergence_study(ProcessKind kind,
                                       const std::vector<double>& h_values,
                                       std::uint32_t replications,
                                       std::uint64_t seed);

// Theorem 2A/2B: mean |eps_M| <= C*K*h at every h in the study.
CheckResult check_global_bound(const ConvergenceStudy& study, double mu);
// Figure 2 / strong order: log-log slope of mean |eps_M|/n within [0.7, 1.3].
CheckResult check_global_slope(const ConvergenceStudy& study);
// Lemma 3A/3B: mean |d_i| <= C*h at every h in the study.
CheckResult check_local_bound(const ConvergenceStudy& study, double mu);
// Mean |d_1| log-log slope within [0.7, 1.3] (one coupled step per rep).
CheckResult check_d1_slope(ProcessKind kind, const std::vector<double>& h_values,
                           std::uint32_t replications, std::uint64_t seed);

// Lemma 4A/4B: empirical E|f(x,A)-f(z,A)| <= L|x-z| + 3 SE over sampled
// dominated pairs differing in <= 5 nodes on the 30x30 torus, h = 0.1.
CheckResult check_lipschitz(ProcessKind kind, std::uint32_t pairs,
                            std::uint32_t blocks, std::uint64_t seed);

// Appendix oracles.
CheckResult check_yule(std::uint32_t m, std::uint32_t k, double t,
                       std::uint32_t replications, std::uint64_t seed);
CheckResult check_s5_dominance(std::uint32_t replications, std::uint64_t seed);
CheckResult check_s6_dominance(double h, std::uint32_t replications,
                               std::uint64_t seed);
CheckResult check_nb_divisibility(std::uint32_t samples, std::uint64_t seed);

struct VerifyOptions {
  std::uint64_t seed = 1;
  double scale = 1.0;  // multiplies the default replication counts
};

// Suites used by the CLI: "lemmas", "coupling", "oracles", "all".
std::vector<CheckResult> run_suite(const std::string& suite,
                                   const VerifyOptions& opt);

}  // namespace netsim

// netsim: SI/SIS contact-process simulation on networks with exact
// discrete-event and fixed-step discrete-time engines, coupled error
// measurement, analytic error bounds and the verification suites.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "netsim/bounds.hpp"
#include "netsim/config.hpp"
#include "netsim/experiments.hpp"
#include "netsim/graph.hpp"
#include "netsim/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string fmt_f6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::uint64_t fallback_seed() {
  if (const char* env = std::getenv("NETSIM_SEED")) return netsim::parse_u64(env);
  return 1;
}

// Flags override config-file values; both feed one key set.
struct CommonFlags {
  std::string config_path;
  std::optional<std::string> graph_kind, process_kind, mode, step_policy, out_dir;
  std::optional<std::uint64_t> width, height, degree, graph_seed, replications,
      workers, seed;
  std::optional<double> beta, mu, prevalence, t_end;
  std::vector<double> h_values;
  std::uint64_t dump_trajectories = 0;  // first N DES replications
  std::uint64_t dump_prevalence = 0;    // first N DTS replications per h
  bool regenerate_graph = false;

  void register_flags(CLI::App* cmd) {
    cmd->set_help_flag("--help", "print help");  // frees -h/--h for step sizes
    cmd->add_option("--config", config_path, "key = value config file");
    cmd->add_option("--kind", graph_kind, "torus | small-world");
    cmd->add_option("--width", width, "lattice width");
    cmd->add_option("--height", height, "lattice height");
    cmd->add_option("--degree", degree, "small-world target degree");
    cmd->add_option("--graph-seed", graph_seed, "small-world construction seed");
    cmd->add_option("--process", process_kind, "si | sis");
    cmd->add_option("--beta", beta, "per-edge infection rate");
    cmd->add_option("--mu", mu, "recovery rate (sis)");
    cmd->add_option("--prevalence", prevalence, "initial infected fraction");
    cmd->add_option("--t-end", t_end, "simulation horizon");
    cmd->add_option("--h", h_values, "step size(s)");
    cmd->add_option("--replications", replications, "replication count");
    cmd->add_option("--mode", mode, "des | dts | coupled");
    cmd->add_option("--step-policy", step_policy, "truncate | partial-final");
    cmd->add_option("--workers", workers, "worker threads (0 = hardware)");
    cmd->add_option("--seed", seed, "master seed");
    cmd->add_option("--out-dir", out_dir, "output directory");
    cmd->add_option("--dump-trajectories", dump_trajectories,
                    "write event logs for the first N DES replications");
    cmd->add_option("--dump-prevalence", dump_prevalence,
                    "write per-step prevalence for the first N DTS replications");
    cmd->add_flag("--regenerate-graph", regenerate_graph,
                  "draw a fresh random graph per replication");
  }

  netsim::RunConfig merged() const {
    netsim::RunConfig cfg;
    if (!config_path.empty()) cfg = netsim::RunConfig::parse_file(config_path);
    auto set_if = [&](const char* key, const auto& opt_value) {
      if (!opt_value) return;
      using V = std::decay_t<decltype(*opt_value)>;
      if constexpr (std::is_same_v<V, std::string>) cfg.set(key, *opt_value);
      else if constexpr (std::is_same_v<V, double>) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", *opt_value);
        cfg.set(key, buf);
      } else {
        cfg.set(key, std::to_string(*opt_value));
      }
    };
    set_if("graph.kind", graph_kind);
    set_if("graph.width", width);
    set_if("graph.height", height);
    set_if("graph.target_degree", degree);
    set_if("graph.seed", graph_seed);
    set_if("process.kind", process_kind);
    set_if("process.beta", beta);
    set_if("process.mu", mu);
    set_if("init.prevalence", prevalence);
    set_if("run.t_end", t_end);
    set_if("run.replications", replications);
    set_if("run.mode", mode);
    set_if("run.step_policy", step_policy);
    set_if("run.workers", workers);
    set_if("seed", seed);
    set_if("output.dir", out_dir);
    if (!h_values.empty()) {
      std::string list;
      char buf[40];
      for (double h : h_values) {
        if (!list.empty()) list += ',';
        std::snprintf(buf, sizeof buf, "%.17g", h);
        list += buf;
      }
      cfg.set("run.h", list);
    }
    return cfg;
  }
};

netsim::GraphSpec graph_spec_from(const netsim::RunConfig& cfg) {
  netsim::GraphSpec spec;
  const std::string kind = cfg.get_string_or("graph.kind", "torus");
  if (kind == "torus") spec.kind = netsim::GraphSpec::Kind::torus;
  else if (kind == "small-world") spec.kind = netsim::GraphSpec::Kind::small_world;
  else if (kind == "tree") spec.kind = netsim::GraphSpec::Kind::tree;
  else throw std::invalid_argument("unknown graph.kind '" + kind + "'");
  spec.width = static_cast<std::uint32_t>(cfg.get_u64_or("graph.width", 30));
  spec.height = static_cast<std::uint32_t>(cfg.get_u64_or("graph.height", 30));
  spec.target_degree =
      static_cast<std::uint32_t>(cfg.get_u64_or("graph.target_degree", 5));
  spec.seed = cfg.get_u64_or("graph.seed", 1);
  return spec;
}

netsim::ExperimentConfig experiment_config_from(const netsim::RunConfig& cfg) {
  netsim::ExperimentConfig exp;
  exp.graph = graph_spec_from(cfg);
  const std::string process = cfg.get_string_or("process.kind", "si");
  if (process == "si") exp.params.kind = netsim::ProcessKind::si;
  else if (process == "sis") exp.params.kind = netsim::ProcessKind::sis;
  else throw std::invalid_argument("unknown process.kind '" + process + "'");
  exp.params.beta = cfg.get_double_or("process.beta", 1.0);
  exp.params.mu = cfg.get_double_or("process.mu", 0.0);
  exp.init.prevalence = cfg.get_double_or("init.prevalence", 0.1);
  exp.t_end = cfg.get_double_or("run.t_end", 1.0);
  exp.replications =
      static_cast<std::uint32_t>(cfg.get_u64_or("run.replications", 100));
  if (cfg.has("run.h")) exp.h_values = cfg.get_double_list("run.h");
  const std::string mode = cfg.get_string_or("run.mode", "des");
  if (mode == "des") exp.mode = netsim::RunMode::des;
  else if (mode == "dts") exp.mode = netsim::RunMode::dts;
  else if (mode == "coupled") exp.mode = netsim::RunMode::coupled;
  else throw std::invalid_argument("unknown run.mode '" + mode + "'");
  const std::string policy = cfg.get_string_or("run.step_policy", "truncate");
  if (policy == "truncate") exp.policy = netsim::StepPolicy::truncate;
  else if (policy == "partial-final") exp.policy = netsim::StepPolicy::partial_final;
  else throw std::invalid_argument("unknown run.step_policy '" + policy + "'");
  exp.workers = static_cast<std::uint32_t>(cfg.get_u64_or("run.workers", 0));
  exp.master_seed = cfg.get_u64_or("seed", fallback_seed());
  return exp;
}

std::string replication_csv(const std::vector<netsim::ReplicationRecord>& records) {
  std::string csv = "rep,algorithm,h,prevalence,events,steps,wall_seconds\n";
  for (const auto& r : records) {
    csv += std::to_string(r.rep) + ',' + r.algorithm + ',' + fmt_g9(r.h) + ',' +
           fmt_g9(r.prevalence) + ',' + std::to_string(r.events) + ',' +
           std::to_string(r.steps) + ',' + fmt_f6(r.wall_seconds) + '\n';
  }
  return csv;
}

// Prevalence histogram with bin width 1/n (bins sit exactly on the
// attainable infected counts).
std::string histogram_csv(const std::vector<netsim::ReplicationRecord>& records,
                          std::uint32_t n) {
  std::map<std::pair<std::string, std::uint32_t>, std::uint64_t> bins;
  for (const auto& r : records) {
    const auto count = static_cast<std::uint32_t>(std::lround(r.prevalence * n));
    ++bins[{r.algorithm, count}];
  }
  std::string csv = "algorithm,prevalence,count\n";
  for (const auto& [key, hits] : bins)
    csv += key.first + ',' + fmt_g9(static_cast<double>(key.second) / n) + ',' +
           std::to_string(hits) + '\n';
  return csv;
}

std::string summary_csv(const netsim::ExperimentConfig& cfg,
                        const std::vector<netsim::SummaryRow>& summary) {
  const char* graph = cfg.graph.kind == netsim::GraphSpec::Kind::torus
                          ? "lattice"
                          : (cfg.graph.kind == netsim::GraphSpec::Kind::small_world
                                 ? "small-world"
                                 : "tree");
  const char* process = cfg.params.kind == netsim::ProcessKind::si ? "si" : "sis";
  std::string csv = "graph,process,algorithm,events,time_steps,cpu_time_s,prev_diff\n";
  for (const auto& row : summary) {
    csv += std::string(graph) + ',' + process + ',' + row.algorithm + ',' +
           fmt_g9(row.mean_events) + ',' + fmt_g9(row.mean_steps) + ',' +
           fmt_f6(row.mean_cpu_seconds) + ',' +
           (row.prev_diff ? fmt_g9(*row.prev_diff) : std::string{}) + '\n';
  }
  return csv;
}

std::string error_trace_csv(const std::vector<netsim::CoupledRunResult>& runs) {
  std::string csv = "rep,step,time,eps_l1,d_l1,dominance_ok\n";
  for (const auto& run : runs) {
    for (std::size_t rep = 0; rep < run.paths.size(); ++rep) {
      const auto& path = run.paths[rep];
      for (std::size_t s = 0; s < path.records.size(); ++s) {
        const auto& rec = path.records[s];
        csv += std::to_string(rep) + ',' + std::to_string(s + 1) + ',' +
               fmt_g9(rec.time) + ',' + std::to_string(rec.eps_l1) + ',' +
               fmt_g9(rec.d_units / rec.step_len) + ',' +
               (rec.dominance_ok ? "1" : "0") + '\n';
      }
    }
  }
  return csv;
}

int cmd_generate_graph(const CommonFlags& flags, const std::string& out_path,
                       std::uint64_t tree_m, std::uint64_t tree_k,
                       std::uint64_t tree_depth) {
  netsim::RunConfig cfg = flags.merged();
  // For graph generation a bare --seed means the construction seed.
  if (cfg.has("seed") && !cfg.has("graph.seed"))
    cfg.set("graph.seed", cfg.get_string("seed"));
  netsim::GraphSpec spec = graph_spec_from(cfg);
  spec.tree_m = static_cast<std::uint32_t>(tree_m);
  spec.tree_k = static_cast<std::uint32_t>(tree_k);
  spec.tree_depth = static_cast<std::uint32_t>(tree_depth);
  const netsim::Graph g = netsim::build_graph(spec);
  if (out_path.empty()) std::cout << g.to_edge_list();
  else write_file(out_path, g.to_edge_list());
  std::printf("n=%u edges=%u k=%u\n", g.node_count(), g.edge_count(), g.max_degree());
  return kExitOk;
}

int cmd_run(const CommonFlags& flags) {
  const netsim::RunConfig cfg = flags.merged();
  netsim::ExperimentConfig exp = experiment_config_from(cfg);
  exp.regenerate_graph_per_rep = flags.regenerate_graph;
  const std::string out_dir = cfg.get_string_or("output.dir", ".");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir + "'");

  if (exp.mode == netsim::RunMode::coupled) {
    const auto runs = netsim::run_coupled_replicated(exp, true);
    write_file(out_dir + "/errors.csv", error_trace_csv(runs));
    std::string csv =
        "h,steps,replications,mean_final_eps_l1,mean_final_eps_per_node,"
        "mean_final_eps_signed,mean_d_l1,dominance_violations\n";
    const double n = netsim::build_graph(exp.graph).node_count();
    for (const auto& run : runs) {
      csv += fmt_g9(run.h) + ',' + std::to_string(run.report.steps) + ',' +
             std::to_string(run.report.replications) + ',' +
             fmt_g9(run.report.mean_final_eps_l1) + ',' +
             fmt_g9(run.report.mean_final_eps_l1 / n) + ',' +
             fmt_g9(run.report.mean_final_eps_signed) + ',' +
             fmt_g9(run.report.mean_d_overall) + ',' +
             std::to_string(run.report.dominance_violations) + '\n';
    }
    write_file(out_dir + "/coupled_summary.csv", csv);
    std::printf("wrote %s/errors.csv and %s/coupled_summary.csv\n", out_dir.c_str(),
                out_dir.c_str());
    return kExitOk;
  }

  const netsim::ExperimentResult result = netsim::run_replicated(exp);
  write_file(out_dir + "/replications.csv", replication_csv(result.records));
  write_file(out_dir + "/summary.csv", summary_csv(exp, result.summary));
  write_file(out_dir + "/histogram.csv",
             histogram_csv(result.records,
                           netsim::build_graph(exp.graph).node_count()));
  for (const auto& row : result.summary)
    std::printf("%-14s events=%.1f steps=%.1f timers=%.1f cpu=%.3fs%s\n",
                row.algorithm.c_str(), row.mean_events, row.mean_steps,
                row.mean_timers, row.mean_cpu_seconds,
                row.prev_diff ? (" prev_diff=" + fmt_g9(*row.prev_diff)).c_str()
                              : "");

  for (std::uint64_t rep = 0;
       rep < std::min<std::uint64_t>(flags.dump_trajectories, exp.replications);
       ++rep) {
    const netsim::Trajectory tr =
        netsim::rerun_des_replication(exp, static_cast<std::uint32_t>(rep));
    const std::string stem = out_dir + "/trajectory_rep" + std::to_string(rep);
    write_file(stem + ".csv", netsim::trajectory_csv(tr));
    write_file(stem + "_initial.hex", tr.initial.to_hex() + "\n");
  }
  if (exp.mode == netsim::RunMode::dts) {
    for (std::size_t hi = 0; hi < exp.h_values.size(); ++hi) {
      for (std::uint64_t rep = 0;
           rep < std::min<std::uint64_t>(flags.dump_prevalence, exp.replications);
           ++rep) {
        const netsim::DtsTrajectory tr = netsim::rerun_dts_replication(
            exp, static_cast<std::uint32_t>(rep), hi);
        write_file(out_dir + "/prevalence_h" + std::to_string(hi) + "_rep" +
                       std::to_string(rep) + ".csv",
                   netsim::prevalence_csv(tr));
      }
    }
  }
  std::printf("wrote %s/replications.csv and %s/summary.csv\n", out_dir.c_str(),
              out_dir.c_str());
  return kExitOk;
}

int cmd_sweep(const CommonFlags& flags) {
  const netsim::RunConfig cfg = flags.merged();
  netsim::ExperimentConfig exp = experiment_config_from(cfg);
  const std::string out_dir = cfg.get_string_or("output.dir", ".");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + out_dir + "'");

  const netsim::SweepResult sweep = netsim::step_size_sweep(exp);
  std::string csv = "h,mean_gap,stderr\n";
  for (const auto& pt : sweep.points)
    csv += fmt_g9(pt.h) + ',' + fmt_g9(pt.mean_gap) + ',' + fmt_g9(pt.std_error) + '\n';
  if (sweep.degenerate) {
    csv += "slope,undefined\n";
  } else {
    csv += "slope," + fmt_g9(sweep.slope) + "\nintercept," + fmt_g9(sweep.intercept) +
           '\n';
  }
  write_file(out_dir + "/sweep.csv", csv);
  if (sweep.degenerate)
    std::printf("sweep degenerate: some gap was zero; slope undefined\n");
  else
    std::printf("slope=%.4f intercept=%.4f\n", sweep.slope, sweep.intercept);
  return kExitOk;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, double scale) {
  const auto results = netsim::run_suite(suite, netsim::VerifyOptions{seed, scale});
  bool all_pass = true;
  for (const auto& r : results) {
    std::printf("%-28s %s  %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL",
                r.detail.c_str());
    all_pass = all_pass && r.pass;
  }
  std::printf("%zu checks, %s\n", results.size(), all_pass ? "all passed" : "FAILURES");
  return all_pass ? kExitOk : kExitVerifyFailed;
}

int cmd_bounds(double n, double k, double mu, double T,
               const std::vector<double>& h_values, const std::string& process) {
  std::string csv = "process,n,k,mu,T,h,C,K,bound,vacuous\n";
  auto add_rows = [&](const char* name) {
    for (double h : h_values) {
      csv += std::string(name) + ',' + fmt_g9(n) + ',' + fmt_g9(k) + ',' +
             fmt_g9(mu) + ',' + fmt_g9(T) + ',' + fmt_g9(h) + ',';
      if (h > 1.0) {
        csv += ",,,h>1\n";  // bound not established; flagged, not computed
        continue;
      }
      const netsim::BoundInputs in{n, k, mu, T, h};
      const netsim::BoundResult r = std::string(name) == "si"
                                        ? netsim::si_bound(in)
                                        : netsim::sis_bound(in);
      csv += fmt_g9(r.C) + ',' + fmt_g9(r.K) + ',' + fmt_g9(r.bound) + ',' +
             (r.vacuous ? "true" : "false") + '\n';
    }
  };
  if (process == "si" || process == "both") add_rows("si");
  if (process == "sis" || process == "both") add_rows("sis");
  if (process != "si" && process != "sis" && process != "both")
    throw std::invalid_argument("bounds: process must be si, sis or both");
  std::fputs(csv.c_str(), stdout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SI/SIS contact-process simulation toolkit"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate-graph", "emit a graph as an edge list");
  CommonFlags gen_flags;
  gen_flags.register_flags(gen);
  std::string gen_out;
  std::uint64_t tree_m = 2, tree_k = 4, tree_depth = 6;
  gen->add_option("--out", gen_out, "output file (default stdout)");
  gen->add_option("--m", tree_m, "tree: root child count");
  gen->add_option("--k", tree_k, "tree: inner nodes have k-1 children");
  gen->add_option("--depth", tree_depth, "tree: truncation depth");

  auto* run = app.add_subcommand("run", "replicated des/dts/coupled experiment");
  CommonFlags run_flags;
  run_flags.register_flags(run);

  auto* sweep = app.add_subcommand("sweep", "error vs step size with slope fit");
  CommonFlags sweep_flags;
  sweep_flags.register_flags(sweep);

  auto* verify = app.add_subcommand("verify", "run the property-check suites");
  verify->set_help_flag("--help", "print help");
  std::string suite = "all";
  std::uint64_t verify_seed = 0;
  double verify_scale = 1.0;
  bool seed_given = false;
  verify->add_option("--suite", suite, "lemmas | coupling | oracles | all");
  verify->add_option("--seed", verify_seed, "seed")->each([&](const std::string&) {
    seed_given = true;
  });
  verify->add_option("--scale", verify_scale, "replication-count multiplier");

  auto* bounds = app.add_subcommand("bounds", "print the error-bound table");
  bounds->set_help_flag("--help", "print help");
  double b_n = 900, b_k = 4, b_mu = 0, b_T = 1;
  std::vector<double> b_h{0.01};
  std::string b_process = "both";
  bounds->add_option("--n", b_n, "node count");
  bounds->add_option("--k", b_k, "max degree");
  bounds->add_option("--mu", b_mu, "recovery rate");
  bounds->add_option("--T", b_T, "horizon");
  bounds->add_option("--h", b_h, "step size(s)");
  bounds->add_option("--process", b_process, "si | sis | both");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed())
      return cmd_generate_graph(gen_flags, gen_out, tree_m, tree_k, tree_depth);
    if (run->parsed()) return cmd_run(run_flags);
    if (sweep->parsed()) return cmd_sweep(sweep_flags);
    if (verify->parsed())
      return cmd_verify(suite, seed_given ? verify_seed : fallback_seed(),
                        verify_scale);
    if (bounds->parsed()) return cmd_bounds(b_n, b_k, b_mu, b_T, b_h, b_process);
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}

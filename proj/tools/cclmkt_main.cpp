// cclmkt: batch driver for the counterparty-credit-limit market toolkit.
//
//   simulate  one model run over a CCL network -> trades/quotes/observations
//   sweep     edge-density sweep over a topology -> per-run and aggregate CSVs
//   analyze   observation CSVs -> skipping/correlation/volatility/z tables
//   generate  scripted scenario -> synthetic tick/trade day + ground truth
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 internal failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ccl/analyze.hpp"
#include "ccl/error.hpp"
#include "ccl/generate.hpp"
#include "ccl/ingest.hpp"
#include "ccl/io.hpp"
#include "ccl/network.hpp"
#include "ccl/sim_io.hpp"
#include "ccl/simulator.hpp"
#include "ccl/sweep.hpp"

namespace {

namespace fs = std::filesystem;

std::vector<double> parse_density_grid(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(ccl::io::parse_double(item, "--densities"));
  }
  if (out.empty()) {
    ccl::fail(ccl::ErrorKind::invalid_argument, "--densities: empty grid");
  }
  return out;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream os(dir + "/" + name);
  if (!os) {
    ccl::fail(ccl::ErrorKind::data_integrity,
              "cannot write " + dir + "/" + name);
  }
  return os;
}

struct SimulateArgs {
  int n = 128;
  std::string topology = "er";
  double density = 1.0;
  double psi = 0.0;
  std::uint64_t net_seed = 1;
  std::string net_file;
  std::string net_out;
  ccl::sim::ModelParams model;
};

void add_model_flags(CLI::App* cmd, ccl::sim::ModelParams& model) {
  cmd->add_option("--epsilon", model.epsilon, "spread scale epsilon");
  cmd->add_option("--kappa", model.kappa, "spread reversion rate");
  cmd->add_option("--gamma", model.gamma, "mid-price volatility");
  cmd->add_option("--m0", model.m0_bar, "initial mean mid-price");
  cmd->add_option("--dt", model.dt, "time step (0: 1/(3 N^2))");
  cmd->add_option("--t-burn", model.t_burn, "burn-in end time");
  cmd->add_option("--t-end", model.t_end, "simulation horizon");
}

int run_simulate(const SimulateArgs& args, std::uint64_t seed,
                 const std::string& out_dir) {
  ccl::net::CclNetwork network;
  ccl::net::ErGenerationStats net_stats;
  if (!args.net_file.empty()) {
    std::ifstream in(args.net_file);
    if (!in) {
      ccl::fail(ccl::ErrorKind::data_integrity,
                "cannot open network file " + args.net_file);
    }
    network = ccl::net::read_edge_list(in);
  } else if (args.topology == "cp") {
    network = ccl::net::generate_core_periphery(args.n, args.psi);
  } else if (args.topology == "er") {
    std::mt19937_64 gen(args.net_seed);
    network =
        ccl::net::generate_erdos_renyi(args.n, args.density, gen, &net_stats);
  } else {
    ccl::fail(ccl::ErrorKind::invalid_argument,
              "--topology must be er or cp");
  }

  ccl::sim::ModelParams params = args.model;
  params.n = network.n_nodes;
  params.seed = seed;
  const auto out = ccl::sim::run(params, network);

  ccl::io::Provenance prov("cclmkt", "simulate");
  prov.put("n", static_cast<long long>(params.n));
  prov.put("topology", args.topology);
  prov.put("density", ccl::net::edge_density(network));
  prov.put("psi", args.psi);
  prov.put("net_seed", std::to_string(args.net_seed));
  prov.put("net_edges", static_cast<long long>(network.n_edges()));
  prov.put("net_rejections", static_cast<long long>(net_stats.rejections));
  prov.put("edge_count_clamped",
           static_cast<long long>(net_stats.edge_count_clamped ? 1 : 0));
  prov.put("epsilon", params.epsilon);
  prov.put("kappa", params.kappa);
  prov.put("gamma", params.gamma);
  prov.put("m0_bar", params.m0_bar);
  prov.put("dt", params.step_dt());
  prov.put("t_burn", params.t_burn);
  prov.put("t_end", params.t_end);
  prov.put_seed(seed);
  prov.put("init_trades_discarded", out.meta.init_trades_discarded);
  prov.put("multi_crossing_steps", out.meta.multi_crossing_steps);

  {
    auto os = open_out(out_dir, "trades.csv");
    ccl::sim::write_trades_csv(out, prov, os);
  }
  {
    auto os = open_out(out_dir, "quotes.csv");
    ccl::sim::write_quotes_csv(out, prov, os);
  }
  {
    auto os = open_out(out_dir, "observations.csv");
    prov.write(os);
    ccl::ingest::write_observations_csv(ccl::sim::observations_from_run(out), os);
  }
  if (!args.net_out.empty()) {
    std::ofstream os(args.net_out);
    if (!os) {
      ccl::fail(ccl::ErrorKind::data_integrity, "cannot write " + args.net_out);
    }
    ccl::net::write_edge_list(network, os);
  }
  std::cout << "simulate: " << out.trades.size() << " trades, "
            << out.meta.steps << " steps -> " << out_dir << "\n";
  return 0;
}

int run_generate(const std::string& scenario_path, const std::string& out_dir) {
  const auto scenario = ccl::gen::parse_scenario_file(scenario_path);
  const auto day = ccl::gen::run_scenario(scenario);

  ccl::io::Provenance prov("cclmkt", "generate");
  prov.put("scenario", scenario_path);
  prov.put("institutions", static_cast<long long>(scenario.institutions));
  prov.put("tick_size", scenario.config.tick_size);
  prov.put("min_order_size", scenario.config.min_order_size);
  prov.put("orders_submitted", day.orders_submitted);
  prov.put("hidden_trades", day.hidden_injected);
  prov.put("observations", static_cast<long long>(day.truth.size()));

  {
    auto os = open_out(out_dir, "tick.csv");
    prov.write(os);
    ccl::gen::write_tick_csv(day, os);
  }
  {
    auto os = open_out(out_dir, "trades.csv");
    prov.write(os);
    ccl::gen::write_trade_csv(day, os);
  }
  {
    auto os = open_out(out_dir, "observations.csv");
    prov.write(os);
    ccl::ingest::write_observations_csv(day.truth, os);
  }
  std::cout << "generate: " << day.trade_rows.size() << " trade rows ("
            << day.hidden_injected << " hidden), " << day.truth.size()
            << " ground-truth observations -> " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"counterparty-credit-limit market toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::string out_dir = "out";
  int workers = 0;
  app.add_option("--seed", seed, "base RNG seed")->capture_default_str();
  app.add_option("--out-dir", out_dir, "output directory")
      ->capture_default_str();
  app.add_option("--workers", workers, "worker threads (0: hardware)");
  app.set_config("--config", "", "plain-text key=value configuration file");

  // simulate
  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "run the model once");
  sim_cmd->add_option("--n", sim_args.n, "institution count");
  sim_cmd->add_option("--topology", sim_args.topology, "er or cp");
  sim_cmd->add_option("--density", sim_args.density, "ER target edge density");
  sim_cmd->add_option("--psi", sim_args.psi, "CP periphery fraction");
  sim_cmd->add_option("--net-seed", sim_args.net_seed, "network RNG seed");
  sim_cmd->add_option("--net-file", sim_args.net_file, "load an edge list");
  sim_cmd->add_option("--net-out", sim_args.net_out, "write the edge list");
  add_model_flags(sim_cmd, sim_args.model);

  // sweep
  ccl::sweep::SweepSpec sweep_spec;
  std::string sweep_topology = "er";
  std::string density_text = "0.05,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0";
  auto* sweep_cmd = app.add_subcommand("sweep", "edge-density sweep");
  sweep_cmd->add_option("--topology", sweep_topology, "er or cp");
  sweep_cmd->add_option("--densities", density_text, "comma-separated grid");
  sweep_cmd->add_option("--n", sweep_spec.n, "institution count");
  sweep_cmd->add_option("--nets", sweep_spec.networks_per_density,
                        "networks per density (ER)");
  sweep_cmd->add_option("--runs", sweep_spec.runs_per_network,
                        "runs per network (ER)");
  sweep_cmd->add_option("--runs-cp", sweep_spec.runs_core_periphery,
                        "runs per density (CP)");
  sweep_cmd->add_option("--k", sweep_spec.vol_k, "volatility intervals K");
  sweep_cmd->add_option("--l", sweep_spec.vol_l, "volatility offsets L");
  add_model_flags(sweep_cmd, sweep_spec.model);

  // analyze
  ccl::analyze::Options an_opts;
  std::vector<std::string> obs_files;
  std::string signature_text;
  auto* an_cmd = app.add_subcommand("analyze", "analyze observation CSVs");
  an_cmd->add_option("files", obs_files, "observation CSV files (one per day)")
      ->required();
  an_cmd->add_option("--k", an_opts.k_intervals, "sampling intervals K");
  an_cmd->add_option("--l", an_opts.l_offsets, "sub-sample offsets L");
  an_cmd->add_option("--direction", an_opts.direction, "buy, sell, or both");
  an_cmd->add_option("--b", an_opts.bootstrap_resamples,
                     "bootstrap resamples");
  an_cmd->add_option("--signature-ks", signature_text,
                     "comma-separated K grid for signature tables");

  // generate
  std::string scenario_path;
  auto* gen_cmd = app.add_subcommand("generate", "replay a scenario file");
  gen_cmd->add_option("scenario", scenario_path, "scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sim_cmd->parsed()) {
      return run_simulate(sim_args, seed, out_dir);
    }
    if (sweep_cmd->parsed()) {
      sweep_spec.topology = sweep_topology == "cp"
                                ? ccl::net::Topology::core_periphery
                                : ccl::net::Topology::erdos_renyi;
      if (sweep_topology != "er" && sweep_topology != "cp") {
        ccl::fail(ccl::ErrorKind::invalid_argument,
                  "--topology must be er or cp");
      }
      sweep_spec.densities = parse_density_grid(density_text);
      sweep_spec.base_seed = seed;
      sweep_spec.workers = workers;
      const auto result = ccl::sweep::run_sweep(sweep_spec);
      ccl::sweep::write_sweep_csvs(result, out_dir);
      long failed = 0;
      for (const auto& r : result.runs) failed += r.failed ? 1 : 0;
      std::cout << "sweep: " << result.runs.size() << " runs (" << failed
                << " failed) -> " << out_dir << "\n";
      return 0;
    }
    if (an_cmd->parsed()) {
      an_opts.seed = seed;
      if (!signature_text.empty()) {
        an_opts.signature_ks.clear();
        std::stringstream ss(signature_text);
        std::string item;
        while (std::getline(ss, item, ',')) {
          if (!item.empty()) {
            an_opts.signature_ks.push_back(
                ccl::io::parse_long(item, "--signature-ks"));
          }
        }
      }
      std::vector<std::vector<ccl::stats::TradeObservation>> days;
      for (const auto& path : obs_files) {
        days.push_back(ccl::ingest::parse_observations_csv(path));
      }
      const auto result = ccl::analyze::analyze(days, an_opts);
      ccl::analyze::write_analysis_csvs(result, an_opts, out_dir);
      std::cout << "analyze: " << days.size() << " day(s) -> " << out_dir
                << "\n";
      return 0;
    }
    if (gen_cmd->parsed()) {
      return run_generate(scenario_path, out_dir);
    }
  } catch (const ccl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ccl::ErrorKind::invalid_argument:
      case ccl::ErrorKind::data_integrity:
      case ccl::ErrorKind::insufficient_data:
        return 2;
      default:
        return 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}

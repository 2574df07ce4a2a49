#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ccl/network.hpp"
#include "ccl/simulator.hpp"

// Edge-density sweeps: for each density on the grid, generate networks,
// run the model with derived seeds, and aggregate per-run trade counts,
// skipping costs, realized volatilities, and z ratios. Runs fan out over
// a worker pool; every worker writes into its own preassigned slot and the
// reduction is applied in a fixed index order, so the output is identical
// whatever the parallelism.

namespace ccl::sweep {

struct SweepSpec {
  net::Topology topology = net::Topology::erdos_renyi;
  std::vector<double> densities;
  int n = 64;
  int networks_per_density = 50;  // Erdos-Renyi only
  int runs_per_network = 20;      // Erdos-Renyi only
  int runs_core_periphery = 200;  // core-periphery uses one network per d
  std::uint64_t base_seed = 1;
  sim::ModelParams model;  // n and seed are overridden per task
  int workers = 0;         // 0: hardware concurrency
  long vol_k = 108;
  long vol_l = 10;
};

struct RunRecord {
  int density_index = 0;
  int net_index = 0;
  int run_index = 0;
  double d_target = 0;
  double d_actual = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;

  long trades = 0;
  double mean_skip = 0;  // NaN when the run produced no trades
  // Direction-separated first, aggregated at reporting time.
  double v_trade_buy = 0, v_quote_buy = 0;   // NaN when undefined
  double v_trade_sell = 0, v_quote_sell = 0;
  double v_trade = 0, v_quote = 0;  // means over the defined directions
  double z_buy = 0, z_sell = 0, z = 0;
  long k_buy = 0, k_sell = 0;
};

struct DensityAggregate {
  double d_target = 0;
  double d_actual_mean = 0;
  long runs_ok = 0;
  long runs_failed = 0;
  double trades_mean = 0, trades_std = 0;
  double skip_mean = 0, skip_std = 0;
  long skip_runs = 0;
  double v_trade_mean = 0, v_quote_mean = 0;
  long vol_runs = 0;
  double z_mean = 0, z_std = 0;
  long z_runs = 0;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<RunRecord> runs;
  std::vector<DensityAggregate> aggregates;
};

SweepResult run_sweep(const SweepSpec& spec);

// runs.csv and aggregates.csv under out_dir, provenance headers included.
void write_sweep_csvs(const SweepResult& result, const std::string& out_dir);

}  // namespace ccl::sweep

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ccl/network.hpp"

// Multi-institution trading model over a binary CCL network. Each
// institution carries a mid-price following a driftless geometric Brownian
// motion and a spread reverting to its floor s0; a trade fires whenever a
// connected pair's buy and sell valuations touch or cross. Trades shift
// the pair's mids back together by s0 and widen both spreads by s0/2,
// which separates the crossing quotes by 3*s0/2 at an exact touch.

namespace ccl::sim {

struct ModelParams {
  int n = 128;
  double epsilon = 0.001;  // dimensionless spread scale
  double kappa = 1.0;      // spread reversion rate, 1/time
  double gamma = 0.001;    // mid-price volatility, time^(-1/2)
  double m0_bar = 1.0;     // initial mean mid-price
  double dt = 0.0;         // time step; 0 means the default 1/(3 N^2)
  double t_burn = 2.0;
  double t_end = 10.0;
  std::uint64_t seed = 0;
  long init_budget_factor = 10;  // quiescence budget 10 N^2 trades

  double s0() const { return epsilon * m0_bar; }
  double step_dt() const {
    return dt > 0 ? dt : 1.0 / (3.0 * static_cast<double>(n) * n);
  }
  void validate() const;
};

struct MarketState {
  std::vector<double> mid;
  std::vector<double> spread;
  std::vector<double> buy;   // B = mid - spread/2
  std::vector<double> sell;  // A = mid + spread/2

  int size() const { return static_cast<int>(mid.size()); }
  void refresh_quotes(int i);
  double mean_mid() const;
};

enum class TradeDirection { buyer_initiated, seller_initiated };

std::string trade_direction_name(TradeDirection d);

struct SimTrade {
  double time = 0;
  double price = 0;  // mean of the crossing B and A
  int buyer = -1;
  int seller = -1;
  int initiator = -1;
  int acceptor = -1;
  TradeDirection direction = TradeDirection::buyer_initiated;
  // Best same-side price across all institutions at the pre-trade
  // snapshot, with the acceptor standing at the executed price (it is the
  // acceptor's limit order that trades). skipping_cost = |price -
  // global_best| and is exactly 0 whenever the acceptor is the extremum.
  double global_best = 0;
  double skipping_cost = 0;
  double mean_mid = 0;  // M-bar immediately before the trade
};

struct RunMeta {
  std::uint64_t seed = 0;
  int n = 0;
  long init_trades_discarded = 0;
  long multi_crossing_steps = 0;  // steps that opened with >1 crossing
  long max_trades_in_step = 0;
  long steps = 0;
};

struct SimOutput {
  std::vector<SimTrade> trades;  // times strictly after t_burn
  std::vector<double> quote_times;
  std::vector<double> quote_max_buy;
  std::vector<double> quote_min_sell;
  RunMeta meta;
};

// Draw mids from Normal(M0_bar, epsilon), set spreads to s0, then resolve
// any initial crossings; those trades are discarded.
MarketState init_state(const ModelParams& params, const net::CclNetwork& net,
                       std::mt19937_64& gen, long* trades_discarded = nullptr);

// One Euler-Maruyama step: spreads decay toward s0, mids take their GBM
// increment, one fresh normal draw per institution in index order.
void step(MarketState& state, const ModelParams& params, std::mt19937_64& gen);

// Ordered pairs (buyer, seller) with an edge and buy[i] >= sell[j].
std::vector<std::pair<int, int>> detect_crossings(const MarketState& state,
                                                  const net::CclNetwork& net);

TradeDirection classify_trade(double price, double mean_mid);

// Requires buy[buyer] >= sell[seller]. Snapshots, classifies, records, and
// applies the post-trade quote adjustments.
SimTrade process_trade(MarketState& state, int buyer, int seller,
                       const ModelParams& params, double time);

// Repeatedly processes the crossing whose candidate price lies furthest
// from the running mean mid until no connected pair crosses.
std::vector<SimTrade> resolve_multiple(MarketState& state,
                                       const ModelParams& params,
                                       const net::CclNetwork& net, double time,
                                       long* multi_crossing_flag = nullptr);

SimOutput run(const ModelParams& params, const net::CclNetwork& net);

}  // namespace ccl::sim

#include "ccl/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ccl/error.hpp"
#include "ccl/rng.hpp"

namespace ccl::sim {

void ModelParams::validate() const {
  if (n < 2) fail(ErrorKind::invalid_argument, "model: N must be >= 2");
  if (!(epsilon > 0) || !(kappa > 0) || !(gamma >= 0) || !(m0_bar > 0)) {
    fail(ErrorKind::invalid_argument,
         "model: epsilon, kappa, M0 must be positive and gamma >= 0");
  }
  if (!(step_dt() > 0) || !(t_end > 0) || t_burn < 0 || t_burn >= t_end) {
    fail(ErrorKind::invalid_argument, "model: need 0 <= t_burn < t_end, dt > 0");
  }
  if (kappa * step_dt() >= 1.0) {
    fail(ErrorKind::invalid_argument,
         "model: kappa * dt must stay below 1 so spreads cannot undershoot s0");
  }
}

void MarketState::refresh_quotes(int i) {
  buy[i] = mid[i] - spread[i] / 2.0;
  sell[i] = mid[i] + spread[i] / 2.0;
}

double MarketState::mean_mid() const {
  double sum = 0;
  for (double m : mid) sum += m;
  return sum / static_cast<double>(mid.size());
}

std::string trade_direction_name(TradeDirection d) {
  return d == TradeDirection::buyer_initiated ? "buy" : "sell";
}

MarketState init_state(const ModelParams& params, const net::CclNetwork& net,
                       std::mt19937_64& gen, long* trades_discarded) {
  params.validate();
  if (net.n_nodes != params.n) {
    fail(ErrorKind::invalid_argument,
         "init_state: network size does not match N");
  }
  if (!net::is_connected(net)) {
    fail(ErrorKind::invalid_argument, "init_state: network must be connected");
  }

  MarketState state;
  state.mid.resize(params.n);
  state.spread.assign(params.n, params.s0());
  state.buy.resize(params.n);
  state.sell.resize(params.n);
  for (int i = 0; i < params.n; ++i) {
    state.mid[i] = params.m0_bar + params.epsilon * rng::standard_normal(gen);
    state.refresh_quotes(i);
  }

  // Quiesce: resolve crossings produced by the initial draw and discard
  // the resulting trades.
  const long budget =
      params.init_budget_factor * static_cast<long>(params.n) * params.n;
  long processed = 0;
  for (;;) {
    auto crossings = detect_crossings(state, net);
    if (crossings.empty()) break;
    if (processed >= budget) {
      fail(ErrorKind::generation_failure,
           "init_state: quiescence not reached within the iteration budget");
    }
    auto trades = resolve_multiple(state, params, net, 0.0);
    processed += static_cast<long>(trades.size());
  }
  if (trades_discarded) *trades_discarded = processed;
  return state;
}

void step(MarketState& state, const ModelParams& params, std::mt19937_64& gen) {
  const double dt = params.step_dt();
  const double sqrt_dt = std::sqrt(dt);
  const double s0 = params.s0();
  const int n = state.size();
  for (int i = 0; i < n; ++i) {
    state.spread[i] -= params.kappa * (state.spread[i] - s0) * dt;
    state.mid[i] +=
        params.gamma * state.mid[i] * sqrt_dt * rng::standard_normal(gen);
    state.refresh_quotes(i);
  }
}

std::vector<std::pair<int, int>> detect_crossings(const MarketState& state,
                                                  const net::CclNetwork& net) {
  std::vector<std::pair<int, int>> out;
  // Cheap screen: no pair at all crosses unless the best buy reaches the
  // best sell, so most steps never touch the edge list.
  double max_buy = -std::numeric_limits<double>::infinity();
  double min_sell = std::numeric_limits<double>::infinity();
  for (int i = 0; i < state.size(); ++i) {
    max_buy = std::max(max_buy, state.buy[i]);
    min_sell = std::min(min_sell, state.sell[i]);
  }
  if (max_buy < min_sell) return out;

  for (auto [i, j] : net.edges) {
    if (state.buy[i] >= state.sell[j]) out.emplace_back(i, j);
    if (state.buy[j] >= state.sell[i]) out.emplace_back(j, i);
  }
  return out;
}

TradeDirection classify_trade(double price, double mean_mid) {
  return price > mean_mid ? TradeDirection::buyer_initiated
                          : TradeDirection::seller_initiated;
}

SimTrade process_trade(MarketState& state, int buyer, int seller,
                       const ModelParams& params, double time) {
  if (!(state.buy[buyer] >= state.sell[seller])) {
    fail(ErrorKind::internal, "process_trade: pair is not crossing");
  }

  SimTrade trade;
  trade.time = time;
  trade.buyer = buyer;
  trade.seller = seller;
  trade.price = (state.buy[buyer] + state.sell[seller]) / 2.0;
  trade.mean_mid = state.mean_mid();
  trade.direction = classify_trade(trade.price, trade.mean_mid);

  const int n = state.size();
  if (trade.direction == TradeDirection::buyer_initiated) {
    trade.initiator = buyer;
    trade.acceptor = seller;
    // Lowest sell price across all institutions; the acceptor's limit
    // order stands at the trade price itself.
    double best = trade.price;
    for (int k = 0; k < n; ++k) {
      if (k == seller) continue;
      best = std::min(best, state.sell[k]);
    }
    trade.global_best = best;
    trade.skipping_cost = trade.price - best;
  } else {
    trade.initiator = seller;
    trade.acceptor = buyer;
    double best = trade.price;
    for (int k = 0; k < n; ++k) {
      if (k == buyer) continue;
      best = std::max(best, state.buy[k]);
    }
    trade.global_best = best;
    trade.skipping_cost = best - trade.price;
  }

  const double half_s0 = params.s0() / 2.0;
  state.mid[buyer] -= half_s0;
  state.mid[seller] += half_s0;
  state.spread[buyer] += half_s0;
  state.spread[seller] += half_s0;
  state.refresh_quotes(buyer);
  state.refresh_quotes(seller);
  return trade;
}

std::vector<SimTrade> resolve_multiple(MarketState& state,
                                       const ModelParams& params,
                                       const net::CclNetwork& net, double time,
                                       long* multi_crossing_flag) {
  std::vector<SimTrade> trades;
  const long cap = static_cast<long>(state.size()) * state.size();
  for (long iter = 0;; ++iter) {
    auto crossings = detect_crossings(state, net);
    if (crossings.empty()) break;
    if (iter == 0 && multi_crossing_flag && crossings.size() > 1) {
      ++*multi_crossing_flag;
    }
    if (iter >= cap) {
      fail(ErrorKind::generation_failure,
           "resolve_multiple: iteration cap exceeded with " +
               std::to_string(crossings.size()) + " crossings outstanding");
    }
    const double mbar = state.mean_mid();
    int best_buyer = -1, best_seller = -1;
    double best_dist = -1;
    for (auto [i, j] : crossings) {
      const double price = (state.buy[i] + state.sell[j]) / 2.0;
      const double dist = std::abs(price - mbar);
      // Furthest from the mean mid first; ties break lexicographically.
      if (dist > best_dist ||
          (dist == best_dist &&
           std::pair(i, j) < std::pair(best_buyer, best_seller))) {
        best_dist = dist;
        best_buyer = i;
        best_seller = j;
      }
    }
    trades.push_back(process_trade(state, best_buyer, best_seller, params, time));
  }
  return trades;
}

SimOutput run(const ModelParams& params, const net::CclNetwork& net) {
  params.validate();
  std::mt19937_64 gen(params.seed);

  SimOutput out;
  out.meta.seed = params.seed;
  out.meta.n = params.n;

  MarketState state =
      init_state(params, net, gen, &out.meta.init_trades_discarded);

  const double dt = params.step_dt();
  const long n_steps = std::lround(params.t_end / dt);
  out.meta.steps = n_steps;
  out.quote_times.reserve(n_steps);
  out.quote_max_buy.reserve(n_steps);
  out.quote_min_sell.reserve(n_steps);

  for (long k = 1; k <= n_steps; ++k) {
    const double time = static_cast<double>(k) * dt;
    step(state, params, gen);
    auto trades =
        resolve_multiple(state, params, net, time, &out.meta.multi_crossing_steps);
    out.meta.max_trades_in_step = std::max(
        out.meta.max_trades_in_step, static_cast<long>(trades.size()));
    if (time > params.t_burn) {
      for (auto& t : trades) out.trades.push_back(t);
    }
    double max_buy = -std::numeric_limits<double>::infinity();
    double min_sell = std::numeric_limits<double>::infinity();
    for (int i = 0; i < state.size(); ++i) {
      max_buy = std::max(max_buy, state.buy[i]);
      min_sell = std::min(min_sell, state.sell[i]);
    }
    out.quote_times.push_back(time);
    out.quote_max_buy.push_back(max_buy);
    out.quote_min_sell.push_back(min_sell);
  }
  return out;
}

}  // namespace ccl::sim

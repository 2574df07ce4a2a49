#include "ccl/book.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "ccl/error.hpp"

namespace ccl::book {

std::string side_name(Side s) { return s == Side::buy ? "buy" : "sell"; }

Side side_from_name(const std::string& name) {
  if (name == "buy") return Side::buy;
  if (name == "sell") return Side::sell;
  fail(ErrorKind::data_integrity, "unknown side '" + name + "'");
}

int BookConfig::price_decimals() const {
  for (int dp = 0; dp <= 12; ++dp) {
    const double scaled = tick_size * std::pow(10.0, dp);
    if (std::abs(scaled - std::llround(scaled)) < 1e-9 &&
        std::llround(scaled) >= 1) {
      return dp;
    }
  }
  fail(ErrorKind::invalid_argument,
       "tick size is not a decimal fraction: " + std::to_string(tick_size));
}

std::string BookConfig::price_string(PriceTicks ticks) const {
  const int dp = price_decimals();
  const long long tick_num =
      std::llround(tick_size * std::pow(10.0, dp));
  const long long scaled = ticks * tick_num;  // price * 10^dp, exact
  if (dp == 0) return std::to_string(scaled);
  const long long base = static_cast<long long>(std::llround(std::pow(10.0, dp)));
  const long long whole = scaled / base;
  const long long frac = std::llabs(scaled % base);
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%lld.%0*lld", whole, dp, frac);
  return buf;
}

double BookConfig::price_value(PriceTicks ticks) const {
  return std::strtod(price_string(ticks).c_str(), nullptr);
}

PriceTicks BookConfig::to_ticks(double price) const {
  const double ratio = price / tick_size;
  const auto ticks = static_cast<PriceTicks>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(ticks)) > 1e-6) {
    fail(ErrorKind::invalid_argument,
         "price " + std::to_string(price) + " is not on the tick grid");
  }
  return ticks;
}

void CreditMatrix::set(int i, int j, double limit) {
  if (i == j) {
    fail(ErrorKind::invalid_argument, "set_ccl: i == j is not a valid pair");
  }
  if (!(limit >= 0)) {
    fail(ErrorKind::invalid_argument, "set_ccl: limit must be >= 0 or unlimited");
  }
  limits_[{i, j}] = limit;
}

double CreditMatrix::directed(int i, int j) const {
  auto it = limits_.find({i, j});
  return it == limits_.end() ? default_limit_ : it->second;
}

double CreditMatrix::bilateral(int i, int j) const {
  return std::min(directed(i, j), directed(j, i));
}

std::pair<int, int> ExposureLedger::key(int i, int j) {
  return {std::min(i, j), std::max(i, j)};
}

double ExposureLedger::exposure(int i, int j) const {
  auto it = exposures_.find(key(i, j));
  return it == exposures_.end() ? 0.0 : it->second;
}

void ExposureLedger::set(int i, int j, double notional) {
  exposures_[key(i, j)] = notional;
}

void ExposureLedger::add(int i, int j, double notional) {
  exposures_[key(i, j)] += notional;
}

void ExposureLedger::release(int i, int j, double amount) {
  if (amount < 0) {
    fail(ErrorKind::invalid_argument, "release_exposure: negative amount");
  }
  auto it = exposures_.find(key(i, j));
  const double current = it == exposures_.end() ? 0.0 : it->second;
  if (amount > current) {
    fail(ErrorKind::invalid_argument,
         "release_exposure: amount exceeds current exposure");
  }
  if (it != exposures_.end()) it->second = current - amount;
}

void ExposureLedger::settle_all() { exposures_.clear(); }

QclobEngine::QclobEngine(BookConfig cfg)
    : cfg_(cfg), credit_(cfg.default_ccl) {
  cfg_.price_decimals();  // validates the tick size up front
  if (!(cfg_.min_order_size > 0)) {
    fail(ErrorKind::invalid_argument, "min_order_size must be positive");
  }
}

void QclobEngine::set_ccl(int i, int j, double limit) { credit_.set(i, j, limit); }

void QclobEngine::check_time(long long time_ms) {
  if (time_ms < last_time_ms_) {
    fail(ErrorKind::invalid_argument, "event times must be non-decreasing");
  }
  last_time_ms_ = time_ms;
}

double QclobEngine::credit_available(int a, int b) const {
  const double limit = credit_.bilateral(a, b);
  if (std::isinf(limit)) return kUnlimited;
  return limit - exposures_.exposure(a, b);
}

void QclobEngine::insert_resting(const LimitOrder& order) {
  if (order.side == Side::buy) {
    bids_[order.price_ticks].push_back(order.id);
  } else {
    asks_[order.price_ticks].push_back(order.id);
  }
}

void QclobEngine::remove_resting(const LimitOrder& order) {
  auto scrub = [&](auto& levels) {
    auto it = levels.find(order.price_ticks);
    if (it == levels.end()) return;
    auto& ids = it->second;
    ids.erase(std::remove(ids.begin(), ids.end(), order.id), ids.end());
    if (ids.empty()) levels.erase(it);
  };
  if (order.side == Side::buy) {
    scrub(bids_);
  } else {
    scrub(asks_);
  }
}

void QclobEngine::log_arrival(const LimitOrder& order, OrderId log_id) {
  events_.push_back({LogEvent::Kind::arrival, order.arrival_time_ms, log_id,
                     order.side, order.price_ticks, order.size});
}

void QclobEngine::log_departure(long long time_ms, OrderId log_id) {
  events_.push_back({LogEvent::Kind::departure, time_ms, log_id, Side::buy, 0, 0});
}

QuoteSnapshot QclobEngine::quotes() const {
  QuoteSnapshot q;
  if (!bids_.empty()) {
    q.bid_ticks = bids_.begin()->first;
    q.bid = cfg_.price_value(*q.bid_ticks);
  }
  if (!asks_.empty()) {
    q.ask_ticks = asks_.begin()->first;
    q.ask = cfg_.price_value(*q.ask_ticks);
  }
  return q;
}

QclobEngine::WalkOutcome QclobEngine::walk_match(
    int taker, Side taker_side, double size,
    std::optional<PriceTicks> limit_ticks, long long time_ms) {
  WalkOutcome out;
  out.remaining = size;

  std::optional<PriceTicks> gb_ticks;
  if (taker_side == Side::buy) {
    if (!asks_.empty()) gb_ticks = asks_.begin()->first;
  } else {
    if (!bids_.empty()) gb_ticks = bids_.begin()->first;
  }
  if (!gb_ticks) return out;
  const double gb_price = cfg_.price_value(*gb_ticks);

  auto crosses = [&](PriceTicks level) {
    if (!limit_ticks) return true;
    return taker_side == Side::buy ? level <= *limit_ticks
                                   : level >= *limit_ticks;
  };

  // Collect the level prices up front; levels empty out as we walk.
  std::vector<PriceTicks> level_prices;
  if (taker_side == Side::buy) {
    for (const auto& [price, ids] : asks_) level_prices.push_back(price);
  } else {
    for (const auto& [price, ids] : bids_) level_prices.push_back(price);
  }

  auto find_level = [&](PriceTicks level) -> std::vector<OrderId>* {
    if (taker_side == Side::buy) {
      auto it = asks_.find(level);
      return it == asks_.end() ? nullptr : &it->second;
    }
    auto it = bids_.find(level);
    return it == bids_.end() ? nullptr : &it->second;
  };

  for (PriceTicks level : level_prices) {
    if (out.remaining <= 0 || !crosses(level)) break;
    const std::vector<OrderId>* level_ids = find_level(level);
    if (level_ids == nullptr) continue;

    std::vector<OrderId> ids = *level_ids;  // walk a stable copy
    for (OrderId oid : ids) {
      if (out.remaining <= 0) break;
      auto order_it = orders_.find(oid);
      if (order_it == orders_.end()) continue;
      LimitOrder& order = order_it->second;
      if (order.owner == taker) continue;  // no self-trading

      const double avail = credit_available(taker, order.owner);
      if (!(avail > 0)) continue;
      const bool unlimited = std::isinf(avail);
      const double cap = unlimited ? out.remaining : avail / order.price;
      double fill = std::min({out.remaining, order.size, cap});
      if (!(fill > 0)) continue;

      const bool cap_bound = !unlimited && fill == cap;
      if (cap_bound) {
        // Charge the exact remaining headroom so exposure lands on the
        // bilateral limit instead of a rounding neighbour of it.
        exposures_.set(taker, order.owner, credit_.bilateral(taker, order.owner));
      } else {
        const double limit = credit_.bilateral(taker, order.owner);
        double next = exposures_.exposure(taker, order.owner) + fill * order.price;
        if (!std::isinf(limit) && next > limit) next = limit;
        exposures_.set(taker, order.owner, next);
      }

      Fill f;
      f.taker = taker;
      f.maker = order.owner;
      f.price_ticks = order.price_ticks;
      f.price = order.price;
      f.size = fill;
      f.time_ms = time_ms;
      f.taker_side = taker_side;
      f.global_best_ticks = *gb_ticks;
      f.global_best = gb_price;
      f.maker_order = order.id;
      out.fills.push_back(f);
      fills_.push_back(f);

      out.remaining -= fill;
      order.size -= fill;

      const OrderId current_log = log_id_[order.id];
      if (order.size <= 0) {
        log_departure(time_ms, current_log);
        remove_resting(order);
        log_id_.erase(order.id);
        orders_.erase(order_it);
      } else {
        // Partial consumption: the log shows the remainder as a fresh
        // arrival, while the engine keeps the original time priority.
        log_departure(time_ms, current_log);
        const OrderId fresh = next_id_++;
        log_id_[order.id] = fresh;
        events_.push_back({LogEvent::Kind::arrival, time_ms, fresh, order.side,
                           order.price_ticks, order.size});
      }
    }
  }
  return out;
}

SubmitResult QclobEngine::submit_limit_order(int owner, Side side, double price,
                                             double size, long long time_ms) {
  check_time(time_ms);
  const PriceTicks ticks = cfg_.to_ticks(price);
  if (size < cfg_.min_order_size) {
    fail(ErrorKind::invalid_argument,
         "order size below the minimum order size");
  }

  // Reject submissions that would cross the owner's own resting orders;
  // matching skips them, which would otherwise leave a crossed book.
  auto self_cross_check = [&](const auto& levels) {
    for (const auto& [level, ids] : levels) {
      const bool crossing = side == Side::buy ? level <= ticks : level >= ticks;
      if (!crossing) break;
      for (OrderId oid : ids) {
        if (orders_.at(oid).owner == owner) {
          fail(ErrorKind::invalid_argument,
               "limit order would cross the owner's own resting order");
        }
      }
    }
  };
  if (side == Side::buy) {
    self_cross_check(asks_);
  } else {
    self_cross_check(bids_);
  }

  SubmitResult result;
  result.before = quotes();

  LimitOrder order;
  order.id = next_id_++;
  order.owner = owner;
  order.side = side;
  order.price_ticks = ticks;
  order.price = cfg_.price_value(ticks);
  order.size = size;
  order.arrival_time_ms = time_ms;
  result.id = order.id;

  log_id_[order.id] = order.id;
  log_arrival(order, order.id);

  auto walked = walk_match(owner, side, size, ticks, time_ms);
  result.fills = std::move(walked.fills);
  order.size = walked.remaining;

  if (order.size > 0) {
    orders_[order.id] = order;
    insert_resting(order);
    result.rested_size = order.size;
  } else {
    log_departure(time_ms, order.id);
    log_id_.erase(order.id);
  }
  if (!result.fills.empty() && walked.remaining > 0 &&
      walked.remaining < size) {
    // The resting remainder of a partially crossed submission: re-log so a
    // reconstructed book sees the correct outstanding size.
    log_departure(time_ms, order.id);
    const OrderId fresh = next_id_++;
    log_id_[order.id] = fresh;
    events_.push_back({LogEvent::Kind::arrival, time_ms, fresh, order.side,
                       order.price_ticks, order.size});
  }
  return result;
}

LimitOrder QclobEngine::cancel_order(OrderId id, long long time_ms) {
  check_time(time_ms);
  auto it = orders_.find(id);
  if (it == orders_.end()) {
    fail(ErrorKind::invalid_argument,
         "cancel_order: unknown order id " + std::to_string(id));
  }
  LimitOrder removed = it->second;
  log_departure(time_ms, log_id_[id]);
  log_id_.erase(id);
  remove_resting(removed);
  orders_.erase(it);
  return removed;
}

MarketOrderResult QclobEngine::submit_market_order(int taker, Side side,
                                                   double size,
                                                   long long time_ms) {
  check_time(time_ms);
  if (size < cfg_.min_order_size) {
    fail(ErrorKind::invalid_argument,
         "order size below the minimum order size");
  }
  MarketOrderResult result;
  result.before = quotes();
  auto walked = walk_match(taker, side, size, std::nullopt, time_ms);
  result.fills = std::move(walked.fills);
  result.residual = walked.remaining;  // immediate-or-cancel
  result.filled = size - walked.remaining;
  if (!result.fills.empty()) {
    double pv = 0, v = 0;
    for (const auto& f : result.fills) {
      pv += f.price * f.size;
      v += f.size;
    }
    result.vwap = pv / v;
  }
  return result;
}

std::vector<VisibleOrder> QclobEngine::filtered_book(int viewer) const {
  std::vector<VisibleOrder> out;
  auto emit = [&](const auto& levels) {
    for (const auto& [price, ids] : levels) {
      for (OrderId oid : ids) {
        const LimitOrder& order = orders_.at(oid);
        VisibleOrder v;
        v.order = order;
        if (order.owner == viewer) {
          v.visible_size = order.size;
        } else {
          const double avail = credit_available(viewer, order.owner);
          if (std::isinf(avail)) {
            v.visible_size = order.size;
          } else if (avail > 0) {
            v.visible_size = std::min(order.size, avail / order.price);
          } else {
            continue;
          }
        }
        if (v.visible_size > 0) out.push_back(v);
      }
    }
  };
  emit(bids_);
  emit(asks_);
  return out;
}

void QclobEngine::release_exposure(int i, int j, double amount) {
  exposures_.release(i, j, amount);
}

void QclobEngine::settle_all() { exposures_.settle_all(); }

}  // namespace ccl::book

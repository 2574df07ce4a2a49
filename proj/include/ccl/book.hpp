#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

// Quasi-centralized limit order book: one shared pool of limit orders with
// price-time priority, where a market order may only match against owners
// with enough remaining bilateral credit. Orders it cannot afford are
// skipped, not cancelled, which is what produces skipping costs.

namespace ccl::book {

using PriceTicks = std::int64_t;
using OrderId = std::uint64_t;

enum class Side { buy, sell };

inline Side opposite(Side s) { return s == Side::buy ? Side::sell : Side::buy; }
std::string side_name(Side s);
Side side_from_name(const std::string& name);

inline constexpr double kUnlimited = std::numeric_limits<double>::infinity();

struct BookConfig {
  double tick_size = 0.00001;    // counter-currency units
  double min_order_size = 0.01;  // base-currency units
  double default_ccl = kUnlimited;

  int price_decimals() const;
  // Exact decimal string for a grid price, and the canonical double every
  // computation uses for it (the value that string parses back to). Going
  // through the decimal representation keeps engine arithmetic bit-equal
  // to what a reader of the serialized files reconstructs.
  std::string price_string(PriceTicks ticks) const;
  double price_value(PriceTicks ticks) const;
  // Throws invalid_argument when `price` is off the tick grid.
  PriceTicks to_ticks(double price) const;
};

// Directed limits c(i, j); the bilateral limit of a pair is the min of the
// two directions. Unset pairs fall back to the configurable default.
class CreditMatrix {
 public:
  explicit CreditMatrix(double default_limit = kUnlimited)
      : default_limit_(default_limit) {}

  void set(int i, int j, double limit);  // i != j, limit >= 0 or unlimited
  double directed(int i, int j) const;
  double bilateral(int i, int j) const;

 private:
  double default_limit_;
  std::map<std::pair<int, int>, double> limits_;
};

// Unsettled gross notional per unordered pair. Settlement is a manual
// release hook; the engine never nets opposing trades down.
class ExposureLedger {
 public:
  double exposure(int i, int j) const;
  void set(int i, int j, double notional);
  void add(int i, int j, double notional);
  void release(int i, int j, double amount);  // amount <= current exposure
  void settle_all();
  const std::map<std::pair<int, int>, double>& all() const { return exposures_; }

 private:
  static std::pair<int, int> key(int i, int j);
  std::map<std::pair<int, int>, double> exposures_;
};

struct LimitOrder {
  OrderId id = 0;
  int owner = -1;
  Side side = Side::buy;
  PriceTicks price_ticks = 0;
  double price = 0;  // canonical double for price_ticks
  double size = 0;   // remaining, base-currency units
  long long arrival_time_ms = 0;
};

struct Fill {
  int taker = -1;
  int maker = -1;
  PriceTicks price_ticks = 0;
  double price = 0;
  double size = 0;
  long long time_ms = 0;
  Side taker_side = Side::buy;
  // Best opposite-side price in the unfiltered book immediately before the
  // walk began (captured once per incoming order).
  PriceTicks global_best_ticks = 0;
  double global_best = 0;
  OrderId maker_order = 0;
};

struct QuoteSnapshot {
  std::optional<PriceTicks> bid_ticks;
  std::optional<PriceTicks> ask_ticks;
  double bid = 0;  // canonical doubles, valid when the side is present
  double ask = 0;
};

struct MarketOrderResult {
  std::vector<Fill> fills;
  double filled = 0;
  double residual = 0;  // cancelled remainder (immediate-or-cancel)
  double vwap = 0;      // over this order's fills; 0 when no fill
  QuoteSnapshot before;  // global quotes immediately before the walk
};

struct SubmitResult {
  OrderId id = 0;
  std::vector<Fill> fills;  // crossing portion, matched like a market order
  double rested_size = 0;
  QuoteSnapshot before;
};

struct VisibleOrder {
  LimitOrder order;
  double visible_size = 0;
};

// Event log in the two-file convention: limit order arrivals carry price,
// size, side; departures only the id. A partially filled resting order is
// logged as a departure plus a re-arrival of the remainder under a fresh
// id, so reconstructed quotes follow the true book; inside the engine the
// order keeps its original time priority.
struct LogEvent {
  enum class Kind { arrival, departure };
  Kind kind = Kind::arrival;
  long long time_ms = 0;
  OrderId id = 0;
  Side side = Side::buy;
  PriceTicks price_ticks = 0;
  double size = 0;
};

class QclobEngine {
 public:
  explicit QclobEngine(BookConfig cfg = {});

  const BookConfig& config() const { return cfg_; }

  void set_ccl(int i, int j, double limit);
  double bilateral_limit(int i, int j) const { return credit_.bilateral(i, j); }

  // Rests (or crosses, then rests the remainder). Rejects off-grid prices,
  // undersized orders, non-monotone times, and self-crossing submissions.
  SubmitResult submit_limit_order(int owner, Side side, double price,
                                  double size, long long time_ms);

  LimitOrder cancel_order(OrderId id, long long time_ms);

  MarketOrderResult submit_market_order(int taker, Side side, double size,
                                        long long time_ms);

  // Every resting order j != i reduced to what i could actually fill right
  // now; zero-visibility orders omitted; i's own orders shown in full.
  std::vector<VisibleOrder> filtered_book(int viewer) const;

  void release_exposure(int i, int j, double amount);
  void settle_all();
  double exposure(int i, int j) const { return exposures_.exposure(i, j); }

  QuoteSnapshot quotes() const;

  const std::vector<LogEvent>& event_log() const { return events_; }
  const std::vector<Fill>& fill_log() const { return fills_; }
  std::size_t resting_order_count() const { return orders_.size(); }

 private:
  struct WalkOutcome {
    std::vector<Fill> fills;
    double remaining = 0;
  };

  double credit_available(int a, int b) const;
  WalkOutcome walk_match(int taker, Side taker_side, double size,
                         std::optional<PriceTicks> limit_ticks,
                         long long time_ms);
  void check_time(long long time_ms);
  void insert_resting(const LimitOrder& order);
  void remove_resting(const LimitOrder& order);
  void log_arrival(const LimitOrder& order, OrderId log_id);
  void log_departure(long long time_ms, OrderId log_id);

  BookConfig cfg_;
  CreditMatrix credit_;
  ExposureLedger exposures_;
  std::unordered_map<OrderId, LimitOrder> orders_;
  std::unordered_map<OrderId, OrderId> log_id_;  // order id -> current log id
  // Price levels hold order ids in arrival order; submission times are
  // required non-decreasing, so vector order is (price, time, id) priority.
  std::map<PriceTicks, std::vector<OrderId>, std::greater<PriceTicks>> bids_;
  std::map<PriceTicks, std::vector<OrderId>> asks_;
  std::vector<LogEvent> events_;
  std::vector<Fill> fills_;
  OrderId next_id_ = 1;
  long long last_time_ms_ = std::numeric_limits<long long>::min();
};

}  // namespace ccl::book

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ccl/analytics.hpp"
#include "ccl/book.hpp"

// Ingestion of the two-file day convention: a tick file of limit order
// arrivals/departures and a trade file of executions. The pipeline
// rebuilds the global quotes through time, ties trades to the departures
// they consumed, folds partial fills within 1 ms into market orders priced
// at VWAP, and emits the trade observation stream the analytics run on.

namespace ccl::ingest {

struct TickEvent {
  enum class Kind { arrival, departure };
  Kind kind = Kind::arrival;
  long long time_ms = 0;
  book::OrderId order_id = 0;
  // Arrival-only fields:
  book::Side side = book::Side::buy;
  double price = 0;
  double size = 0;
  long line_no = 0;
};

struct RawTrade {
  long long time_ms = 0;
  book::Side side = book::Side::buy;
  double price = 0;
  double size = 0;
  long line_no = 0;
};

// Header: kind,time_ms,order_id,side,price,size  (kind is A or D;
// departures leave side/price/size empty). Malformed rows and departures
// of unknown ids raise errors naming the line.
std::vector<TickEvent> parse_tick_file(std::istream& in,
                                       const std::string& name);
std::vector<TickEvent> parse_tick_file(const std::string& path);

// Header: time_ms,side,price,size
std::vector<RawTrade> parse_trade_file(std::istream& in,
                                       const std::string& name);
std::vector<RawTrade> parse_trade_file(const std::string& path);

// Best bid/ask through time, queryable "immediately before t" (the state
// after every event strictly earlier than t). Crossed intermediate states
// are tolerated and counted; the raw feed has no matching semantics.
class BookTimeline {
 public:
  struct Quote {
    std::optional<double> bid;
    std::optional<double> ask;
  };

  Quote immediately_before(long long time_ms) const;
  long crossed_states() const { return crossed_states_; }

 private:
  friend BookTimeline reconstruct_book(const std::vector<TickEvent>&);
  std::vector<long long> times_;
  std::vector<Quote> states_;
  long crossed_states_ = 0;
};

BookTimeline reconstruct_book(const std::vector<TickEvent>& events);

struct Association {
  // departure event index per trade, or -1 when the trade is hidden.
  std::vector<long> departure_for_trade;
  std::vector<bool> ambiguous;  // tie on |dt| resolved to earlier departure
  long hidden_count = 0;
  long ambiguous_count = 0;
};

// Greedy in trade order: nearest unconsumed same-price departure within
// the window; each departure is consumed at most once.
Association associate_trades(const std::vector<RawTrade>& trades,
                             const std::vector<TickEvent>& events,
                             long long window_ms = 1000);

struct MarketOrderGroup {
  long long time_ms = 0;  // first constituent's time
  book::Side side = book::Side::buy;
  double total_size = 0;
  double vwap = 0;
  std::vector<std::size_t> constituents;  // indices into the trade vector
};

// Consecutive same-direction trades no more than 1 ms apart join one
// group. `excluded`, when given, drops those trades before grouping.
std::vector<MarketOrderGroup> aggregate_market_orders(
    const std::vector<RawTrade>& trades,
    const std::vector<bool>* excluded = nullptr);

struct ObservationReport {
  std::vector<stats::TradeObservation> observations;
  long dropped_out_of_session = 0;
  long dropped_one_sided = 0;
  long quarantined = 0;  // r_k < 0 data-integrity flags
};

ObservationReport build_observations(const std::vector<MarketOrderGroup>& groups,
                                     const BookTimeline& timeline,
                                     long long session_start_ms,
                                     long long session_end_ms);

struct GapCheck {
  bool invalid = false;  // a recording gap at/over the threshold was found
  long long max_gap_ms = 0;
};

GapCheck check_recording_gaps(const std::vector<TickEvent>& events,
                              const std::vector<RawTrade>& trades,
                              long long threshold_ms = 30000);

struct PipelineOptions {
  long long session_start_ms = 28800000;  // 08:00:00 from day start
  long long session_end_ms = 61200000;    // 17:00:00
  long long association_window_ms = 1000;
  bool exclude_ambiguous = false;
  long long gap_threshold_ms = 30000;
};

struct PipelineResult {
  ObservationReport report;
  Association association;
  GapCheck gaps;
  long crossed_states = 0;
  std::size_t trades_in = 0;
  std::size_t groups = 0;
};

PipelineResult run_pipeline(const std::vector<TickEvent>& events,
                            const std::vector<RawTrade>& trades,
                            const PipelineOptions& options = {});

// Observation CSV: k,time_ms,direction,p,b,a,m,r,r_norm_bp. Blank b or a
// marks a side that is undefined for the source (simulator trades carry
// only the direction-matched quote).
void write_observations_csv(const std::vector<stats::TradeObservation>& obs,
                            std::ostream& os);
std::vector<stats::TradeObservation> parse_observations_csv(
    std::istream& in, const std::string& name);
std::vector<stats::TradeObservation> parse_observations_csv(
    const std::string& path);

}  // namespace ccl::ingest

#include "ccl/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "ccl/error.hpp"
#include "ccl/io.hpp"

namespace ccl::ingest {

namespace {

std::ifstream open_or_fail(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::data_integrity, "cannot open file: " + path);
  return in;
}

bool skip_line(const std::string& line) {
  return line.empty() || line[0] == '#';
}

}  // namespace

std::vector<TickEvent> parse_tick_file(std::istream& in,
                                       const std::string& name) {
  std::vector<TickEvent> events;
  std::set<book::OrderId> known;
  std::string line;
  long line_no = 0;
  bool header_seen = false;
  long long prev_time = std::numeric_limits<long long>::min();
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (skip_line(line)) continue;
    if (!header_seen) {
      if (io::split_csv(line) !=
          std::vector<std::string>{"kind", "time_ms", "order_id", "side",
                                   "price", "size"}) {
        fail(ErrorKind::data_integrity,
             name + ":" + std::to_string(line_no) + ": bad tick header");
      }
      header_seen = true;
      continue;
    }
    auto f = io::split_csv(line);
    const std::string ctx = name + ":" + std::to_string(line_no);
    if (f.size() != 6) {
      fail(ErrorKind::data_integrity, ctx + ": expected 6 columns");
    }
    TickEvent ev;
    ev.line_no = line_no;
    ev.time_ms = io::parse_long(f[1], ctx);
    ev.order_id = static_cast<book::OrderId>(io::parse_long(f[2], ctx));
    if (ev.time_ms < prev_time) {
      fail(ErrorKind::data_integrity, ctx + ": times must be non-decreasing");
    }
    prev_time = ev.time_ms;
    if (f[0] == "A") {
      ev.kind = TickEvent::Kind::arrival;
      ev.side = book::side_from_name(f[3]);
      ev.price = io::parse_double(f[4], ctx);
      ev.size = io::parse_double(f[5], ctx);
      if (!(ev.price > 0) || !(ev.size > 0)) {
        fail(ErrorKind::data_integrity, ctx + ": non-positive price or size");
      }
      if (!known.insert(ev.order_id).second) {
        fail(ErrorKind::data_integrity,
             ctx + ": duplicate arrival for order id " +
                 std::to_string(ev.order_id));
      }
    } else if (f[0] == "D") {
      ev.kind = TickEvent::Kind::departure;
      if (!f[3].empty() || !f[4].empty() || !f[5].empty()) {
        fail(ErrorKind::data_integrity,
             ctx + ": departures must leave side/price/size empty");
      }
      if (known.count(ev.order_id) == 0) {
        fail(ErrorKind::data_integrity,
             ctx + ": departure references unknown order id " +
                 std::to_string(ev.order_id));
      }
    } else {
      fail(ErrorKind::data_integrity, ctx + ": kind must be A or D");
    }
    events.push_back(ev);
  }
  return events;
}

std::vector<TickEvent> parse_tick_file(const std::string& path) {
  auto in = open_or_fail(path);
  return parse_tick_file(in, path);
}

std::vector<RawTrade> parse_trade_file(std::istream& in,
                                       const std::string& name) {
  std::vector<RawTrade> trades;
  std::string line;
  long line_no = 0;
  bool header_seen = false;
  long long prev_time = std::numeric_limits<long long>::min();
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (skip_line(line)) continue;
    if (!header_seen) {
      if (io::split_csv(line) !=
          std::vector<std::string>{"time_ms", "side", "price", "size"}) {
        fail(ErrorKind::data_integrity,
             name + ":" + std::to_string(line_no) + ": bad trade header");
      }
      header_seen = true;
      continue;
    }
    auto f = io::split_csv(line);
    const std::string ctx = name + ":" + std::to_string(line_no);
    if (f.size() != 4) {
      fail(ErrorKind::data_integrity, ctx + ": expected 4 columns");
    }
    RawTrade t;
    t.line_no = line_no;
    t.time_ms = io::parse_long(f[0], ctx);
    t.side = book::side_from_name(f[1]);
    t.price = io::parse_double(f[2], ctx);
    t.size = io::parse_double(f[3], ctx);
    if (!(t.size > 0)) {
      fail(ErrorKind::data_integrity, ctx + ": trade size must be positive");
    }
    if (t.time_ms < prev_time) {
      fail(ErrorKind::data_integrity, ctx + ": times must be non-decreasing");
    }
    prev_time = t.time_ms;
    trades.push_back(t);
  }
  return trades;
}

std::vector<RawTrade> parse_trade_file(const std::string& path) {
  auto in = open_or_fail(path);
  return parse_trade_file(in, path);
}

BookTimeline::Quote BookTimeline::immediately_before(long long time_ms) const {
  // Last state whose event time is strictly earlier than time_ms.
  auto it = std::lower_bound(times_.begin(), times_.end(), time_ms);
  if (it == times_.begin()) return {};
  const std::size_t idx = static_cast<std::size_t>(it - times_.begin()) - 1;
  return states_[idx];
}

BookTimeline reconstruct_book(const std::vector<TickEvent>& events) {
  BookTimeline tl;
  // Multisets of live prices per side; the feed replay needs no priority.
  std::map<double, long, std::greater<double>> bids;
  std::map<double, long> asks;
  std::unordered_map<book::OrderId, std::pair<book::Side, double>> live;

  tl.times_.reserve(events.size());
  tl.states_.reserve(events.size());
  for (const auto& ev : events) {
    if (ev.kind == TickEvent::Kind::arrival) {
      live[ev.order_id] = {ev.side, ev.price};
      if (ev.side == book::Side::buy) {
        ++bids[ev.price];
      } else {
        ++asks[ev.price];
      }
    } else {
      auto it = live.find(ev.order_id);
      if (it == live.end()) {
        fail(ErrorKind::data_integrity,
             "departure of order not currently live: id " +
                 std::to_string(ev.order_id));
      }
      auto [side, price] = it->second;
      live.erase(it);
      auto scrub = [&](auto& mm) {
        auto pit = mm.find(price);
        if (pit != mm.end() && --pit->second == 0) mm.erase(pit);
      };
      if (side == book::Side::buy) {
        scrub(bids);
      } else {
        scrub(asks);
      }
    }
    BookTimeline::Quote q;
    if (!bids.empty()) q.bid = bids.begin()->first;
    if (!asks.empty()) q.ask = asks.begin()->first;
    if (q.bid && q.ask && !(*q.bid < *q.ask)) ++tl.crossed_states_;
    tl.times_.push_back(ev.time_ms);
    tl.states_.push_back(q);
  }
  return tl;
}

Association associate_trades(const std::vector<RawTrade>& trades,
                             const std::vector<TickEvent>& events,
                             long long window_ms) {
  Association out;
  out.departure_for_trade.assign(trades.size(), -1);
  out.ambiguous.assign(trades.size(), false);

  // Departure prices come from their arrivals.
  std::unordered_map<book::OrderId, double> arrival_price;
  struct Dep {
    long event_index;
    long long time_ms;
    double price;
  };
  std::map<double, std::vector<Dep>> by_price;
  for (std::size_t e = 0; e < events.size(); ++e) {
    const auto& ev = events[e];
    if (ev.kind == TickEvent::Kind::arrival) {
      arrival_price[ev.order_id] = ev.price;
    } else {
      auto it = arrival_price.find(ev.order_id);
      if (it == arrival_price.end()) {
        fail(ErrorKind::data_integrity,
             "departure without prior arrival: id " +
                 std::to_string(ev.order_id));
      }
      by_price[it->second].push_back(
          {static_cast<long>(e), ev.time_ms, it->second});
    }
  }

  std::set<long> consumed;
  for (std::size_t t = 0; t < trades.size(); ++t) {
    auto bucket = by_price.find(trades[t].price);
    if (bucket == by_price.end()) {
      ++out.hidden_count;
      continue;
    }
    long best = -1;
    long long best_dt = window_ms + 1;
    long long best_time = 0;
    bool tie = false;
    for (const Dep& dep : bucket->second) {
      if (consumed.count(dep.event_index)) continue;
      const long long dt = std::llabs(dep.time_ms - trades[t].time_ms);
      if (dt > window_ms) continue;
      if (dt < best_dt ||
          (dt == best_dt && dep.time_ms < best_time)) {
        tie = (dt == best_dt && best >= 0);
        best = dep.event_index;
        best_dt = dt;
        best_time = dep.time_ms;
      } else if (dt == best_dt) {
        tie = true;
      }
    }
    if (best < 0) {
      ++out.hidden_count;
      continue;
    }
    out.departure_for_trade[t] = best;
    consumed.insert(best);
    if (tie) {
      out.ambiguous[t] = true;
      ++out.ambiguous_count;
    }
  }
  return out;
}

std::vector<MarketOrderGroup> aggregate_market_orders(
    const std::vector<RawTrade>& trades, const std::vector<bool>* excluded) {
  std::vector<MarketOrderGroup> groups;
  MarketOrderGroup* current = nullptr;
  long long prev_time = 0;
  double sum_pv = 0, sum_v = 0;
  for (std::size_t t = 0; t < trades.size(); ++t) {
    if (excluded && (*excluded)[t]) continue;
    const auto& trade = trades[t];
    const bool joins = current != nullptr && trade.side == current->side &&
                       trade.time_ms - prev_time <= 1;
    if (!joins) {
      groups.emplace_back();
      current = &groups.back();
      current->time_ms = trade.time_ms;
      current->side = trade.side;
      sum_pv = 0;
      sum_v = 0;
    }
    current->constituents.push_back(t);
    sum_pv += trade.price * trade.size;
    sum_v += trade.size;
    current->total_size = sum_v;
    current->vwap = sum_pv / sum_v;
    prev_time = trade.time_ms;
  }
  return groups;
}

ObservationReport build_observations(const std::vector<MarketOrderGroup>& groups,
                                     const BookTimeline& timeline,
                                     long long session_start_ms,
                                     long long session_end_ms) {
  ObservationReport report;
  long index = 0;
  for (const auto& g : groups) {
    if (g.time_ms < session_start_ms || g.time_ms >= session_end_ms) {
      ++report.dropped_out_of_session;
      continue;
    }
    const auto q = timeline.immediately_before(g.time_ms);
    if (!q.bid || !q.ask) {
      ++report.dropped_one_sided;
      continue;
    }
    stats::TradeObservation obs;
    obs.index = index;
    obs.time_ms = g.time_ms;
    obs.direction = g.side == book::Side::buy ? stats::Direction::buy
                                              : stats::Direction::sell;
    obs.price = g.vwap;
    obs.bid = *q.bid;
    obs.ask = *q.ask;
    obs.mid = (*q.bid + *q.ask) / 2.0;
    try {
      stats::validate_observation(obs);
    } catch (const Error&) {
      ++report.quarantined;
      continue;
    }
    obs.index = index++;
    report.observations.push_back(obs);
  }
  return report;
}

GapCheck check_recording_gaps(const std::vector<TickEvent>& events,
                              const std::vector<RawTrade>& trades,
                              long long threshold_ms) {
  std::vector<long long> times;
  times.reserve(events.size() + trades.size());
  for (const auto& ev : events) times.push_back(ev.time_ms);
  for (const auto& t : trades) times.push_back(t.time_ms);
  std::sort(times.begin(), times.end());
  GapCheck out;
  for (std::size_t i = 1; i < times.size(); ++i) {
    out.max_gap_ms = std::max(out.max_gap_ms, times[i] - times[i - 1]);
  }
  out.invalid = out.max_gap_ms >= threshold_ms;
  return out;
}

PipelineResult run_pipeline(const std::vector<TickEvent>& events,
                            const std::vector<RawTrade>& trades,
                            const PipelineOptions& options) {
  PipelineResult result;
  result.trades_in = trades.size();
  result.gaps = check_recording_gaps(events, trades, options.gap_threshold_ms);

  auto timeline = reconstruct_book(events);
  result.crossed_states = timeline.crossed_states();

  result.association =
      associate_trades(trades, events, options.association_window_ms);
  std::vector<bool> excluded(trades.size(), false);
  for (std::size_t t = 0; t < trades.size(); ++t) {
    if (result.association.departure_for_trade[t] < 0) excluded[t] = true;
    if (options.exclude_ambiguous && result.association.ambiguous[t]) {
      excluded[t] = true;
    }
  }

  auto groups = aggregate_market_orders(trades, &excluded);
  result.groups = groups.size();
  result.report = build_observations(groups, timeline,
                                     options.session_start_ms,
                                     options.session_end_ms);
  return result;
}

void write_observations_csv(const std::vector<stats::TradeObservation>& obs,
                            std::ostream& os) {
  os << "k,time_ms,direction,p,b,a,m,r,r_norm_bp\n";
  for (const auto& o : obs) {
    const auto sc = stats::skipping_cost(o);
    os << o.index << ',' << o.time_ms << ','
       << stats::direction_name(o.direction) << ',' << io::fmt_double(o.price)
       << ',' << (std::isfinite(o.bid) ? io::fmt_double(o.bid) : "") << ','
       << (std::isfinite(o.ask) ? io::fmt_double(o.ask) : "") << ','
       << io::fmt_double(o.mid) << ',' << io::fmt_double(sc.r) << ','
       << io::fmt_double(sc.r_bp) << "\n";
  }
}

std::vector<stats::TradeObservation> parse_observations_csv(
    std::istream& in, const std::string& name) {
  std::vector<stats::TradeObservation> out;
  std::string line;
  long line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (skip_line(line)) continue;
    if (!header_seen) {
      if (io::split_csv(line) !=
          std::vector<std::string>{"k", "time_ms", "direction", "p", "b", "a",
                                   "m", "r", "r_norm_bp"}) {
        fail(ErrorKind::data_integrity,
             name + ":" + std::to_string(line_no) + ": bad observation header");
      }
      header_seen = true;
      continue;
    }
    auto f = io::split_csv(line);
    const std::string ctx = name + ":" + std::to_string(line_no);
    if (f.size() != 9) {
      fail(ErrorKind::data_integrity, ctx + ": expected 9 columns");
    }
    stats::TradeObservation obs;
    obs.index = io::parse_long(f[0], ctx);
    obs.time_ms = io::parse_long(f[1], ctx);
    obs.direction = stats::direction_from_name(f[2]);
    obs.price = io::parse_double(f[3], ctx);
    obs.bid = f[4].empty() ? std::numeric_limits<double>::quiet_NaN()
                           : io::parse_double(f[4], ctx);
    obs.ask = f[5].empty() ? std::numeric_limits<double>::quiet_NaN()
                           : io::parse_double(f[5], ctx);
    obs.mid = io::parse_double(f[6], ctx);
    stats::validate_observation(obs);
    out.push_back(obs);
  }
  return out;
}

std::vector<stats::TradeObservation> parse_observations_csv(
    const std::string& path) {
  auto in = open_or_fail(path);
  return parse_observations_csv(in, path);
}

}  // namespace ccl::ingest

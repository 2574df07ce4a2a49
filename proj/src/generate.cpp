#include "ccl/generate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "ccl/error.hpp"
#include "ccl/io.hpp"

namespace ccl::gen {

namespace {

book::Side parse_side(const std::string& s, const std::string& ctx) {
  if (s == "buy") return book::Side::buy;
  if (s == "sell") return book::Side::sell;
  fail(ErrorKind::data_integrity, ctx + ": side must be buy or sell");
}

double parse_limit_value(const std::string& s, const std::string& ctx) {
  if (s == "unlimited") return book::kUnlimited;
  return io::parse_double(s, ctx);
}

long long command_time(const Scenario::Command& cmd) {
  return std::visit([](const auto& c) { return c.time_ms; }, cmd);
}

// Ground truth for one submission's fills, constructed exactly the way the
// ingestion pipeline will see it: VWAP over the fills in order, quotes
// taken immediately before the walk, observation dropped if the book was
// one-sided at that instant.
void record_observation(GeneratedDay& day, const book::QuoteSnapshot& before,
                        const std::vector<book::Fill>& fills, book::Side side,
                        long long time_ms, long& obs_index) {
  if (!before.bid_ticks || !before.ask_ticks) {
    ++day.observations_skipped_one_sided;
    return;
  }
  double pv = 0, v = 0;
  for (const auto& f : fills) {
    pv += f.price * f.size;
    v += f.size;
  }
  stats::TradeObservation obs;
  obs.index = obs_index++;
  obs.time_ms = time_ms;
  obs.direction =
      side == book::Side::buy ? stats::Direction::buy : stats::Direction::sell;
  obs.price = pv / v;
  obs.bid = before.bid;
  obs.ask = before.ask;
  obs.mid = (before.bid + before.ask) / 2.0;
  stats::validate_observation(obs);
  day.truth.push_back(obs);
}

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& name) {
  Scenario sc;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    const std::string ctx = name + ":" + std::to_string(line_no);

    auto need = [&](auto& v) {
      if (!(ls >> v)) fail(ErrorKind::data_integrity, ctx + ": missing field");
    };

    if (word == "institutions") {
      need(sc.institutions);
    } else if (word == "tick_size") {
      need(sc.config.tick_size);
    } else if (word == "min_order_size") {
      need(sc.config.min_order_size);
    } else if (word == "default_ccl") {
      std::string v;
      need(v);
      sc.config.default_ccl = parse_limit_value(v, ctx);
    } else if (word == "base_time_ms") {
      need(sc.base_time_ms);
    } else if (word == "ccl") {
      Scenario::Ccl c{};
      std::string v;
      need(c.i);
      need(c.j);
      need(v);
      c.limit = parse_limit_value(v, ctx);
      sc.ccls.push_back(c);
    } else if (word == "limit") {
      Scenario::Limit c{};
      std::string side;
      need(c.label);
      need(c.time_ms);
      need(c.owner);
      need(side);
      need(c.price);
      need(c.size);
      c.side = parse_side(side, ctx);
      sc.commands.emplace_back(c);
    } else if (word == "market") {
      Scenario::Market c{};
      std::string side;
      need(c.time_ms);
      need(c.taker);
      need(side);
      need(c.size);
      c.side = parse_side(side, ctx);
      sc.commands.emplace_back(c);
    } else if (word == "cancel") {
      Scenario::Cancel c{};
      need(c.time_ms);
      need(c.label);
      sc.commands.emplace_back(c);
    } else if (word == "hidden") {
      Scenario::Hidden c{};
      std::string side;
      need(c.time_ms);
      need(side);
      need(c.price);
      need(c.size);
      c.side = parse_side(side, ctx);
      sc.commands.emplace_back(c);
    } else if (word == "release") {
      Scenario::Release c{};
      need(c.time_ms);
      need(c.i);
      need(c.j);
      need(c.amount);
      sc.commands.emplace_back(c);
    } else if (word == "settle") {
      Scenario::Settle c{};
      need(c.time_ms);
      sc.commands.emplace_back(c);
    } else {
      fail(ErrorKind::data_integrity, ctx + ": unknown directive '" + word + "'");
    }
  }
  if (sc.institutions < 0) {
    fail(ErrorKind::data_integrity, name + ": institutions must be >= 0");
  }
  return sc;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::data_integrity, "cannot open scenario: " + path);
  return parse_scenario(in, path);
}

GeneratedDay run_scenario(const Scenario& scenario) {
  GeneratedDay day;
  day.config = scenario.config;
  book::QclobEngine engine(scenario.config);
  for (const auto& c : scenario.ccls) engine.set_ccl(c.i, c.j, c.limit);

  std::map<std::string, book::OrderId> labels;
  long long prev_time = std::numeric_limits<long long>::min();
  long obs_index = 0;

  for (std::size_t step = 0; step < scenario.commands.size(); ++step) {
    const auto& cmd = scenario.commands[step];
    const long long t = scenario.base_time_ms + command_time(cmd);
    if (t < prev_time) {
      fail(ErrorKind::data_integrity,
           "scenario step " + std::to_string(step) +
               ": command times must be non-decreasing");
    }
    prev_time = t;

    try {
      if (const auto* c = std::get_if<Scenario::Limit>(&cmd)) {
        auto result = engine.submit_limit_order(c->owner, c->side, c->price,
                                                c->size, t);
        if (!c->label.empty()) {
          if (!labels.emplace(c->label, result.id).second) {
            fail(ErrorKind::data_integrity,
                 "duplicate order label '" + c->label + "'");
          }
        }
        ++day.orders_submitted;
        for (const auto& f : result.fills) {
          day.trade_rows.push_back(
              {f.time_ms, f.taker_side, f.price_ticks, f.size, false});
        }
        if (!result.fills.empty()) {
          record_observation(day, result.before, result.fills, c->side, t,
                             obs_index);
        }
      } else if (const auto* c = std::get_if<Scenario::Market>(&cmd)) {
        auto result = engine.submit_market_order(c->taker, c->side, c->size, t);
        for (const auto& f : result.fills) {
          day.trade_rows.push_back(
              {f.time_ms, f.taker_side, f.price_ticks, f.size, false});
        }
        if (!result.fills.empty()) {
          record_observation(day, result.before, result.fills, c->side, t,
                             obs_index);
        }
      } else if (const auto* c = std::get_if<Scenario::Cancel>(&cmd)) {
        auto it = labels.find(c->label);
        if (it == labels.end()) {
          fail(ErrorKind::data_integrity,
               "cancel of unknown label '" + c->label + "'");
        }
        engine.cancel_order(it->second, t);
        labels.erase(it);
      } else if (const auto* c = std::get_if<Scenario::Hidden>(&cmd)) {
        day.trade_rows.push_back({t, c->side,
                                  scenario.config.to_ticks(c->price), c->size,
                                  true});
        ++day.hidden_injected;
      } else if (const auto* c = std::get_if<Scenario::Release>(&cmd)) {
        engine.release_exposure(c->i, c->j, c->amount);
      } else if (std::get_if<Scenario::Settle>(&cmd)) {
        engine.settle_all();
      }
    } catch (const Error& e) {
      fail(e.kind(), "scenario step " + std::to_string(step) + ": " + e.what());
    }
  }

  day.events = engine.event_log();
  std::stable_sort(day.trade_rows.begin(), day.trade_rows.end(),
                   [](const TradeRow& a, const TradeRow& b) {
                     return a.time_ms < b.time_ms;
                   });
  return day;
}

void write_tick_csv(const GeneratedDay& day, std::ostream& os) {
  os << "kind,time_ms,order_id,side,price,size\n";
  for (const auto& ev : day.events) {
    if (ev.kind == book::LogEvent::Kind::arrival) {
      os << "A," << ev.time_ms << ',' << ev.id << ','
         << book::side_name(ev.side) << ','
         << day.config.price_string(ev.price_ticks) << ','
         << io::fmt_double(ev.size) << "\n";
    } else {
      os << "D," << ev.time_ms << ',' << ev.id << ",,,\n";
    }
  }
}

void write_trade_csv(const GeneratedDay& day, std::ostream& os) {
  os << "time_ms,side,price,size\n";
  for (const auto& row : day.trade_rows) {
    os << row.time_ms << ',' << book::side_name(row.side) << ','
       << day.config.price_string(row.price_ticks) << ','
       << io::fmt_double(row.size) << "\n";
  }
}

}  // namespace ccl::gen

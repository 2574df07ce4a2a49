#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ccl/analytics.hpp"
#include "ccl/book.hpp"

// Synthetic trading days: a scripted scenario is replayed through the
// matching engine and serialized in the two-file day convention, together
// with the engine's own ground-truth observation stream. Re-ingesting the
// files must reproduce that stream exactly; this is the round-trip oracle
// for the ingestion pipeline.

namespace ccl::gen {

struct Scenario {
  book::BookConfig config;
  int institutions = 0;
  long long base_time_ms = 28800000;  // 08:00:00 from day start
  struct Ccl { int i; int j; double limit; };
  struct Limit {
    std::string label;
    long long time_ms;  // relative to base_time_ms
    int owner;
    book::Side side;
    double price;
    double size;
  };
  struct Market { long long time_ms; int taker; book::Side side; double size; };
  struct Cancel { long long time_ms; std::string label; };
  struct Hidden { long long time_ms; book::Side side; double price; double size; };
  struct Release { long long time_ms; int i; int j; double amount; };
  struct Settle { long long time_ms; };
  using Command =
      std::variant<Limit, Market, Cancel, Hidden, Release, Settle>;

  std::vector<Ccl> ccls;
  std::vector<Command> commands;
};

Scenario parse_scenario(std::istream& in, const std::string& name);
Scenario parse_scenario_file(const std::string& path);

struct TradeRow {
  long long time_ms = 0;
  book::Side side = book::Side::buy;
  book::PriceTicks price_ticks = 0;
  double size = 0;
  bool hidden = false;  // injected row with no tick-file counterpart
};

struct GeneratedDay {
  book::BookConfig config;
  std::vector<book::LogEvent> events;
  std::vector<TradeRow> trade_rows;
  std::vector<stats::TradeObservation> truth;  // ground-truth observations
  long hidden_injected = 0;
  long orders_submitted = 0;
  long observations_skipped_one_sided = 0;
};

// Replays the scenario; throws with the failing command index on error.
GeneratedDay run_scenario(const Scenario& scenario);

void write_tick_csv(const GeneratedDay& day, std::ostream& os);
void write_trade_csv(const GeneratedDay& day, std::ostream& os);

}  // namespace ccl::gen

#include "ccl/sim_io.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace ccl::sim {

void write_trades_csv(const SimOutput& out, const io::Provenance& prov,
                      std::ostream& os) {
  prov.write(os);
  os << "time,price,buyer,seller,direction,global_best,skipping_cost,mean_mid\n";
  for (const auto& t : out.trades) {
    os << io::fmt_double(t.time) << ',' << io::fmt_double(t.price) << ','
       << t.buyer << ',' << t.seller << ',' << trade_direction_name(t.direction)
       << ',' << io::fmt_double(t.global_best) << ','
       << io::fmt_double(t.skipping_cost) << ',' << io::fmt_double(t.mean_mid)
       << "\n";
  }
}

void write_quotes_csv(const SimOutput& out, const io::Provenance& prov,
                      std::ostream& os) {
  prov.write(os);
  os << "step_time,global_max_buy,global_min_sell\n";
  for (std::size_t i = 0; i < out.quote_times.size(); ++i) {
    os << io::fmt_double(out.quote_times[i]) << ','
       << io::fmt_double(out.quote_max_buy[i]) << ','
       << io::fmt_double(out.quote_min_sell[i]) << "\n";
  }
}

std::vector<stats::TradeObservation> observations_from_run(
    const SimOutput& out) {
  std::vector<stats::TradeObservation> obs;
  obs.reserve(out.trades.size());
  constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
  long index = 0;
  for (const auto& t : out.trades) {
    stats::TradeObservation o;
    o.index = index++;
    o.time_ms = std::llround(t.time * 1e6);
    o.price = t.price;
    o.mid = t.mean_mid;
    if (t.direction == TradeDirection::buyer_initiated) {
      o.direction = stats::Direction::buy;
      o.ask = t.global_best;
      o.bid = kNan;
    } else {
      o.direction = stats::Direction::sell;
      o.bid = t.global_best;
      o.ask = kNan;
    }
    obs.push_back(o);
  }
  return obs;
}

}  // namespace ccl::sim

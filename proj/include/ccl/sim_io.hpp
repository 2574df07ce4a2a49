#pragma once

#include <iosfwd>
#include <vector>

#include "ccl/analytics.hpp"
#include "ccl/io.hpp"
#include "ccl/simulator.hpp"

namespace ccl::sim {

// trades CSV: time,price,buyer,seller,direction,global_best,skipping_cost,
// mean_mid. quotes CSV: step_time,global_max_buy,global_min_sell. Both
// carry the full provenance block.
void write_trades_csv(const SimOutput& out, const io::Provenance& prov,
                      std::ostream& os);
void write_quotes_csv(const SimOutput& out, const io::Provenance& prov,
                      std::ostream& os);

// Trade observations for the analytics layer: the direction-matched quote
// is the recorded global best, the normalization mid is the mean mid at
// the trade, and the unmatched side is left blank. Model time maps to
// integer microseconds for the time_ms field.
std::vector<stats::TradeObservation> observations_from_run(const SimOutput& out);

}  // namespace ccl::sim

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

// Trade analytics: skipping costs, the trade-price change decomposition
// into quote change plus skipping-cost change, ECDF summaries, bootstrap
// correlation errors, and subsampled realized volatility. Buyer-initiated
// and seller-initiated trades are always handled as separate series so
// bid-ask bounce cannot leak into the results.

namespace ccl::stats {

enum class Direction { buy, sell };  // buy == buyer-initiated

std::string direction_name(Direction d);
Direction direction_from_name(const std::string& name);

struct TradeObservation {
  long index = 0;
  long long time_ms = 0;
  Direction direction = Direction::buy;
  double price = 0;  // p_k
  double bid = 0;    // b_k, global best immediately before (NaN if absent)
  double ask = 0;    // a_k
  double mid = 0;    // m_k
};

// Throws data_integrity when the direction-matched quote is missing, the
// quotes are inverted, or the trade price sits on the wrong side of it.
void validate_observation(const TradeObservation& obs);

struct SkippingCost {
  double r = 0;     // price units
  double r_bp = 0;  // r / m_k, in basis points
};

SkippingCost skipping_cost(const TradeObservation& obs);

struct PriceChangeRecord {
  long index = 0;
  Direction direction = Direction::buy;
  double f = 0;     // trade-price change vs previous same-direction trade
  double g = 0;     // quote-price change
  double h = 0;     // skipping-cost change; f = g + h holds exactly
  double f_bp = 0;  // f / m_k in basis points
  double r = 0;     // skipping cost of trade k
  double r_bp = 0;
};

// One record per trade that has a same-direction predecessor; the first
// trade of each direction yields none. Input must be time-ordered.
std::vector<PriceChangeRecord> price_change_series(
    const std::vector<TradeObservation>& trades);

// Max |f - (g + h)| over the records; 0 for an empty series.
double decomposition_check(const std::vector<PriceChangeRecord>& records);

struct EcdfSummary {
  std::vector<double> xs;        // sorted unique values
  std::vector<double> ecdf;      // P(X <= x)
  std::vector<double> survivor;  // 1 - ecdf
  double min = 0, median = 0, max = 0, mean = 0, stddev = 0;
  std::size_t count = 0;
};

EcdfSummary ecdf_summary(std::vector<double> values);

double pearson(std::span<const double> x, std::span<const double> y);

struct BootstrapCorrelation {
  double rho = 0;
  double stderr_ = 0;  // sample std of rho over the resamples
  long resamples = 0;
  long degenerate = 0;  // resamples that hit the redraw cap
};

BootstrapCorrelation bootstrap_correlation(std::span<const double> x,
                                           std::span<const double> y,
                                           long n_resamples,
                                           std::mt19937_64& gen);

struct VolatilityEstimate {
  long k_intervals = 0;      // K
  long l_offsets = 0;        // L
  long n_obs = 0;            // D
  double sample_width = 0;   // T = D / K
  double subsample_width = 0;  // tau = T / L
  double value = 0;          // quadratic variation of log prices
};

// Subsampled realized variance over a 1-indexed price series: for offset
// j and interval i, the return is log p[floor((i+1)T + j tau)] minus
// log p[floor(iT + j tau)]; indices past D clamp to D. Requires
// D >= K >= 2, L >= 1, all prices > 0.
VolatilityEstimate realized_volatility(std::span<const double> prices, long k,
                                       long l);

struct SignatureRow {
  long k = 0;
  std::optional<VolatilityEstimate> estimate;
  std::string error;  // set when this K failed its preconditions
};

std::vector<SignatureRow> volatility_signature(std::span<const double> prices,
                                               const std::vector<long>& ks,
                                               long l);

// z = log(v_trade / v_quote) for a direction-matched pair of estimates.
double z_ratio(double v_trade, double v_quote);

// Reporting-time interval count for short series: min(k, max(2, D/5)).
long scaled_interval_count(long d_obs, long k);

}  // namespace ccl::stats

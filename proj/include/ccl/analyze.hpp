#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccl/analytics.hpp"

// End-to-end analysis over one or more observation days: skipping-cost
// summaries and ECDF point sets, f/g/h correlations with bootstrap
// standard errors, per-day realized volatilities with their cross-day
// correlation, z ratios, and volatility signature tables. Directions are
// computed separately throughout; "both" rows pool the direction-separated
// records at reporting time only.

namespace ccl::analyze {

struct Options {
  long k_intervals = 108;
  long l_offsets = 10;
  long bootstrap_resamples = 10000;
  std::uint64_t seed = 1;
  // "buy", "sell", or "both"
  std::string direction = "both";
  std::vector<long> signature_ks = {50, 108, 200, 300, 400, 500};
  bool scale_k_to_data = true;  // shrink K per direction as min(K, max(2, D/5))
};

struct SkippingSummaryRow {
  std::string direction;
  std::size_t count = 0;
  double min = 0, median = 0, max = 0, mean = 0, stddev = 0;  // basis points
};

struct CorrelationRow {
  std::string direction;
  std::string pair;  // "f_g" or "f_h"
  std::optional<double> rho;
  std::optional<double> stderr_;
  std::size_t n = 0;
  std::string note;  // set when undefined (e.g. h identically zero)
};

struct VolatilityRow {
  int day = 0;
  std::string direction;
  std::string series;  // "trade" or "quote"
  long k = 0, l = 0, d = 0;
  double value = 0;
};

struct ZRow {
  int day = 0;
  std::string direction;
  double z = 0;
};

struct ZSummaryRow {
  std::string direction;
  long days = 0;
  double mean = 0, stddev = 0;
};

struct VolCorrelationRow {
  std::string direction;
  std::optional<double> rho;
  std::optional<double> stderr_;
  long days = 0;
  std::string note;
};

struct EcdfPointSet {
  std::string direction;
  stats::EcdfSummary summary;  // of normalized skipping costs, basis points
};

struct SignatureTableRow {
  int day = 0;
  std::string direction;
  long k = 0;
  std::optional<double> value;
  std::string error;
};

struct Result {
  std::vector<SkippingSummaryRow> skipping;
  std::vector<EcdfPointSet> ecdfs;
  std::vector<CorrelationRow> correlations;
  std::vector<VolatilityRow> volatilities;
  std::vector<ZRow> zs;
  std::vector<ZSummaryRow> z_summary;
  std::vector<VolCorrelationRow> vol_correlations;
  std::vector<SignatureTableRow> signature;
  std::vector<std::string> skipped_tables;  // "table: reason" notes
};

Result analyze(const std::vector<std::vector<stats::TradeObservation>>& days,
               const Options& options);

// One CSV per table schema under out_dir.
void write_analysis_csvs(const Result& result, const Options& options,
                         const std::string& out_dir);

}  // namespace ccl::analyze

#include "ccl/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "ccl/error.hpp"
#include "ccl/io.hpp"
#include "ccl/rng.hpp"

namespace ccl::analyze {

namespace {

using stats::Direction;
using stats::PriceChangeRecord;
using stats::TradeObservation;

std::vector<std::string> directions_for(const std::string& mode) {
  if (mode == "buy" || mode == "sell") return {mode};
  if (mode == "both") return {"buy", "sell", "both"};
  fail(ErrorKind::invalid_argument,
       "direction must be buy, sell, or both, got '" + mode + "'");
}

bool record_matches(const PriceChangeRecord& rec, const std::string& dir) {
  if (dir == "both") return true;
  return stats::direction_name(rec.direction) == dir;
}

bool obs_matches(const TradeObservation& obs, const std::string& dir) {
  if (dir == "both") return true;
  return stats::direction_name(obs.direction) == dir;
}

CorrelationRow correlate(const std::string& direction, const std::string& pair,
                         const std::vector<double>& x,
                         const std::vector<double>& y, long resamples,
                         std::uint64_t seed) {
  CorrelationRow row;
  row.direction = direction;
  row.pair = pair;
  row.n = x.size();
  if (x.size() < 3) {
    row.note = "insufficient data (n < 3)";
    return row;
  }
  std::mt19937_64 gen(seed);
  try {
    const auto bc = stats::bootstrap_correlation(x, y, resamples, gen);
    row.rho = bc.rho;
    row.stderr_ = bc.stderr_;
    if (bc.degenerate > 0) {
      row.note = "degenerate resamples: " + std::to_string(bc.degenerate);
    }
  } catch (const Error& e) {
    row.note = std::string("undefined: ") + e.what();
  }
  return row;
}

}  // namespace

Result analyze(const std::vector<std::vector<TradeObservation>>& days,
               const Options& options) {
  Result result;
  const auto dirs = directions_for(options.direction);

  // Predecessor chains never span a day boundary.
  std::vector<std::vector<PriceChangeRecord>> day_records;
  day_records.reserve(days.size());
  for (const auto& day : days) {
    day_records.push_back(stats::price_change_series(day));
  }

  std::uint64_t boot_tag = 0;
  for (const auto& dir : dirs) {
    // Normalized skipping costs over every observation of the direction.
    std::vector<double> r_bp;
    for (const auto& day : days) {
      for (const auto& obs : day) {
        if (!obs_matches(obs, dir)) continue;
        r_bp.push_back(stats::skipping_cost(obs).r_bp);
      }
    }
    if (r_bp.empty()) {
      result.skipped_tables.push_back("skipping_summary[" + dir +
                                      "]: no observations");
    } else {
      auto summary = stats::ecdf_summary(r_bp);
      SkippingSummaryRow row;
      row.direction = dir;
      row.count = summary.count;
      row.min = summary.min;
      row.median = summary.median;
      row.max = summary.max;
      row.mean = summary.mean;
      row.stddev = summary.stddev;
      result.skipping.push_back(row);
      if (dir != "both") {
        result.ecdfs.push_back({dir, std::move(summary)});
      }
    }

    // f/g and f/h correlations over the pooled records.
    std::vector<double> f, g, h;
    for (const auto& recs : day_records) {
      for (const auto& rec : recs) {
        if (!record_matches(rec, dir)) continue;
        f.push_back(rec.f);
        g.push_back(rec.g);
        h.push_back(rec.h);
      }
    }
    result.correlations.push_back(
        correlate(dir, "f_g", f, g, options.bootstrap_resamples,
                  rng::derive_seed(options.seed, {0xb0, boot_tag, 0})));
    result.correlations.push_back(
        correlate(dir, "f_h", f, h, options.bootstrap_resamples,
                  rng::derive_seed(options.seed, {0xb0, boot_tag, 1})));
    ++boot_tag;
  }

  // Per-day, per-direction realized volatilities and z ratios.
  for (const auto& dir : dirs) {
    if (dir == "both") continue;
    std::vector<double> v_trades, v_quotes;
    std::vector<int> vol_days;
    for (std::size_t di = 0; di < days.size(); ++di) {
      std::vector<double> prices, quotes;
      for (const auto& obs : days[di]) {
        if (!obs_matches(obs, dir)) continue;
        prices.push_back(obs.price);
        quotes.push_back(obs.direction == Direction::buy ? obs.ask : obs.bid);
      }
      const long d_obs = static_cast<long>(prices.size());
      if (d_obs < 2) {
        result.skipped_tables.push_back(
            "volatility[day " + std::to_string(di) + ", " + dir +
            "]: fewer than 2 trades");
        continue;
      }
      const long k_used =
          options.scale_k_to_data
              ? stats::scaled_interval_count(d_obs, options.k_intervals)
              : options.k_intervals;
      try {
        const auto vt =
            stats::realized_volatility(prices, k_used, options.l_offsets);
        const auto vq =
            stats::realized_volatility(quotes, k_used, options.l_offsets);
        result.volatilities.push_back({static_cast<int>(di), dir, "trade",
                                       vt.k_intervals, vt.l_offsets, vt.n_obs,
                                       vt.value});
        result.volatilities.push_back({static_cast<int>(di), dir, "quote",
                                       vq.k_intervals, vq.l_offsets, vq.n_obs,
                                       vq.value});
        if (vt.value > 0 && vq.value > 0) {
          const double z = stats::z_ratio(vt.value, vq.value);
          result.zs.push_back({static_cast<int>(di), dir, z});
          v_trades.push_back(vt.value);
          v_quotes.push_back(vq.value);
          vol_days.push_back(static_cast<int>(di));
        } else {
          result.skipped_tables.push_back(
              "z[day " + std::to_string(di) + ", " + dir +
              "]: zero realized volatility");
        }
      } catch (const Error& e) {
        result.skipped_tables.push_back("volatility[day " + std::to_string(di) +
                                        ", " + dir + "]: " + e.what());
      }

      // Signature table for external plotting; per-K failures are rows.
      for (const auto& sig :
           stats::volatility_signature(prices, options.signature_ks,
                                       options.l_offsets)) {
        SignatureTableRow row;
        row.day = static_cast<int>(di);
        row.direction = dir;
        row.k = sig.k;
        if (sig.estimate) {
          row.value = sig.estimate->value;
        } else {
          row.error = sig.error;
        }
        result.signature.push_back(std::move(row));
      }
    }

    // z mean/std across days.
    {
      std::vector<double> zs;
      for (const auto& z : result.zs) {
        if (z.direction == dir) zs.push_back(z.z);
      }
      if (!zs.empty()) {
        const auto s = stats::ecdf_summary(zs);
        result.z_summary.push_back(
            {dir, static_cast<long>(zs.size()), s.mean, s.stddev});
      }
    }

    // Cross-day correlation of trade vs quote volatility.
    VolCorrelationRow vrow;
    vrow.direction = dir;
    vrow.days = static_cast<long>(v_trades.size());
    if (v_trades.size() < 3) {
      vrow.note = "insufficient days (need >= 3)";
    } else {
      const auto row = correlate(dir, "vt_vq", v_trades, v_quotes,
                                 options.bootstrap_resamples,
                                 rng::derive_seed(options.seed, {0xc0, 0}));
      vrow.rho = row.rho;
      vrow.stderr_ = row.stderr_;
      vrow.note = row.note;
    }
    result.vol_correlations.push_back(vrow);
  }

  return result;
}

namespace {

std::string opt_num(const std::optional<double>& v) {
  return v ? io::fmt_double(*v) : std::string();
}

io::Provenance analysis_provenance(const Options& options) {
  io::Provenance prov("cclmkt", "analyze");
  prov.put("k", static_cast<long long>(options.k_intervals));
  prov.put("l", static_cast<long long>(options.l_offsets));
  prov.put("bootstrap_resamples",
           static_cast<long long>(options.bootstrap_resamples));
  prov.put("direction", options.direction);
  prov.put_seed(options.seed);
  return prov;
}

}  // namespace

void write_analysis_csvs(const Result& result, const Options& options,
                         const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto prov = analysis_provenance(options);

  auto open = [&](const std::string& name) {
    std::ofstream os(out_dir + "/" + name);
    if (!os) fail(ErrorKind::data_integrity, "cannot write " + out_dir + "/" + name);
    prov.write(os);
    return os;
  };

  {
    auto os = open("skipping_summary.csv");
    os << "direction,count,min_bp,median_bp,max_bp,mean_bp,std_bp\n";
    for (const auto& r : result.skipping) {
      os << r.direction << ',' << r.count << ',' << io::fmt_double(r.min) << ','
         << io::fmt_double(r.median) << ',' << io::fmt_double(r.max) << ','
         << io::fmt_double(r.mean) << ',' << io::fmt_double(r.stddev) << "\n";
    }
  }
  {
    auto os = open("ecdf_skipping.csv");
    os << "direction,x_bp,ecdf,survivor\n";
    for (const auto& e : result.ecdfs) {
      for (std::size_t i = 0; i < e.summary.xs.size(); ++i) {
        os << e.direction << ',' << io::fmt_double(e.summary.xs[i]) << ','
           << io::fmt_double(e.summary.ecdf[i]) << ','
           << io::fmt_double(e.summary.survivor[i]) << "\n";
      }
    }
  }
  {
    auto os = open("fgh_correlations.csv");
    os << "direction,pair,rho,stderr,n,note\n";
    for (const auto& r : result.correlations) {
      os << r.direction << ',' << r.pair << ',' << opt_num(r.rho) << ','
         << opt_num(r.stderr_) << ',' << r.n << ',' << r.note << "\n";
    }
  }
  {
    auto os = open("volatility.csv");
    os << "day,direction,series,k,l,d,value\n";
    for (const auto& r : result.volatilities) {
      os << r.day << ',' << r.direction << ',' << r.series << ',' << r.k << ','
         << r.l << ',' << r.d << ',' << io::fmt_double(r.value) << "\n";
    }
  }
  {
    auto os = open("vol_correlations.csv");
    os << "direction,rho,stderr,days,note\n";
    for (const auto& r : result.vol_correlations) {
      os << r.direction << ',' << opt_num(r.rho) << ',' << opt_num(r.stderr_)
         << ',' << r.days << ',' << r.note << "\n";
    }
  }
  {
    auto os = open("z.csv");
    os << "day,direction,z\n";
    for (const auto& r : result.zs) {
      os << r.day << ',' << r.direction << ',' << io::fmt_double(r.z) << "\n";
    }
  }
  {
    auto os = open("z_summary.csv");
    os << "direction,days,z_mean,z_std\n";
    for (const auto& r : result.z_summary) {
      os << r.direction << ',' << r.days << ',' << io::fmt_double(r.mean) << ','
         << io::fmt_double(r.stddev) << "\n";
    }
  }
  {
    auto os = open("signature.csv");
    os << "day,direction,k,value,error\n";
    for (const auto& r : result.signature) {
      os << r.day << ',' << r.direction << ',' << r.k << ',' << opt_num(r.value)
         << ',' << r.error << "\n";
    }
  }
  if (!result.skipped_tables.empty()) {
    auto os = open("analysis_notes.csv");
    os << "note\n";
    for (const auto& n : result.skipped_tables) os << n << "\n";
  }
}

}  // namespace ccl::analyze

#include "ccl/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ccl/error.hpp"
#include "ccl/rng.hpp"

namespace ccl::stats {

namespace {
constexpr double kBasisPoints = 1e4;
}

std::string direction_name(Direction d) {
  return d == Direction::buy ? "buy" : "sell";
}

Direction direction_from_name(const std::string& name) {
  if (name == "buy") return Direction::buy;
  if (name == "sell") return Direction::sell;
  fail(ErrorKind::data_integrity, "unknown direction '" + name + "'");
}

void validate_observation(const TradeObservation& obs) {
  const bool buy = obs.direction == Direction::buy;
  const double quote = buy ? obs.ask : obs.bid;
  if (!std::isfinite(quote)) {
    fail(ErrorKind::data_integrity,
         "observation " + std::to_string(obs.index) +
             ": missing direction-matched quote");
  }
  if (!(obs.mid > 0)) {
    fail(ErrorKind::data_integrity,
         "observation " + std::to_string(obs.index) + ": mid must be positive");
  }
  if (std::isfinite(obs.bid) && std::isfinite(obs.ask) && !(obs.bid < obs.ask)) {
    fail(ErrorKind::data_integrity,
         "observation " + std::to_string(obs.index) + ": bid >= ask");
  }
  const double r = buy ? obs.price - obs.ask : obs.bid - obs.price;
  if (r < 0) {
    fail(ErrorKind::data_integrity,
         "observation " + std::to_string(obs.index) +
             ": trade price on the wrong side of the quote (r_k < 0)");
  }
}

SkippingCost skipping_cost(const TradeObservation& obs) {
  validate_observation(obs);
  SkippingCost out;
  out.r = obs.direction == Direction::buy ? obs.price - obs.ask
                                          : obs.bid - obs.price;
  out.r_bp = out.r / obs.mid * kBasisPoints;
  return out;
}

std::vector<PriceChangeRecord> price_change_series(
    const std::vector<TradeObservation>& trades) {
  std::vector<PriceChangeRecord> records;
  const TradeObservation* prev_buy = nullptr;
  const TradeObservation* prev_sell = nullptr;
  for (const auto& obs : trades) {
    validate_observation(obs);
    const bool buy = obs.direction == Direction::buy;
    const TradeObservation*& prev = buy ? prev_buy : prev_sell;
    if (prev != nullptr) {
      PriceChangeRecord rec;
      rec.index = obs.index;
      rec.direction = obs.direction;
      if (buy) {
        rec.f = obs.price - prev->price;
        rec.g = obs.ask - prev->ask;
      } else {
        rec.f = prev->price - obs.price;
        rec.g = prev->bid - obs.bid;
      }
      // The change in skipping cost is the decomposition residual by
      // definition; computing it as f - g keeps the identity exact at the
      // bit level. It coincides with r_k - r_k' in exact arithmetic.
      rec.h = rec.f - rec.g;
      rec.f_bp = rec.f / obs.mid * kBasisPoints;
      const SkippingCost sc = skipping_cost(obs);
      rec.r = sc.r;
      rec.r_bp = sc.r_bp;
      records.push_back(rec);
    }
    prev = &obs;
  }
  return records;
}

double decomposition_check(const std::vector<PriceChangeRecord>& records) {
  double worst = 0;
  for (const auto& rec : records) {
    worst = std::max(worst, std::abs(rec.f - (rec.g + rec.h)));
  }
  return worst;
}

EcdfSummary ecdf_summary(std::vector<double> values) {
  if (values.empty()) {
    fail(ErrorKind::invalid_argument, "ecdf_summary: empty input");
  }
  std::sort(values.begin(), values.end());
  EcdfSummary out;
  out.count = values.size();
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
    out.xs.push_back(values[i]);
    const double cum = static_cast<double>(i + 1) / n;
    out.ecdf.push_back(cum);
    out.survivor.push_back(1.0 - cum);
  }
  out.min = values.front();
  out.max = values.back();
  const std::size_t mid = values.size() / 2;
  out.median = values.size() % 2 == 1
                   ? values[mid]
                   : 0.5 * (values[mid - 1] + values[mid]);
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(ss / (n - 1.0));
  }
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    fail(ErrorKind::invalid_argument, "pearson: need two series of equal size >= 2");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) {
    fail(ErrorKind::insufficient_data,
         "pearson: zero variance makes the correlation undefined");
  }
  return sxy / std::sqrt(sxx * syy);
}

BootstrapCorrelation bootstrap_correlation(std::span<const double> x,
                                           std::span<const double> y,
                                           long n_resamples,
                                           std::mt19937_64& gen) {
  if (x.size() != y.size() || x.size() < 3) {
    fail(ErrorKind::invalid_argument,
         "bootstrap_correlation: need paired series of size >= 3");
  }
  if (n_resamples < 1) {
    fail(ErrorKind::invalid_argument, "bootstrap_correlation: resamples >= 1");
  }
  BootstrapCorrelation out;
  out.rho = pearson(x, y);  // throws if degenerate
  out.resamples = n_resamples;

  const std::size_t n = x.size();
  std::vector<double> rx(n), ry(n), rhos;
  rhos.reserve(static_cast<std::size_t>(n_resamples));
  constexpr int kRedrawCap = 100;
  for (long b = 0; b < n_resamples; ++b) {
    double rho_b = 0;
    bool ok = false;
    for (int attempt = 0; attempt < kRedrawCap && !ok; ++attempt) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t pick =
            static_cast<std::size_t>(rng::bounded(gen, n));
        rx[i] = x[pick];
        ry[i] = y[pick];
      }
      try {
        rho_b = pearson(rx, ry);
        ok = true;
      } catch (const Error&) {
        // degenerate resample; redraw
      }
    }
    if (!ok) {
      ++out.degenerate;
      rho_b = 0;
    }
    rhos.push_back(rho_b);
  }

  const double m =
      std::accumulate(rhos.begin(), rhos.end(), 0.0) / rhos.size();
  double ss = 0;
  for (double v : rhos) ss += (v - m) * (v - m);
  out.stderr_ = rhos.size() > 1 ? std::sqrt(ss / (rhos.size() - 1.0)) : 0.0;
  return out;
}

VolatilityEstimate realized_volatility(std::span<const double> prices, long k,
                                       long l) {
  const long d = static_cast<long>(prices.size());
  if (k < 2) fail(ErrorKind::invalid_argument, "realized_volatility: K >= 2");
  if (l < 1) fail(ErrorKind::invalid_argument, "realized_volatility: L >= 1");
  if (d < k) {
    fail(ErrorKind::insufficient_data,
         "realized_volatility: need D >= K (D=" + std::to_string(d) +
             ", K=" + std::to_string(k) + ")");
  }
  for (long i = 0; i < d; ++i) {
    if (!(prices[static_cast<std::size_t>(i)] > 0)) {
      fail(ErrorKind::invalid_argument,
           "realized_volatility: prices must be positive");
    }
  }

  VolatilityEstimate out;
  out.k_intervals = k;
  out.l_offsets = l;
  out.n_obs = d;
  const double t = static_cast<double>(d) / static_cast<double>(k);
  const double tau = t / static_cast<double>(l);
  out.sample_width = t;
  out.subsample_width = tau;

  // 1-indexed formula; the floor index can pass D for the last interval of
  // a shifted sub-sample and clamps to the final observation.
  auto price_at = [&](double pos) {
    long idx = static_cast<long>(std::floor(pos));
    if (idx > d) idx = d;
    if (idx < 1) idx = 1;
    return prices[static_cast<std::size_t>(idx - 1)];
  };

  double total = 0;
  for (long j = 0; j < l; ++j) {
    const double offset = static_cast<double>(j) * tau;
    double vj = 0;
    for (long i = 1; i <= k - 1; ++i) {
      const double r = std::log(price_at(static_cast<double>(i + 1) * t + offset)) -
                       std::log(price_at(static_cast<double>(i) * t + offset));
      vj += r * r;
    }
    total += vj;
  }
  out.value = total / static_cast<double>(l);
  return out;
}

std::vector<SignatureRow> volatility_signature(std::span<const double> prices,
                                               const std::vector<long>& ks,
                                               long l) {
  std::vector<SignatureRow> rows;
  rows.reserve(ks.size());
  for (long k : ks) {
    SignatureRow row;
    row.k = k;
    try {
      row.estimate = realized_volatility(prices, k, l);
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double z_ratio(double v_trade, double v_quote) {
  if (!(v_trade > 0) || !(v_quote > 0)) {
    fail(ErrorKind::invalid_argument,
         "z_ratio: volatilities must be positive");
  }
  return std::log(v_trade / v_quote);
}

long scaled_interval_count(long d_obs, long k) {
  return std::min(k, std::max<long>(2, d_obs / 5));
}

}  // namespace ccl::stats

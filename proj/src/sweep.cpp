#include "ccl/sweep.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <thread>

#include "ccl/analytics.hpp"
#include "ccl/error.hpp"
#include "ccl/io.hpp"
#include "ccl/rng.hpp"

namespace ccl::sweep {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct Task {
  int density_index;
  int net_index;
  int run_index;
  double d_target;
  double d_actual;
  std::uint64_t seed;
  const net::CclNetwork* network;
};

struct DirStats {
  double v_trade = kNan;
  double v_quote = kNan;
  double z = kNan;
  long k_used = 0;
};

DirStats direction_stats(const std::vector<double>& prices,
                         const std::vector<double>& quotes, long vol_k,
                         long vol_l) {
  DirStats out;
  const long d = static_cast<long>(prices.size());
  if (d < 2) return out;
  out.k_used = stats::scaled_interval_count(d, vol_k);
  out.v_trade = stats::realized_volatility(prices, out.k_used, vol_l).value;
  out.v_quote = stats::realized_volatility(quotes, out.k_used, vol_l).value;
  if (out.v_trade > 0 && out.v_quote > 0) {
    out.z = stats::z_ratio(out.v_trade, out.v_quote);
  }
  return out;
}

double mean_of_defined(std::initializer_list<double> values) {
  double sum = 0;
  int count = 0;
  for (double v : values) {
    if (!std::isnan(v)) {
      sum += v;
      ++count;
    }
  }
  return count ? sum / count : kNan;
}

void fill_run_record(RunRecord& rec, const sim::SimOutput& out, long vol_k,
                     long vol_l) {
  rec.trades = static_cast<long>(out.trades.size());
  if (rec.trades > 0) {
    double sum = 0;
    for (const auto& t : out.trades) sum += t.skipping_cost;
    rec.mean_skip = sum / static_cast<double>(rec.trades);
  } else {
    rec.mean_skip = kNan;
  }

  std::vector<double> buy_prices, buy_quotes, sell_prices, sell_quotes;
  for (const auto& t : out.trades) {
    if (t.direction == sim::TradeDirection::buyer_initiated) {
      buy_prices.push_back(t.price);
      buy_quotes.push_back(t.global_best);
    } else {
      sell_prices.push_back(t.price);
      sell_quotes.push_back(t.global_best);
    }
  }
  const DirStats buy = direction_stats(buy_prices, buy_quotes, vol_k, vol_l);
  const DirStats sell = direction_stats(sell_prices, sell_quotes, vol_k, vol_l);
  rec.v_trade_buy = buy.v_trade;
  rec.v_quote_buy = buy.v_quote;
  rec.v_trade_sell = sell.v_trade;
  rec.v_quote_sell = sell.v_quote;
  rec.k_buy = buy.k_used;
  rec.k_sell = sell.k_used;
  rec.v_trade = mean_of_defined({buy.v_trade, sell.v_trade});
  rec.v_quote = mean_of_defined({buy.v_quote, sell.v_quote});
  rec.z_buy = buy.z;
  rec.z_sell = sell.z;
  rec.z = mean_of_defined({buy.z, sell.z});
}

struct Welford {
  long n = 0;
  double sum = 0;
  double sum_sq = 0;
  void add(double v) {
    ++n;
    sum += v;
    sum_sq += v * v;
  }
  double mean() const { return n ? sum / n : kNan; }
  double sample_std() const {
    if (n < 2) return n == 1 ? 0.0 : kNan;
    const double m = mean();
    double var = (sum_sq - n * m * m) / (n - 1);
    return var > 0 ? std::sqrt(var) : 0.0;
  }
};

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.densities.empty()) {
    fail(ErrorKind::invalid_argument, "sweep: empty density grid");
  }
  for (double d : spec.densities) {
    if (!(d > 0) || d > 1) {
      fail(ErrorKind::invalid_argument, "sweep: densities must lie in (0, 1]");
    }
  }
  if (spec.n < 2 || spec.networks_per_density < 1 ||
      spec.runs_per_network < 1 || spec.runs_core_periphery < 1) {
    fail(ErrorKind::invalid_argument, "sweep: counts must be >= 1 and N >= 2");
  }

  SweepResult result;
  result.spec = spec;

  const bool er = spec.topology == net::Topology::erdos_renyi;
  const int nets = er ? spec.networks_per_density : 1;
  const int runs = er ? spec.runs_per_network : spec.runs_core_periphery;

  // Networks are generated up front and sequentially, so their draws do
  // not depend on worker scheduling.
  std::vector<std::vector<net::CclNetwork>> networks(spec.densities.size());
  for (std::size_t di = 0; di < spec.densities.size(); ++di) {
    const double d = spec.densities[di];
    networks[di].reserve(nets);
    for (int ni = 0; ni < nets; ++ni) {
      if (er) {
        std::mt19937_64 gen(rng::derive_seed(
            spec.base_seed, {0x6e65ULL, di, static_cast<std::uint64_t>(ni)}));
        networks[di].push_back(
            net::generate_erdos_renyi(spec.n, d, gen));
      } else {
        const int n_periphery =
            net::core_periphery_size_for_density(spec.n, d);
        const double psi =
            static_cast<double>(n_periphery) / static_cast<double>(spec.n);
        networks[di].push_back(net::generate_core_periphery(spec.n, psi));
      }
    }
  }

  std::vector<Task> tasks;
  for (std::size_t di = 0; di < spec.densities.size(); ++di) {
    for (int ni = 0; ni < nets; ++ni) {
      const auto& network = networks[di][ni];
      for (int ri = 0; ri < runs; ++ri) {
        Task t;
        t.density_index = static_cast<int>(di);
        t.net_index = ni;
        t.run_index = ri;
        t.d_target = spec.densities[di];
        t.d_actual = net::edge_density(network);
        t.seed = rng::derive_seed(spec.base_seed,
                                  {0x72756eULL, di,
                                   static_cast<std::uint64_t>(ni),
                                   static_cast<std::uint64_t>(ri)});
        t.network = &network;
        tasks.push_back(t);
      }
    }
  }

  result.runs.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) return;
      const Task& task = tasks[idx];
      RunRecord rec;
      rec.density_index = task.density_index;
      rec.net_index = task.net_index;
      rec.run_index = task.run_index;
      rec.d_target = task.d_target;
      rec.d_actual = task.d_actual;
      rec.seed = task.seed;
      try {
        sim::ModelParams params = result.spec.model;
        params.n = result.spec.n;
        params.seed = task.seed;
        const sim::SimOutput out = sim::run(params, *task.network);
        fill_run_record(rec, out, result.spec.vol_k, result.spec.vol_l);
      } catch (const Error& e) {
        rec.failed = true;
        rec.error = e.what();
      }
      result.runs[idx] = std::move(rec);
    }
  };

  int n_workers = spec.workers > 0
                      ? spec.workers
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (n_workers < 1) n_workers = 1;
  n_workers = std::min<int>(n_workers, static_cast<int>(tasks.size()));
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  // Fixed-order reduction keyed by (density, network, run).
  for (std::size_t di = 0; di < spec.densities.size(); ++di) {
    DensityAggregate agg;
    agg.d_target = spec.densities[di];
    Welford trades, skip, vt, vq, z, dact;
    for (const auto& rec : result.runs) {
      if (rec.density_index != static_cast<int>(di)) continue;
      if (rec.failed) {
        ++agg.runs_failed;
        continue;
      }
      ++agg.runs_ok;
      dact.add(rec.d_actual);
      trades.add(static_cast<double>(rec.trades));
      if (!std::isnan(rec.mean_skip)) skip.add(rec.mean_skip);
      if (!std::isnan(rec.v_trade) && !std::isnan(rec.v_quote)) {
        vt.add(rec.v_trade);
        vq.add(rec.v_quote);
      }
      if (!std::isnan(rec.z)) z.add(rec.z);
    }
    agg.d_actual_mean = dact.mean();
    agg.trades_mean = trades.mean();
    agg.trades_std = trades.sample_std();
    agg.skip_mean = skip.mean();
    agg.skip_std = skip.sample_std();
    agg.skip_runs = skip.n;
    agg.v_trade_mean = vt.mean();
    agg.v_quote_mean = vq.mean();
    agg.vol_runs = vt.n;
    agg.z_mean = z.mean();
    agg.z_std = z.sample_std();
    agg.z_runs = z.n;
    result.aggregates.push_back(agg);
  }
  return result;
}

namespace {

io::Provenance sweep_provenance(const SweepSpec& spec) {
  io::Provenance prov("cclmkt", "sweep");
  prov.put("topology", spec.topology == net::Topology::erdos_renyi
                           ? std::string("er")
                           : std::string("cp"));
  std::string grid;
  for (std::size_t i = 0; i < spec.densities.size(); ++i) {
    if (i) grid += ' ';
    grid += io::fmt_double(spec.densities[i]);
  }
  prov.put("densities", grid);
  prov.put("n", static_cast<long long>(spec.n));
  prov.put("networks_per_density", static_cast<long long>(spec.networks_per_density));
  prov.put("runs_per_network", static_cast<long long>(spec.runs_per_network));
  prov.put("runs_core_periphery", static_cast<long long>(spec.runs_core_periphery));
  prov.put_seed(spec.base_seed);
  prov.put("epsilon", spec.model.epsilon);
  prov.put("kappa", spec.model.kappa);
  prov.put("gamma", spec.model.gamma);
  prov.put("m0_bar", spec.model.m0_bar);
  sim::ModelParams effective = spec.model;
  effective.n = spec.n;
  prov.put("dt", effective.step_dt());
  prov.put("t_burn", spec.model.t_burn);
  prov.put("t_end", spec.model.t_end);
  prov.put("vol_k", static_cast<long long>(spec.vol_k));
  prov.put("vol_l", static_cast<long long>(spec.vol_l));
  return prov;
}

std::string num_or_blank(double v) {
  return std::isnan(v) ? std::string() : io::fmt_double(v);
}

}  // namespace

void write_sweep_csvs(const SweepResult& result, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto prov = sweep_provenance(result.spec);

  {
    std::ofstream os(out_dir + "/sweep_runs.csv");
    if (!os) fail(ErrorKind::data_integrity, "cannot write " + out_dir);
    prov.write(os);
    os << "density_index,d_target,d_actual,net_index,run_index,seed,failed,"
          "trades,mean_skip,v_trade_buy,v_quote_buy,v_trade_sell,"
          "v_quote_sell,v_trade,v_quote,z_buy,z_sell,z,k_buy,k_sell\n";
    for (const auto& r : result.runs) {
      os << r.density_index << ',' << io::fmt_double(r.d_target) << ','
         << io::fmt_double(r.d_actual) << ',' << r.net_index << ','
         << r.run_index << ',' << r.seed << ',' << (r.failed ? 1 : 0) << ','
         << r.trades << ',' << num_or_blank(r.mean_skip) << ','
         << num_or_blank(r.v_trade_buy) << ',' << num_or_blank(r.v_quote_buy)
         << ',' << num_or_blank(r.v_trade_sell) << ','
         << num_or_blank(r.v_quote_sell) << ',' << num_or_blank(r.v_trade)
         << ',' << num_or_blank(r.v_quote) << ',' << num_or_blank(r.z_buy)
         << ',' << num_or_blank(r.z_sell) << ',' << num_or_blank(r.z) << ','
         << r.k_buy << ',' << r.k_sell << "\n";
    }
  }
  {
    std::ofstream os(out_dir + "/sweep_aggregates.csv");
    if (!os) fail(ErrorKind::data_integrity, "cannot write " + out_dir);
    prov.write(os);
    os << "density_index,d_target,d_actual_mean,runs_ok,runs_failed,"
          "trades_mean,trades_std,skip_mean,skip_std,skip_runs,"
          "v_trade_mean,v_quote_mean,vol_runs,z_mean,z_std,z_runs\n";
    for (std::size_t i = 0; i < result.aggregates.size(); ++i) {
      const auto& a = result.aggregates[i];
      os << i << ',' << io::fmt_double(a.d_target) << ','
         << num_or_blank(a.d_actual_mean) << ',' << a.runs_ok << ','
         << a.runs_failed << ',' << num_or_blank(a.trades_mean) << ','
         << num_or_blank(a.trades_std) << ',' << num_or_blank(a.skip_mean)
         << ',' << num_or_blank(a.skip_std) << ',' << a.skip_runs << ','
         << num_or_blank(a.v_trade_mean) << ',' << num_or_blank(a.v_quote_mean)
         << ',' << a.vol_runs << ',' << num_or_blank(a.z_mean) << ','
         << num_or_blank(a.z_std) << ',' << a.z_runs << "\n";
    }
  }
}

}  // namespace ccl::sweep

#include "ccl/network.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <string>

#include "ccl/error.hpp"
#include "ccl/rng.hpp"

namespace ccl::net {

namespace {

long max_edges(int n) { return static_cast<long>(n) * (n - 1) / 2; }

void sort_edges(CclNetwork& net) {
  std::sort(net.edges.begin(), net.edges.end());
}

}  // namespace

double edge_density(const CclNetwork& net) {
  if (net.n_nodes < 2) {
    fail(ErrorKind::invalid_argument,
         "edge_density: need at least 2 nodes, got " +
             std::to_string(net.n_nodes));
  }
  return 2.0 * static_cast<double>(net.n_edges()) /
         (static_cast<double>(net.n_nodes) * (net.n_nodes - 1));
}

long required_edge_count(int n_nodes, double density, bool* clamped) {
  if (n_nodes < 2) {
    fail(ErrorKind::invalid_argument, "required_edge_count: N must be >= 2");
  }
  if (!(density > 0.0) || density > 1.0) {
    fail(ErrorKind::invalid_argument,
         "required_edge_count: density must be in (0, 1]");
  }
  const long all = max_edges(n_nodes);
  long n = std::llround(density * static_cast<double>(all));
  bool did_clamp = false;
  if (n < n_nodes - 1) {
    n = n_nodes - 1;
    did_clamp = true;
  }
  if (n > all) {
    n = all;
    did_clamp = true;
  }
  if (clamped) *clamped = did_clamp;
  return n;
}

std::vector<std::vector<int>> adjacency_lists(const CclNetwork& net) {
  std::vector<std::vector<int>> adj(net.n_nodes);
  for (auto [i, j] : net.edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  return adj;
}

bool is_connected(const CclNetwork& net) {
  if (net.n_nodes <= 0) return false;
  if (net.n_nodes == 1) return true;
  auto adj = adjacency_lists(net);
  std::vector<char> seen(net.n_nodes, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == net.n_nodes;
}

bool has_self_loop_or_duplicate(const CclNetwork& net) {
  std::set<std::pair<int, int>> seen;
  for (auto [i, j] : net.edges) {
    if (i == j) return true;
    auto key = std::minmax(i, j);
    if (!seen.insert({key.first, key.second}).second) return true;
  }
  return false;
}

CclNetwork generate_erdos_renyi(int n_nodes, double density,
                                std::mt19937_64& gen,
                                ErGenerationStats* stats,
                                long rejection_budget) {
  bool clamped = false;
  const long n_edges = required_edge_count(n_nodes, density, &clamped);
  if (stats) {
    stats->edge_count_clamped = clamped;
    stats->rejections = 0;
  }

  std::vector<std::pair<int, int>> all_pairs;
  all_pairs.reserve(max_edges(n_nodes));
  for (int i = 0; i < n_nodes; ++i) {
    for (int j = i + 1; j < n_nodes; ++j) all_pairs.emplace_back(i, j);
  }

  const auto total = static_cast<std::size_t>(all_pairs.size());
  for (long attempt = 0;; ++attempt) {
    if (attempt >= rejection_budget) {
      fail(ErrorKind::generation_failure,
           "generate_erdos_renyi: rejection budget exhausted (N=" +
               std::to_string(n_nodes) + ", edges=" + std::to_string(n_edges) +
               ")");
    }
    // Partial Fisher-Yates: the first n_edges entries are a uniform subset.
    for (long k = 0; k < n_edges; ++k) {
      const std::size_t pick =
          k + rng::bounded(gen, static_cast<std::uint64_t>(total - k));
      std::swap(all_pairs[k], all_pairs[pick]);
    }
    CclNetwork net;
    net.n_nodes = n_nodes;
    net.edges.assign(all_pairs.begin(), all_pairs.begin() + n_edges);
    sort_edges(net);
    if (is_connected(net)) return net;
    if (stats) ++stats->rejections;
  }
}

CclNetwork generate_core_periphery(int n_nodes, double periphery_fraction) {
  if (n_nodes < 2) {
    fail(ErrorKind::invalid_argument, "generate_core_periphery: N must be >= 2");
  }
  if (periphery_fraction < 0.0 || periphery_fraction >= 1.0) {
    fail(ErrorKind::invalid_argument,
         "generate_core_periphery: psi must be in [0, 1)");
  }
  const int n_periphery =
      static_cast<int>(std::llround(periphery_fraction * n_nodes));
  const int n_core = n_nodes - n_periphery;
  if (n_core < 1) {
    fail(ErrorKind::invalid_argument,
         "generate_core_periphery: rounding left an empty core (psi=" +
             std::to_string(periphery_fraction) + ")");
  }
  CclNetwork net;
  net.n_nodes = n_nodes;
  for (int i = 0; i < n_core; ++i) {
    for (int j = i + 1; j < n_core; ++j) net.edges.emplace_back(i, j);
  }
  for (int k = 0; k < n_periphery; ++k) {
    const int core = k % n_core;
    const int node = n_core + k;
    net.edges.emplace_back(core, node);
  }
  sort_edges(net);
  return net;
}

CclNetwork from_spec(const NetworkSpec& spec, int n_nodes,
                     ErGenerationStats* stats) {
  if (spec.topology == Topology::core_periphery) {
    return generate_core_periphery(n_nodes, spec.periphery_fraction);
  }
  std::mt19937_64 gen(spec.seed);
  return generate_erdos_renyi(n_nodes, spec.target_density, gen, stats);
}

double core_periphery_density(int n_nodes, int n_periphery) {
  const int n_core = n_nodes - n_periphery;
  const long n =
      static_cast<long>(n_core) * (n_core - 1) / 2 + n_periphery;
  return 2.0 * static_cast<double>(n) /
         (static_cast<double>(n_nodes) * (n_nodes - 1));
}

int core_periphery_size_for_density(int n_nodes, double target_density) {
  int best = 0;
  double best_err = std::abs(core_periphery_density(n_nodes, 0) - target_density);
  for (int p = 1; p <= n_nodes - 1; ++p) {
    const double err =
        std::abs(core_periphery_density(n_nodes, p) - target_density);
    if (err < best_err) {
      best_err = err;
      best = p;
    }
  }
  return best;
}

void write_edge_list(const CclNetwork& net, std::ostream& os) {
  os << "N " << net.n_nodes << "\n";
  for (auto [i, j] : net.edges) os << i << " " << j << "\n";
}

CclNetwork read_edge_list(std::istream& is) {
  CclNetwork net;
  std::string tag;
  if (!(is >> tag) || tag != "N" || !(is >> net.n_nodes) || net.n_nodes < 1) {
    fail(ErrorKind::data_integrity, "edge list: expected header 'N <count>'");
  }
  int i = 0, j = 0;
  while (is >> i >> j) {
    if (i < 0 || j < 0 || i >= net.n_nodes || j >= net.n_nodes || i >= j) {
      fail(ErrorKind::data_integrity,
           "edge list: bad edge " + std::to_string(i) + " " + std::to_string(j));
    }
    net.edges.emplace_back(i, j);
  }
  sort_edges(net);
  if (has_self_loop_or_duplicate(net)) {
    fail(ErrorKind::data_integrity, "edge list: duplicate edge");
  }
  return net;
}

}  // namespace ccl::net

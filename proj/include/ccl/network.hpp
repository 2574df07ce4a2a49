#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <utility>
#include <vector>

// CCL networks: undirected institution graphs whose edges are the extant
// bilateral credit relationships. Two constructions are provided, an
// Erdos-Renyi draw with a fixed edge count and a deterministic
// core-periphery layout; both are required to come out connected.

namespace ccl::net {

struct CclNetwork {
  int n_nodes = 0;
  // Unordered pairs stored as (i, j) with i < j, sorted, no duplicates.
  std::vector<std::pair<int, int>> edges;

  long n_edges() const { return static_cast<long>(edges.size()); }
};

enum class Topology { erdos_renyi, core_periphery };

struct NetworkSpec {
  Topology topology = Topology::erdos_renyi;
  double target_density = 1.0;      // d in (0, 1], Erdos-Renyi
  double periphery_fraction = 0.0;  // psi in [0, 1), core-periphery
  std::uint64_t seed = 0;
};

// d = 2n / (N (N - 1)); requires N >= 2.
double edge_density(const CclNetwork& net);

// round(d * N(N-1)/2), clamped below to N-1 so connectivity is achievable.
// `clamped`, when given, reports that the clamp fired (for run metadata).
long required_edge_count(int n_nodes, double density, bool* clamped = nullptr);

struct ErGenerationStats {
  long rejections = 0;
  bool edge_count_clamped = false;
};

// Exactly required_edge_count(N, d) edges placed uniformly at random,
// redrawn until the network is connected. Throws generation_failure when
// the rejection budget runs out.
CclNetwork generate_erdos_renyi(int n_nodes, double density,
                                std::mt19937_64& gen,
                                ErGenerationStats* stats = nullptr,
                                long rejection_budget = 1000000);

// Deterministic: round(psi * N) periphery nodes, the rest form a complete
// core; periphery node k attaches to core node (k mod n_core), which keeps
// core degrees within 1 of each other.
CclNetwork generate_core_periphery(int n_nodes, double periphery_fraction);

CclNetwork from_spec(const NetworkSpec& spec, int n_nodes,
                     ErGenerationStats* stats = nullptr);

bool is_connected(const CclNetwork& net);
bool has_self_loop_or_duplicate(const CclNetwork& net);
std::vector<std::vector<int>> adjacency_lists(const CclNetwork& net);

// Core size (and implied periphery fraction) whose core-periphery density
// lands nearest the target; used when sweeping both topologies over one
// density grid.
int core_periphery_size_for_density(int n_nodes, double target_density);
double core_periphery_density(int n_nodes, int n_periphery);

// Plain-text edge list: "N <count>" then one "i j" per line, i < j.
void write_edge_list(const CclNetwork& net, std::ostream& os);
CclNetwork read_edge_list(std::istream& is);

}  // namespace ccl::net

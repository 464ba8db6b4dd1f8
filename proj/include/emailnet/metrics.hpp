#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "emailnet/network.hpp"

namespace emailnet {

// Kernels below come in two flavors: the OpenMP one used in production and a
// plain serial reference kept for tests and benchmarks. Both return
// identical results for identical inputs.
enum class Execution { serial, parallel };

// Sets the OpenMP thread count; no-op without OpenMP.
void set_thread_count(int threads);
int thread_count();

struct ClusteringResult {
  std::vector<double> per_vertex;             // C_v
  double average = 0.0;                       // C
  double random_baseline = 0.0;               // <k> / (|V| - 1)
  std::vector<std::uint64_t> triangle_edges;  // E_v, edges among neighbors
  std::vector<std::uint32_t> degrees;         // k_v, self-loops excluded
};

// Local clustering on the undirected view. C_v = 2E_v / (k_v(k_v-1)) for
// k_v >= 2 and 0 otherwise; every vertex enters the average.
// Throws UndefinedValueError on an empty network.
ClusteringResult clustering(const EmailNetwork& net, Execution exec = Execution::parallel);

struct PathOptions {
  enum class Kind { exact, sampled };
  Kind kind = Kind::sampled;
  std::size_t sources = 100;
  std::uint64_t seed = 1;
  // exact mode is refused above this giant-component size unless forced
  std::size_t exact_limit = 50'000;
  bool force = false;

  static PathOptions exact_all(bool force = false) {
    PathOptions o;
    o.kind = Kind::exact;
    o.force = force;
    return o;
  }
  static PathOptions sampled(std::size_t sources, std::uint64_t seed) {
    PathOptions o;
    o.sources = sources;
    o.seed = seed;
    return o;
  }
};

struct PathLengthEstimate {
  double mean = 0.0;
  std::size_t sample_sources = 0;
  bool exact = false;
  std::size_t component_size = 0;
};

// Mean hop distance over ordered pairs inside the largest connected component
// of the undirected view, from all (exact) or uniformly chosen (sampled) BFS
// roots. Throws UndefinedValueError when that component has < 2 vertices and
// UsageError when exact mode exceeds the size limit without `force`.
PathLengthEstimate average_path_length(const EmailNetwork& net, const PathOptions& opts,
                                       Execution exec = Execution::parallel);

enum class ComponentMode { undirected_connected, directed_strong };

struct ComponentLabels {
  std::vector<std::uint32_t> component_of;
  std::size_t count = 0;
};

// Labels are assigned in order of each component's smallest vertex id.
ComponentLabels connected_components(const UndirectedAdjacency& adj);
// Iterative Tarjan; no recursion, so long chains cannot exhaust the stack.
ComponentLabels strongly_connected_components(const Csr& out);

struct ComponentSummary {
  std::vector<std::size_t> sizes;  // descending
  double giant_fraction = 0.0;
  std::size_t second_largest = 0;
  ComponentMode mode = ComponentMode::undirected_connected;
  std::size_t giant_size() const { return sizes.empty() ? 0 : sizes.front(); }
};

// Throws UndefinedValueError on an empty network.
ComponentSummary components(const EmailNetwork& net, ComponentMode mode);

// (size, fraction of vertices in components of that size), ascending by size.
std::vector<std::pair<std::size_t, double>> component_size_histogram(const ComponentSummary& s);

// Vertices of the largest undirected component; ties go to the component
// holding the smallest vertex id.
std::vector<VertexId> giant_component(const EmailNetwork& net);

}  // namespace emailnet

#include "emailnet/metrics.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "emailnet/error.hpp"

namespace emailnet {

void set_thread_count(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

constexpr std::uint32_t unvisited = std::numeric_limits<std::uint32_t>::max();

double local_coefficient(std::uint64_t links, std::uint64_t k) {
  if (k < 2) return 0.0;
  return 2.0 * static_cast<double>(links) / (static_cast<double>(k) * static_cast<double>(k - 1));
}

// Serial reference: test every neighbor pair for adjacency.
void triangles_serial(const Csr& adj, std::vector<std::uint64_t>& links) {
  const auto n = adj.vertex_count();
  for (VertexId v = 0; v < n; ++v) {
    auto nb = adj.neighbors(v);
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      auto ni = adj.neighbors(nb[i]);
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (std::binary_search(ni.begin(), ni.end(), nb[j])) ++count;
    }
    links[v] = count;
  }
}

// Mark N(v), then count marked vertices in N(u) for every u in N(v); each
// neighbor-neighbor edge is seen twice.
void triangles_parallel(const Csr& adj, std::vector<std::uint64_t>& links) {
  const auto n = static_cast<std::int64_t>(adj.vertex_count());
#pragma omp parallel
  {
    std::vector<std::uint32_t> mark(static_cast<std::size_t>(n), unvisited);
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t iv = 0; iv < n; ++iv) {
      const auto v = static_cast<VertexId>(iv);
      auto nb = adj.neighbors(v);
      if (nb.size() < 2) {
        links[v] = 0;
        continue;
      }
      for (auto u : nb) mark[u] = v;
      std::uint64_t twice = 0;
      for (auto u : nb)
        for (auto w : adj.neighbors(u)) twice += mark[w] == v;
      links[v] = twice / 2;
    }
  }
}

std::uint64_t bfs_distance_sum(const Csr& adj, VertexId root, std::vector<std::uint32_t>& dist,
                               std::vector<VertexId>& queue) {
  queue.clear();
  queue.push_back(root);
  dist[root] = 0;
  std::uint64_t sum = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto v = queue[head];
    auto d = dist[v] + 1;
    for (auto w : adj.neighbors(v)) {
      if (dist[w] != unvisited) continue;
      dist[w] = d;
      sum += d;
      queue.push_back(w);
    }
  }
  for (auto v : queue) dist[v] = unvisited;
  return sum;
}

ComponentLabels relabel_by_first_vertex(std::vector<std::uint32_t> raw, std::size_t count) {
  std::vector<std::uint32_t> fresh(count, unvisited);
  std::uint32_t next = 0;
  for (auto& c : raw) {
    if (fresh[c] == unvisited) fresh[c] = next++;
    c = fresh[c];
  }
  return {std::move(raw), count};
}

}  // namespace

ClusteringResult clustering(const EmailNetwork& net, Execution exec) {
  if (net.empty()) throw UndefinedValueError("clustering of an empty network");
  const auto& adj = net.undirected().csr;
  const auto n = net.vertex_count();

  ClusteringResult r;
  r.triangle_edges.assign(n, 0);
  if (exec == Execution::parallel)
    triangles_parallel(adj, r.triangle_edges);
  else
    triangles_serial(adj, r.triangle_edges);

  r.degrees.resize(n);
  r.per_vertex.resize(n);
  double sum = 0.0;
  for (VertexId v = 0; v < n; ++v) {
    r.degrees[v] = static_cast<std::uint32_t>(adj.degree(v));
    r.per_vertex[v] = local_coefficient(r.triangle_edges[v], r.degrees[v]);
    sum += r.per_vertex[v];
  }
  r.average = sum / static_cast<double>(n);
  r.random_baseline = n > 1 ? mean_degree(net) / static_cast<double>(n - 1) : 0.0;
  return r;
}

PathLengthEstimate average_path_length(const EmailNetwork& net, const PathOptions& opts,
                                       Execution exec) {
  if (net.empty()) throw UndefinedValueError("path length of an empty network");
  auto giant = giant_component(net);
  const auto size = giant.size();
  if (size < 2) throw UndefinedValueError("giant component has fewer than 2 vertices");

  std::vector<VertexId> roots;
  bool exact = false;
  if (opts.kind == PathOptions::Kind::exact) {
    if (size > opts.exact_limit && !opts.force)
      throw UsageError("exact path length refused: giant component has " + std::to_string(size) +
                       " vertices (limit " + std::to_string(opts.exact_limit) +
                       "); use sampled mode or force");
    roots = giant;
    exact = true;
  } else {
    if (opts.sources == 0) throw UsageError("sampled path length needs at least one source");
    if (opts.sources >= size) {
      roots = giant;
      exact = true;
    } else {
      // partial Fisher-Yates over the giant component
      std::mt19937_64 rng(opts.seed);
      auto pool = giant;
      for (std::size_t i = 0; i < opts.sources; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, size - 1);
        std::swap(pool[i], pool[pick(rng)]);
      }
      roots.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(opts.sources));
    }
  }

  const auto& adj = net.undirected().csr;
  const auto n = net.vertex_count();
  std::vector<std::uint64_t> sums(roots.size(), 0);
  if (exec == Execution::parallel) {
    const auto count = static_cast<std::int64_t>(roots.size());
#pragma omp parallel
    {
      std::vector<std::uint32_t> dist(n, unvisited);
      std::vector<VertexId> queue;
      queue.reserve(size);
#pragma omp for schedule(dynamic, 1)
      for (std::int64_t i = 0; i < count; ++i)
        sums[static_cast<std::size_t>(i)] =
            bfs_distance_sum(adj, roots[static_cast<std::size_t>(i)], dist, queue);
    }
  } else {
    std::vector<std::uint32_t> dist(n, unvisited);
    std::vector<VertexId> queue;
    for (std::size_t i = 0; i < roots.size(); ++i) sums[i] = bfs_distance_sum(adj, roots[i], dist, queue);
  }

  const auto total = std::accumulate(sums.begin(), sums.end(), std::uint64_t{0});
  PathLengthEstimate e;
  e.mean = static_cast<double>(total) /
           (static_cast<double>(roots.size()) * static_cast<double>(size - 1));
  e.sample_sources = roots.size();
  e.exact = exact;
  e.component_size = size;
  return e;
}

ComponentLabels connected_components(const UndirectedAdjacency& adj) {
  const auto n = adj.csr.vertex_count();
  std::vector<std::uint32_t> comp(n, unvisited);
  std::vector<VertexId> queue;
  std::uint32_t next = 0;
  for (VertexId s = 0; s < n; ++s) {
    if (comp[s] != unvisited) continue;
    comp[s] = next;
    queue.assign(1, s);
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (auto w : adj.csr.neighbors(queue[head]))
        if (comp[w] == unvisited) {
          comp[w] = next;
          queue.push_back(w);
        }
    ++next;
  }
  return {std::move(comp), next};
}

ComponentLabels strongly_connected_components(const Csr& out) {
  const auto n = out.vertex_count();
  std::vector<std::uint32_t> index(n, unvisited), low(n, 0), comp(n, unvisited);
  std::vector<std::uint8_t> on_stack(n, 0);
  std::vector<VertexId> stack;
  struct Frame {
    VertexId v;
    std::uint64_t pos;
  };
  std::vector<Frame> calls;
  std::uint32_t counter = 0, found = 0;

  auto open = [&](VertexId v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = 1;
    calls.push_back({v, out.offsets[v]});
  };

  for (VertexId root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    open(root);
    while (!calls.empty()) {
      auto& f = calls.back();
      const auto v = f.v;
      if (f.pos < out.offsets[v + 1]) {
        const auto w = out.targets[f.pos++];
        if (index[w] == unvisited)
          open(w);
        else if (on_stack[w])
          low[v] = std::min(low[v], index[w]);
        continue;
      }
      if (low[v] == index[v]) {
        VertexId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = found;
        } while (w != v);
        ++found;
      }
      calls.pop_back();
      if (!calls.empty()) {
        auto parent = calls.back().v;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return relabel_by_first_vertex(std::move(comp), found);
}

ComponentSummary components(const EmailNetwork& net, ComponentMode mode) {
  if (net.empty()) throw UndefinedValueError("components of an empty network");
  auto labels = mode == ComponentMode::directed_strong ? strongly_connected_components(net.out())
                                                       : connected_components(net.undirected());
  ComponentSummary s;
  s.mode = mode;
  s.sizes.assign(labels.count, 0);
  for (auto c : labels.component_of) ++s.sizes[c];
  std::sort(s.sizes.begin(), s.sizes.end(), std::greater<>());
  s.giant_fraction = static_cast<double>(s.sizes.front()) / static_cast<double>(net.vertex_count());
  s.second_largest = s.sizes.size() > 1 ? s.sizes[1] : 0;
  return s;
}

std::vector<std::pair<std::size_t, double>> component_size_histogram(const ComponentSummary& s) {
  std::map<std::size_t, std::size_t> vertices_at;
  std::size_t total = 0;
  for (auto size : s.sizes) {
    vertices_at[size] += size;
    total += size;
  }
  std::vector<std::pair<std::size_t, double>> rows;
  rows.reserve(vertices_at.size());
  for (auto [size, count] : vertices_at)
    rows.emplace_back(size, static_cast<double>(count) / static_cast<double>(total));
  return rows;
}

std::vector<VertexId> giant_component(const EmailNetwork& net) {
  auto labels = connected_components(net.undirected());
  std::vector<std::size_t> sizes(labels.count, 0);
  for (auto c : labels.component_of) ++sizes[c];
  if (sizes.empty()) return {};
  auto best = static_cast<std::uint32_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<VertexId> out;
  out.reserve(sizes[best]);
  for (VertexId v = 0; v < labels.component_of.size(); ++v)
    if (labels.component_of[v] == best) out.push_back(v);
  return out;
}

}  // namespace emailnet

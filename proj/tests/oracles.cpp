#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace oracle {

using emailnet::Edge;
using emailnet::EmailNetwork;

EmailNetwork make_network(emailnet::Directedness d, std::size_t n, const std::vector<Pair>& edges,
                          emailnet::LabelMask labels) {
  const auto width = std::to_string(n == 0 ? 0 : n - 1).size();
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto s = std::to_string(i);
    names[i] = std::string(width - s.size(), '0') + s;
  }
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (auto [a, b] : edges) es.push_back({a, b, labels, 0});
  return EmailNetwork(d, std::move(names), std::move(es));
}

std::vector<Pair> random_digraph(std::size_t n, double p, std::mt19937_64& rng, bool self_loops) {
  std::bernoulli_distribution coin(p);
  std::vector<Pair> out;
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      if ((a != b || self_loops) && coin(rng)) out.emplace_back(a, b);
  return out;
}

namespace {

std::vector<std::uint32_t> relabel_by_smallest(const std::vector<std::uint32_t>& rep) {
  // rep[v] is any representative shared by v's class
  std::vector<std::uint32_t> label(rep.size());
  std::vector<std::int64_t> seen(rep.size(), -1);
  std::uint32_t next = 0;
  for (std::size_t v = 0; v < rep.size(); ++v) {
    if (seen[rep[v]] < 0) seen[rep[v]] = next++;
    label[v] = static_cast<std::uint32_t>(seen[rep[v]]);
  }
  return label;
}

}  // namespace

std::vector<std::uint32_t> scc_by_closure(std::size_t n, const std::vector<Pair>& edges) {
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (std::size_t v = 0; v < n; ++v) reach[v][v] = 1;
  for (auto [a, b] : edges) reach[a][b] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = 1;
  std::vector<std::uint32_t> rep(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t u = 0;
    while (!(reach[v][u] && reach[u][v])) ++u;
    rep[v] = static_cast<std::uint32_t>(u);
  }
  return relabel_by_smallest(rep);
}

std::vector<std::uint32_t> components_by_relaxation(std::size_t n, const std::vector<Pair>& edges) {
  std::vector<std::uint32_t> rep(n);
  std::iota(rep.begin(), rep.end(), 0u);
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto [a, b] : edges) {
      auto m = std::min(rep[a], rep[b]);
      if (rep[a] != m || rep[b] != m) {
        rep[a] = rep[b] = m;
        changed = true;
      }
    }
  }
  return relabel_by_smallest(rep);
}

double mean_path_floyd(std::size_t n, const std::vector<Pair>& edges) {
  constexpr auto inf = std::numeric_limits<std::uint32_t>::max() / 4;
  std::vector<std::vector<std::uint32_t>> d(n, std::vector<std::uint32_t>(n, inf));
  for (std::size_t v = 0; v < n; ++v) d[v][v] = 0;
  for (auto [a, b] : edges)
    if (a != b) d[a][b] = d[b][a] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];

  auto comp = components_by_relaxation(n, edges);
  std::vector<std::size_t> size(n, 0);
  for (auto c : comp) ++size[c];
  const auto giant = static_cast<std::uint32_t>(std::max_element(size.begin(), size.end()) - size.begin());
  double sum = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && comp[i] == giant && comp[j] == giant) {
        sum += d[i][j];
        pairs += 1.0;
      }
  return sum / pairs;
}

LocalClustering clustering_by_enumeration(std::size_t n, const std::vector<Pair>& edges) {
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (auto [a, b] : edges)
    if (a != b) adj[a][b] = adj[b][a] = 1;
  LocalClustering r;
  r.links_among_neighbors.assign(n, 0);
  r.degree.assign(n, 0);
  double total = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::size_t> nb;
    for (std::size_t u = 0; u < n; ++u)
      if (adj[v][u]) nb.push_back(u);
    r.degree[v] = static_cast<std::uint32_t>(nb.size());
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j)
        if (adj[nb[i]][nb[j]]) ++r.links_among_neighbors[v];
    const double k = static_cast<double>(nb.size());
    if (nb.size() >= 2) total += 2.0 * static_cast<double>(r.links_among_neighbors[v]) / (k * (k - 1));
  }
  r.average = n ? total / static_cast<double>(n) : 0.0;
  return r;
}

PowerLawSampler::PowerLawSampler(double gamma, std::uint64_t k_min, std::uint64_t table_end)
    : gamma_(gamma), k_min_(k_min) {
  double acc = 0.0;
  cdf_.reserve(table_end - k_min + 1);
  for (std::uint64_t k = k_min; k <= table_end; ++k) {
    acc += std::pow(static_cast<double>(k), -gamma);
    cdf_.push_back(acc);
  }
  // mass above table_end approximated by the integral from table_end + 1/2
  const double tail = std::pow(static_cast<double>(table_end) + 0.5, 1.0 - gamma) / (gamma - 1.0);
  total_ = acc + tail;
}

std::uint64_t PowerLawSampler::operator()(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng) * total_;
  if (u < cdf_.back()) {
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return k_min_ + static_cast<std::uint64_t>(it - cdf_.begin());
  }
  const double start = static_cast<double>(k_min_ + cdf_.size() - 1) + 0.5;
  const double x = start * std::pow(1.0 - unit(rng), -1.0 / (gamma_ - 1.0));
  return static_cast<std::uint64_t>(std::llround(x));
}

std::vector<std::uint64_t> power_law_samples(double gamma, std::uint64_t k_min, std::size_t n,
                                             std::uint64_t seed) {
  PowerLawSampler draw(gamma, k_min);
  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> out(n);
  for (auto& k : out) k = draw(rng);
  return out;
}

std::vector<std::uint64_t> geometric_samples(double p, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::geometric_distribution<std::uint64_t> g(p);
  std::vector<std::uint64_t> out(n);
  for (auto& k : out) k = 1 + g(rng);
  return out;
}

std::filesystem::path scratch_dir(const std::string& tag) {
  static std::uint64_t counter = 0;
  std::random_device rd;
  auto dir = std::filesystem::temp_directory_path() /
             ("emailnet_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace oracle

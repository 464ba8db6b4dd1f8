#pragma once

// Brute-force and independently derived references for the tests. Nothing
// here calls into the library's metric or fitting code.

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "emailnet/network.hpp"

namespace oracle {

using Pair = std::pair<std::uint32_t, std::uint32_t>;

// Network over vertices "000".."n-1" (zero padded), so id i is vertex i.
emailnet::EmailNetwork make_network(emailnet::Directedness d, std::size_t n,
                                    const std::vector<Pair>& edges,
                                    emailnet::LabelMask labels = emailnet::label_ham);

std::vector<Pair> random_digraph(std::size_t n, double p, std::mt19937_64& rng,
                                 bool self_loops = false);

// SCC partition from the reachability matrix; components labeled in order of
// their smallest vertex.
std::vector<std::uint32_t> scc_by_closure(std::size_t n, const std::vector<Pair>& edges);

// Connected-component labels by repeated relaxation, same labeling rule.
std::vector<std::uint32_t> components_by_relaxation(std::size_t n, const std::vector<Pair>& edges);

// Mean distance over ordered pairs of the largest connected component, by
// Floyd-Warshall. Self-loops are ignored.
double mean_path_floyd(std::size_t n, const std::vector<Pair>& undirected_edges);

struct LocalClustering {
  std::vector<std::uint64_t> links_among_neighbors;
  std::vector<std::uint32_t> degree;
  double average = 0.0;
};
// Adjacency-matrix triangle enumeration.
LocalClustering clustering_by_enumeration(std::size_t n, const std::vector<Pair>& undirected_edges);

// Discrete power law on k >= k_min: explicit CDF table up to `table_end`,
// beyond that a continuous tail with the same remaining mass.
class PowerLawSampler {
 public:
  PowerLawSampler(double gamma, std::uint64_t k_min, std::uint64_t table_end = 1'000'000);
  std::uint64_t operator()(std::mt19937_64& rng) const;

 private:
  double gamma_;
  std::uint64_t k_min_;
  std::vector<double> cdf_;  // unnormalized, cdf_[i] = sum_{k_min}^{k_min+i}
  double total_;
};

std::vector<std::uint64_t> power_law_samples(double gamma, std::uint64_t k_min, std::size_t n,
                                             std::uint64_t seed);
// 1 + Geometric(p): support k >= 1.
std::vector<std::uint64_t> geometric_samples(double p, std::size_t n, std::uint64_t seed);

// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& tag);

std::string slurp(const std::filesystem::path& p);

}  // namespace oracle

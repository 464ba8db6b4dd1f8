#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "emailnet/network.hpp"

namespace emailnet {

enum class DegreeFlavor { undirected, in, out };
std::string_view to_string(DegreeFlavor f);

struct HistogramRow {
  std::uint64_t k = 0;
  std::uint64_t count = 0;
  double fraction = 0.0;
  bool operator==(const HistogramRow&) const = default;
};

// n(k): fraction of vertices with degree k. Rows sorted by k, degree-0 rows kept.
struct DegreeHistogram {
  DegreeFlavor flavor = DegreeFlavor::undirected;
  std::vector<HistogramRow> rows;
  std::uint64_t total_vertices = 0;
  bool operator==(const DegreeHistogram&) const = default;
};

// in/out flavors need a directed network (UsageError otherwise).
DegreeHistogram degree_histogram(const EmailNetwork& net, DegreeFlavor flavor);
DegreeHistogram histogram_from_degrees(std::span<const std::uint64_t> degrees,
                                       DegreeFlavor flavor = DegreeFlavor::undirected);
DegreeHistogram histogram_from_counts(std::vector<std::pair<std::uint64_t, std::uint64_t>> k_count,
                                      DegreeFlavor flavor = DegreeFlavor::undirected);

enum class FitMethod { mle, logbin_ls };
std::string_view to_string(FitMethod m);

struct KminPolicy {
  enum class Kind { fixed, scan };
  Kind kind = Kind::scan;
  std::uint64_t k = 1;
  // Scan skips cutoffs leaving less than this fraction of the k >= 1 vertices
  // in the tail; tiny tails give spuriously small KS distances.
  double min_tail_fraction = 0.01;

  static KminPolicy fixed(std::uint64_t k) { return {Kind::fixed, k, 0.0}; }
  static KminPolicy scan() { return {}; }
};

struct PowerLawFit {
  double gamma = 0.0;
  std::uint64_t k_min = 1;
  double ks_statistic = 1.0;
  double tail_fraction = 0.0;  // of all vertices, degree-0 ones included
  std::uint64_t tail_count = 0;
  FitMethod method = FitMethod::mle;
};

// Discrete power law p(k) = k^-gamma / zeta(gamma, k_min) on k >= k_min.
// MLE maximizes the zeta-normalized likelihood; logbin_ls regresses
// log n(k) on log k over log-binned tail rows. KS distance is always taken
// against the discrete model CDF. Throws FitImpossibleError when the tail
// has fewer than two distinct degrees.
PowerLawFit fit_power_law(const DegreeHistogram& hist, FitMethod method = FitMethod::mle,
                          KminPolicy policy = KminPolicy::scan());

// KS distance of the best scanned MLE fit.
double powerlaw_deviation(const DegreeHistogram& hist);

struct LogBin {
  double center = 0.0;         // geometric mean of the bin's first and last degree
  double mean_fraction = 0.0;  // n(k) averaged over the integers in the bin
};

// Geometric bins of width 10^(1/bins_per_decade) over k >= 1; empty bins
// are omitted. Throws UsageError when bins_per_decade == 0.
std::vector<LogBin> log_bin(const DegreeHistogram& hist, unsigned bins_per_decade,
                            std::uint64_t k_from = 1);

// Hurwitz zeta sum_{j>=0} (j + q)^-s for s > 1, q > 0.
double hurwitz_zeta(double s, double q);

// P(K <= k) for the discrete power law on k >= k_min.
double powerlaw_cdf(double gamma, std::uint64_t k_min, std::uint64_t k);

}  // namespace emailnet

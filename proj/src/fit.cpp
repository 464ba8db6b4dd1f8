#include "emailnet/fit.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_zeta.h>

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <map>

#include "emailnet/error.hpp"

namespace emailnet {

namespace {

constexpr double gamma_lo = 1.0 + 1e-6;
constexpr double gamma_hi = 15.0;

struct GslQuiet {
  GslQuiet() { gsl_set_error_handler_off(); }
};
const GslQuiet gsl_quiet;

struct Tail {
  std::span<const HistogramRow> rows;
  std::uint64_t n = 0;
  double log_sum = 0.0;
};

Tail tail_of(const DegreeHistogram& hist, std::uint64_t k_min) {
  auto first = std::lower_bound(hist.rows.begin(), hist.rows.end(), k_min,
                                [](const HistogramRow& r, std::uint64_t k) { return r.k < k; });
  Tail t;
  t.rows = {&*first, static_cast<std::size_t>(hist.rows.end() - first)};
  if (first == hist.rows.end()) t.rows = {};
  for (const auto& r : t.rows) {
    t.n += r.count;
    t.log_sum += static_cast<double>(r.count) * std::log(static_cast<double>(r.k));
  }
  return t;
}

double mle_gamma(const Tail& t, std::uint64_t k_min) {
  const double mean_log = t.log_sum / static_cast<double>(t.n);
  const double q = static_cast<double>(k_min);
  auto neg_ll = [&](double g) { return g * mean_log + std::log(hurwitz_zeta(g, q)); };
  auto [g, v] = boost::math::tools::brent_find_minima(neg_ll, gamma_lo, gamma_hi, 40);
  (void)v;
  return g;
}

double ks_distance(const Tail& t, double gamma, std::uint64_t k_min) {
  const double norm = hurwitz_zeta(gamma, static_cast<double>(k_min));
  const double n = static_cast<double>(t.n);
  double d = 0.0, cum = 0.0;
  for (const auto& r : t.rows) {
    // empirical CDF is flat on [previous k, r.k - 1]; check its right end
    if (r.k > k_min) {
      const double model_before = 1.0 - hurwitz_zeta(gamma, static_cast<double>(r.k)) / norm;
      d = std::max(d, std::abs(cum / n - model_before));
    }
    cum += static_cast<double>(r.count);
    const double model = 1.0 - hurwitz_zeta(gamma, static_cast<double>(r.k + 1)) / norm;
    d = std::max(d, std::abs(cum / n - model));
  }
  return d;
}

double logbin_gamma(const DegreeHistogram& hist, std::uint64_t k_min) {
  auto bins = log_bin(hist, 10, k_min);
  if (bins.size() < 2) throw FitImpossibleError("log-binned tail has fewer than two bins");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(bins.size());
  for (const auto& b : bins) {
    const double x = std::log10(b.center), y = std::log10(b.mean_fraction);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return std::clamp(-slope, gamma_lo, gamma_hi);
}

PowerLawFit fit_at(const DegreeHistogram& hist, FitMethod method, std::uint64_t k_min) {
  auto tail = tail_of(hist, k_min);
  if (tail.rows.size() < 2)
    throw FitImpossibleError("power-law fit needs at least two distinct degrees >= k_min");
  PowerLawFit f;
  f.method = method;
  f.k_min = k_min;
  f.gamma = method == FitMethod::mle ? mle_gamma(tail, k_min) : logbin_gamma(hist, k_min);
  f.ks_statistic = ks_distance(tail, f.gamma, k_min);
  f.tail_count = tail.n;
  f.tail_fraction = static_cast<double>(tail.n) / static_cast<double>(hist.total_vertices);
  return f;
}

}  // namespace

std::string_view to_string(DegreeFlavor f) {
  switch (f) {
    case DegreeFlavor::undirected: return "undirected";
    case DegreeFlavor::in: return "in";
    case DegreeFlavor::out: return "out";
  }
  return "undirected";
}

std::string_view to_string(FitMethod m) { return m == FitMethod::mle ? "mle" : "logbin_ls"; }

double hurwitz_zeta(double s, double q) {
  gsl_sf_result r;
  int status = gsl_sf_hzeta_e(s, q, &r);
  if (status == GSL_EUNDRFLW) return 0.0;
  if (status != GSL_SUCCESS) throw UsageError("hurwitz zeta undefined for these arguments");
  return r.val;
}

double powerlaw_cdf(double gamma, std::uint64_t k_min, std::uint64_t k) {
  if (k < k_min) return 0.0;
  return 1.0 - hurwitz_zeta(gamma, static_cast<double>(k + 1)) /
                   hurwitz_zeta(gamma, static_cast<double>(k_min));
}

DegreeHistogram histogram_from_counts(std::vector<std::pair<std::uint64_t, std::uint64_t>> k_count,
                                      DegreeFlavor flavor) {
  std::map<std::uint64_t, std::uint64_t> merged;
  for (auto [k, c] : k_count)
    if (c > 0) merged[k] += c;
  DegreeHistogram h;
  h.flavor = flavor;
  for (auto [k, c] : merged) h.total_vertices += c;
  for (auto [k, c] : merged)
    h.rows.push_back({k, c, static_cast<double>(c) / static_cast<double>(h.total_vertices)});
  return h;
}

DegreeHistogram histogram_from_degrees(std::span<const std::uint64_t> degrees, DegreeFlavor flavor) {
  std::vector<std::uint64_t> sorted(degrees.begin(), degrees.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::pair<std::uint64_t, std::uint64_t>> counts;
  for (auto k : sorted) {
    if (counts.empty() || counts.back().first != k)
      counts.emplace_back(k, 1);
    else
      ++counts.back().second;
  }
  return histogram_from_counts(std::move(counts), flavor);
}

DegreeHistogram degree_histogram(const EmailNetwork& net, DegreeFlavor flavor) {
  std::vector<std::uint64_t> deg(net.vertex_count());
  switch (flavor) {
    case DegreeFlavor::undirected:
      for (VertexId v = 0; v < deg.size(); ++v) deg[v] = net.undirected().degree(v);
      break;
    case DegreeFlavor::out:
      if (!net.directed()) throw UsageError("out-degree histogram requires a directed network");
      for (VertexId v = 0; v < deg.size(); ++v) deg[v] = net.out().degree(v);
      break;
    case DegreeFlavor::in:
      if (!net.directed()) throw UsageError("in-degree histogram requires a directed network");
      for (VertexId v = 0; v < deg.size(); ++v) deg[v] = net.in().degree(v);
      break;
  }
  return histogram_from_degrees(deg, flavor);
}

PowerLawFit fit_power_law(const DegreeHistogram& hist, FitMethod method, KminPolicy policy) {
  if (policy.kind == KminPolicy::Kind::fixed)
    return fit_at(hist, method, std::max<std::uint64_t>(policy.k, 1));

  std::vector<std::uint64_t> ks;
  std::uint64_t positive = 0;
  for (const auto& r : hist.rows)
    if (r.k >= 1) {
      ks.push_back(r.k);
      positive += r.count;
    }
  if (ks.size() < 2)
    throw FitImpossibleError("power-law fit needs at least two distinct degrees >= 1");

  // tail counts from the top, to apply the tail-size floor
  std::vector<std::uint64_t> tail_counts(hist.rows.size() + 1, 0);
  for (std::size_t i = hist.rows.size(); i-- > 0;)
    tail_counts[i] = tail_counts[i + 1] + hist.rows[i].count;
  const std::size_t offset = hist.rows.size() - ks.size();

  std::optional<PowerLawFit> best;
  for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
    const double frac =
        static_cast<double>(tail_counts[offset + i]) / static_cast<double>(positive);
    if (i > 0 && frac < policy.min_tail_fraction) break;
    auto f = fit_at(hist, method, ks[i]);
    if (!best || f.ks_statistic < best->ks_statistic) best = f;
  }
  return *best;
}

double powerlaw_deviation(const DegreeHistogram& hist) {
  return fit_power_law(hist, FitMethod::mle, KminPolicy::scan()).ks_statistic;
}

std::vector<LogBin> log_bin(const DegreeHistogram& hist, unsigned bins_per_decade,
                            std::uint64_t k_from) {
  if (bins_per_decade == 0) throw UsageError("bins_per_decade must be at least 1");
  const double b = bins_per_decade;
  auto bin_of = [&](std::uint64_t k) {
    return static_cast<std::int64_t>(std::floor(std::log10(static_cast<double>(k)) * b + 1e-9));
  };
  // smallest integer k >= 1 whose bin index is >= i
  auto first_integer = [&](std::int64_t i) {
    auto k = static_cast<std::uint64_t>(std::max(1.0, std::ceil(std::pow(10.0, i / b) - 1e-9)));
    while (k > 1 && bin_of(k - 1) >= i) --k;
    while (bin_of(k) < i) ++k;
    return k;
  };

  std::vector<LogBin> out;
  std::int64_t current = -1;
  double sum = 0.0;
  auto emit = [&] {
    if (current < 0) return;
    const auto lo = std::max(first_integer(current), std::max<std::uint64_t>(k_from, 1));
    const auto hi = first_integer(current + 1) - 1;
    out.push_back({std::sqrt(static_cast<double>(lo) * static_cast<double>(hi)),
                   sum / static_cast<double>(hi - lo + 1)});
  };
  for (const auto& r : hist.rows) {
    if (r.k < std::max<std::uint64_t>(k_from, 1) || r.count == 0) continue;
    auto i = bin_of(r.k);
    if (i != current) {
      emit();
      current = i;
      sum = 0.0;
    }
    sum += r.fraction;
  }
  emit();
  return out;
}

}  // namespace emailnet

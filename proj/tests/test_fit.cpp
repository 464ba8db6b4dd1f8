#include <cmath>
#include <numeric>

#include "doctest.h"
#include "emailnet/error.hpp"
#include "emailnet/fit.hpp"
#include "emailnet/synth.hpp"
#include "oracles.hpp"

using namespace emailnet;

namespace {

DegreeHistogram scaled(const DegreeHistogram& h, std::uint64_t c) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> kc;
  for (const auto& r : h.rows) kc.emplace_back(r.k, r.count * c);
  return histogram_from_counts(kc, h.flavor);
}

double brute_zeta(double s, double q) {
  double sum = 0.0;
  for (int j = 0; j < 2'000'000; ++j) sum += std::pow(j + q, -s);
  // tail by Euler-Maclaurin leading terms
  const double x = 2'000'000 + q;
  sum += std::pow(x, 1 - s) / (s - 1) + 0.5 * std::pow(x, -s);
  return sum;
}

}  // namespace

TEST_CASE("degree histograms of small graphs") {
  auto tri = oracle::make_network(Directedness::undirected, 3, {{0, 1}, {1, 2}, {0, 2}});
  auto h = degree_histogram(tri, DegreeFlavor::undirected);
  CHECK(h.rows == std::vector<HistogramRow>{{2, 3, 1.0}});

  auto star = oracle::make_network(Directedness::directed, 4, {{0, 1}, {0, 2}, {0, 3}});
  CHECK(degree_histogram(star, DegreeFlavor::out).rows ==
        std::vector<HistogramRow>{{0, 3, 0.75}, {3, 1, 0.25}});
  CHECK(degree_histogram(star, DegreeFlavor::in).rows ==
        std::vector<HistogramRow>{{0, 1, 0.25}, {1, 3, 0.75}});
  CHECK_THROWS_AS(degree_histogram(tri, DegreeFlavor::in), UsageError);
}

TEST_CASE("histogram invariants on synthetic networks (property)") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    HamModelParams h;
    h.n_users = 2000;
    h.seed = seed;
    auto net = build_network(generate_ham(h, TimeWindow(0, 86400 * 3)));
    for (auto f : {DegreeFlavor::undirected, DegreeFlavor::in, DegreeFlavor::out}) {
      auto hist = degree_histogram(net, f);
      std::uint64_t total = 0;
      double frac = 0.0;
      for (std::size_t i = 0; i < hist.rows.size(); ++i) {
        total += hist.rows[i].count;
        frac += hist.rows[i].fraction;
        if (i) CHECK(hist.rows[i - 1].k < hist.rows[i].k);
      }
      CHECK(total == hist.total_vertices);
      CHECK(total == net.vertex_count());
      CHECK(std::abs(frac - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("hurwitz zeta and model cdf") {
  CHECK(hurwitz_zeta(2.0, 1.0) == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-12));
  CHECK(hurwitz_zeta(2.4, 3.0) == doctest::Approx(brute_zeta(2.4, 3.0)).epsilon(1e-9));
  CHECK(powerlaw_cdf(2.5, 2, 1) == 0.0);
  CHECK(powerlaw_cdf(2.0, 1, 1) == doctest::Approx(6.0 / (M_PI * M_PI)).epsilon(1e-12));
}

TEST_CASE("fit: recovers gamma = 2.4 from 1e5 samples") {
  auto s = oracle::power_law_samples(2.4, 1, 100'000, 42);
  auto h = histogram_from_degrees(s);
  auto f = fit_power_law(h, FitMethod::mle, KminPolicy::fixed(1));
  CHECK(f.gamma >= 2.3);
  CHECK(f.gamma <= 2.5);
  CHECK(f.ks_statistic < 0.02);
  CHECK(f.tail_fraction == 1.0);
  auto scan = fit_power_law(h);
  CHECK(scan.gamma == doctest::Approx(2.4).epsilon(0.05));
  CHECK(powerlaw_deviation(h) < 0.02);
  CHECK(powerlaw_deviation(h) == scan.ks_statistic);
}

TEST_CASE("fit: k_min > 1") {
  auto s = oracle::power_law_samples(2.8, 5, 50'000, 3);
  auto f = fit_power_law(histogram_from_degrees(s), FitMethod::mle, KminPolicy::fixed(5));
  CHECK(f.gamma == doctest::Approx(2.8).epsilon(0.03));
  CHECK(f.k_min == 5);
}

TEST_CASE("fit: error shrinks with sample size") {
  double small = 0, large = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto f3 = fit_power_law(histogram_from_degrees(oracle::power_law_samples(2.4, 1, 1000, seed)),
                            FitMethod::mle, KminPolicy::fixed(1));
    auto f5 = fit_power_law(histogram_from_degrees(oracle::power_law_samples(2.4, 1, 100'000, seed + 100)),
                            FitMethod::mle, KminPolicy::fixed(1));
    small += std::abs(f3.gamma - 2.4);
    large += std::abs(f5.gamma - 2.4);
  }
  CHECK(large < small);
}

TEST_CASE("fit: degenerate histograms") {
  auto ring = oracle::make_network(Directedness::undirected, 4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  CHECK_THROWS_AS(fit_power_law(degree_histogram(ring, DegreeFlavor::undirected)), FitImpossibleError);
  CHECK_THROWS_AS(fit_power_law(histogram_from_counts({{0, 4}, {3, 1}})), FitImpossibleError);
  auto two = histogram_from_counts({{1, 1}, {2, 1}});
  double d = powerlaw_deviation(two);
  CHECK(std::isfinite(d));
  CHECK(d >= 0.0);
  CHECK(d <= 1.0);
}

TEST_CASE("fit: geometric tail scores worse than a power law") {
  auto pl = powerlaw_deviation(histogram_from_degrees(oracle::power_law_samples(2.4, 1, 100'000, 5)));
  auto geo = powerlaw_deviation(histogram_from_degrees(oracle::geometric_samples(0.2, 100'000, 5)));
  CHECK(geo > pl);
}

TEST_CASE("fit: scale invariance in the counts (property)") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto h = histogram_from_degrees(oracle::power_law_samples(2.0 + 0.2 * seed, 1, 5000, seed));
    for (auto method : {FitMethod::mle, FitMethod::logbin_ls}) {
      auto a = fit_power_law(h, method);
      auto b = fit_power_law(scaled(h, 7), method);
      CHECK(b.gamma == doctest::Approx(a.gamma).epsilon(1e-6));
      CHECK(b.ks_statistic == doctest::Approx(a.ks_statistic).epsilon(1e-9));
      CHECK(b.k_min == a.k_min);
    }
  }
}

TEST_CASE("fit: degree-0 rows are ignored") {
  auto h = histogram_from_degrees(oracle::power_law_samples(2.4, 1, 20'000, 9));
  auto with_zero = h;
  auto kc = std::vector<std::pair<std::uint64_t, std::uint64_t>>{{0, 5000}};
  for (const auto& r : h.rows) kc.emplace_back(r.k, r.count);
  with_zero = histogram_from_counts(kc);
  auto a = fit_power_law(h), b = fit_power_law(with_zero);
  CHECK(a.gamma == doctest::Approx(b.gamma).epsilon(1e-9));
  CHECK(a.ks_statistic == doctest::Approx(b.ks_statistic).epsilon(1e-9));
  CHECK(b.tail_fraction < a.tail_fraction);
}

TEST_CASE("fit: ks against an explicit model cdf") {
  auto h = histogram_from_counts({{1, 60}, {2, 25}, {3, 10}, {5, 5}});
  auto f = fit_power_law(h, FitMethod::mle, KminPolicy::fixed(1));
  double d = 0.0, cum = 0.0;
  for (std::uint64_t k = 1; k <= 5; ++k) {
    for (const auto& r : h.rows)
      if (r.k == k) cum += static_cast<double>(r.count);
    d = std::max(d, std::abs(cum / 100.0 - powerlaw_cdf(f.gamma, 1, k)));
  }
  CHECK(f.ks_statistic == doctest::Approx(d).epsilon(1e-12));
}

TEST_CASE("fit: logbin cross-check lands near the mle") {
  auto h = histogram_from_degrees(oracle::power_law_samples(2.4, 1, 100'000, 77));
  auto f = fit_power_law(h, FitMethod::logbin_ls, KminPolicy::fixed(1));
  CHECK(f.method == FitMethod::logbin_ls);
  CHECK(f.gamma == doctest::Approx(2.4).epsilon(0.1));
}

TEST_CASE("log binning") {
  CHECK(log_bin(histogram_from_counts({{7, 3}}), 10).size() == 1);

  std::vector<std::pair<std::uint64_t, std::uint64_t>> uni;
  for (std::uint64_t k = 1; k <= 10; ++k) uni.emplace_back(k, 1);
  auto bins = log_bin(histogram_from_counts(uni), 10);
  REQUIRE(bins.size() >= 2);
  for (std::size_t i = 1; i < bins.size(); ++i) CHECK(bins[i].center > bins[i - 1].center);
  CHECK(bins.front().center == 1.0);
  CHECK(bins.back().center == doctest::Approx(std::sqrt(10.0 * 12.0)));
  // the top bin [10, 12.6) also holds the empty degrees 11 and 12
  CHECK(bins.back().mean_fraction == doctest::Approx(0.1 / 3));

  // 1..12 ends on a bin edge: every bin averages to the per-degree fraction
  uni.emplace_back(11, 1);
  uni.emplace_back(12, 1);
  for (const auto& b : log_bin(histogram_from_counts(uni), 10)) CHECK(b.mean_fraction == doctest::Approx(1.0 / 12));

  CHECK_THROWS_AS(log_bin(histogram_from_counts(uni), 0), UsageError);
}

TEST_CASE("log binning: starting mid-bin averages over the covered degrees only") {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> uni;
  for (std::uint64_t k = 1; k <= 158; ++k) uni.emplace_back(k, 1);  // 158 closes the [100, 158.5) bin
  auto bins = log_bin(histogram_from_counts(uni), 5, 13);
  CHECK(bins.front().center == doctest::Approx(std::sqrt(13.0 * 15.0)));
  for (const auto& b : bins) CHECK(b.mean_fraction == doctest::Approx(1.0 / 158));
}

TEST_CASE("log binning: power-law bins are collinear in log-log") {
  // exact expected fractions, no sampling noise
  std::vector<std::pair<std::uint64_t, std::uint64_t>> kc;
  for (std::uint64_t k = 1; k <= 12'589; ++k)  // up to the edge 10^4.1 of the last bin
    kc.emplace_back(k, static_cast<std::uint64_t>(std::llround(1e12 * std::pow(static_cast<double>(k), -2.4))));
  auto bins = log_bin(histogram_from_counts(kc), 10);
  std::vector<double> x, y;
  for (const auto& b : bins) {
    x.push_back(std::log10(b.center));
    y.push_back(std::log10(b.mean_fraction));
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n, my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx;
  double worst = 0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(y[i] - (my + slope * (x[i] - mx))));
  CHECK(slope == doctest::Approx(-2.4).epsilon(0.03));
  CHECK(worst < 0.05);
}

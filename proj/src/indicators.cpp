#include "emailnet/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "emailnet/error.hpp"
#include "emailnet/fit.hpp"

namespace emailnet {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

FeatureVector extract_features(const EmailNetwork& net, const FeatureOptions& opts) {
  if (net.empty()) throw UndefinedValueError("features of an empty network");
  if (!net.directed()) throw UsageError("feature extraction needs a directed network");

  FeatureVector f;
  auto c = clustering(net, opts.exec);
  f.avg_clustering = c.average;
  f.random_baseline = c.random_baseline;
  f.clustering_vs_random = c.random_baseline > 0.0 ? c.average / c.random_baseline : 0.0;

  try {
    f.powerlaw_deviation_out = powerlaw_deviation(degree_histogram(net, DegreeFlavor::out));
  } catch (const FitImpossibleError&) {
    f.powerlaw_deviation_out = 1.0;
    f.out_fit_degenerate = true;
  }
  try {
    f.powerlaw_deviation_undirected =
        powerlaw_deviation(degree_histogram(net, DegreeFlavor::undirected));
  } catch (const FitImpossibleError&) {
    f.powerlaw_deviation_undirected = 1.0;
    f.undirected_fit_degenerate = true;
  }

  f.giant_fraction = components(net, ComponentMode::undirected_connected).giant_fraction;
  f.reciprocity = reciprocity(net);
  if (opts.paths) f.paths = average_path_length(net, *opts.paths, opts.exec);
  return f;
}

void IndicatorConfig::validate() const {
  for (double w : {weight_clustering, weight_deviation_out, weight_deviation_undirected,
                   weight_reciprocity})
    if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("weights must be finite and non-negative");
  if (weight_clustering + weight_deviation_out + weight_deviation_undirected + weight_reciprocity <= 0.0)
    throw ConfigError("at least one weight must be positive");
  if (!(clustering_ratio_social > 1.0)) throw ConfigError("clustering_ratio_social must exceed 1");
  if (!(deviation_low >= 0.0 && deviation_low < deviation_high && deviation_high <= 1.0))
    throw ConfigError("need 0 <= deviation_low < deviation_high <= 1");
  if (!(reciprocity_social > 0.0 && reciprocity_social <= 1.0))
    throw ConfigError("reciprocity_social must lie in (0,1]");
  if (!(decision_threshold >= 0.0 && decision_threshold <= 1.0))
    throw ConfigError("decision_threshold must lie in [0,1]");
}

IndicatorConfig IndicatorConfig::from(const KeyValues& kv) { return from(kv, IndicatorConfig{}); }

IndicatorConfig IndicatorConfig::from(const KeyValues& kv, IndicatorConfig c) {
  kv.require_known({"weight_clustering", "weight_deviation_out", "weight_deviation_undirected",
                    "weight_reciprocity", "clustering_ratio_social", "deviation_low",
                    "deviation_high", "reciprocity_social", "decision_threshold"});
  c.weight_clustering = kv.get_double("weight_clustering", c.weight_clustering);
  c.weight_deviation_out = kv.get_double("weight_deviation_out", c.weight_deviation_out);
  c.weight_deviation_undirected =
      kv.get_double("weight_deviation_undirected", c.weight_deviation_undirected);
  c.weight_reciprocity = kv.get_double("weight_reciprocity", c.weight_reciprocity);
  c.clustering_ratio_social = kv.get_double("clustering_ratio_social", c.clustering_ratio_social);
  c.deviation_low = kv.get_double("deviation_low", c.deviation_low);
  c.deviation_high = kv.get_double("deviation_high", c.deviation_high);
  c.reciprocity_social = kv.get_double("reciprocity_social", c.reciprocity_social);
  c.decision_threshold = kv.get_double("decision_threshold", c.decision_threshold);
  c.validate();
  return c;
}

KeyValues IndicatorConfig::to_key_values() const {
  KeyValues kv;
  kv.set("weight_clustering", format_double(weight_clustering));
  kv.set("weight_deviation_out", format_double(weight_deviation_out));
  kv.set("weight_deviation_undirected", format_double(weight_deviation_undirected));
  kv.set("weight_reciprocity", format_double(weight_reciprocity));
  kv.set("clustering_ratio_social", format_double(clustering_ratio_social));
  kv.set("deviation_low", format_double(deviation_low));
  kv.set("deviation_high", format_double(deviation_high));
  kv.set("reciprocity_social", format_double(reciprocity_social));
  kv.set("decision_threshold", format_double(decision_threshold));
  return kv;
}

std::string_view to_string(Verdict v) { return v == Verdict::social ? "social" : "non_social"; }

double spam_score(const FeatureVector& f, const IndicatorConfig& cfg) {
  cfg.validate();
  double clustering_part = 1.0;
  if (f.avg_clustering > 0.0 && f.random_baseline > 0.0) {
    const double ratio = f.avg_clustering / f.random_baseline;
    clustering_part = 1.0 - clamp01(std::log10(ratio) / std::log10(cfg.clustering_ratio_social));
  }
  const double span = cfg.deviation_high - cfg.deviation_low;
  const double out_part = clamp01((f.powerlaw_deviation_out - cfg.deviation_low) / span);
  const double und_part = clamp01((f.powerlaw_deviation_undirected - cfg.deviation_low) / span);
  const double recip_part = 1.0 - clamp01(f.reciprocity / cfg.reciprocity_social);

  const double total = cfg.weight_clustering + cfg.weight_deviation_out +
                       cfg.weight_deviation_undirected + cfg.weight_reciprocity;
  const double score = (cfg.weight_clustering * clustering_part + cfg.weight_deviation_out * out_part +
                        cfg.weight_deviation_undirected * und_part +
                        cfg.weight_reciprocity * recip_part) /
                       total;
  return clamp01(score);
}

IndicatorReport evaluate(const FeatureVector& f, const IndicatorConfig& cfg) {
  IndicatorReport r;
  r.features = f;
  r.spam_score = spam_score(f, cfg);
  r.verdict = r.spam_score >= cfg.decision_threshold ? Verdict::non_social : Verdict::social;
  r.thresholds_used = cfg;
  return r;
}

std::optional<double> safe_ratio(double a, double b) {
  if (b != 0.0) return a / b;
  if (a == 0.0) return 1.0;
  return std::nullopt;
}

std::vector<FeatureDiff> compare_networks(const FeatureVector& a, const FeatureVector& b) {
  std::vector<FeatureDiff> rows;
  auto add = [&](const char* name, double x, double y) {
    rows.push_back({name, x, y, safe_ratio(x, y), x - y});
  };
  add("avg_clustering", a.avg_clustering, b.avg_clustering);
  add("clustering_vs_random", a.clustering_vs_random, b.clustering_vs_random);
  add("powerlaw_deviation_out", a.powerlaw_deviation_out, b.powerlaw_deviation_out);
  add("powerlaw_deviation_undirected", a.powerlaw_deviation_undirected,
      b.powerlaw_deviation_undirected);
  add("giant_fraction", a.giant_fraction, b.giant_fraction);
  add("reciprocity", a.reciprocity, b.reciprocity);
  return rows;
}

}  // namespace emailnet

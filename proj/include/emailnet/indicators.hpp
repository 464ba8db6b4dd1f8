#pragma once

#include <optional>
#include <string>
#include <vector>

#include "emailnet/config.hpp"
#include "emailnet/metrics.hpp"
#include "emailnet/network.hpp"

namespace emailnet {

struct FeatureVector {
  double avg_clustering = 0.0;
  double random_baseline = 0.0;        // <k>/(|V|-1) of the same network
  double clustering_vs_random = 0.0;   // avg_clustering / random_baseline, 0 when undefined
  double powerlaw_deviation_out = 1.0;
  double powerlaw_deviation_undirected = 1.0;
  double giant_fraction = 0.0;
  double reciprocity = 0.0;
  // Set when the histogram could not be fitted; the deviation is then 1.
  bool out_fit_degenerate = false;
  bool undirected_fit_degenerate = false;
  std::optional<PathLengthEstimate> paths;
};

struct FeatureOptions {
  std::optional<PathOptions> paths;  // off by default: too costly on large networks
  Execution exec = Execution::parallel;
};

// Needs a non-empty directed network (UndefinedValueError / UsageError).
FeatureVector extract_features(const EmailNetwork& net, const FeatureOptions& opts = {});

// Weights and cut points of the spam score. Each feature maps to a partial
// score in [0,1] (0 = social, 1 = non-social):
//   clustering   1 - clamp(log10(C / C_rand) / log10(clustering_ratio_social))
//   deviation    clamp((D - deviation_low) / (deviation_high - deviation_low))
//   reciprocity  1 - clamp(r / reciprocity_social)
// and the score is their weighted mean. Defaults are calibrated on the
// synthetic traffic models only.
struct IndicatorConfig {
  double weight_clustering = 1.0;
  double weight_deviation_out = 1.0;
  double weight_deviation_undirected = 0.5;
  double weight_reciprocity = 1.0;
  double clustering_ratio_social = 10.0;
  double deviation_low = 0.03;
  double deviation_high = 0.25;
  double reciprocity_social = 0.2;
  double decision_threshold = 0.5;

  void validate() const;  // ConfigError
  static IndicatorConfig from(const KeyValues& kv);
  static IndicatorConfig from(const KeyValues& kv, IndicatorConfig base);
  KeyValues to_key_values() const;
};

enum class Verdict { social, non_social };
std::string_view to_string(Verdict v);

struct IndicatorReport {
  FeatureVector features;
  double spam_score = 0.0;
  Verdict verdict = Verdict::social;
  IndicatorConfig thresholds_used;
};

double spam_score(const FeatureVector& f, const IndicatorConfig& cfg = {});
IndicatorReport evaluate(const FeatureVector& f, const IndicatorConfig& cfg = {});

struct FeatureDiff {
  std::string feature;
  double a = 0.0;
  double b = 0.0;
  std::optional<double> ratio;  // a / b; empty when b == 0 and a != 0
  double difference = 0.0;      // a - b
};

// Fixed feature order: clustering, clustering_vs_random, deviations,
// giant_fraction, reciprocity.
std::vector<FeatureDiff> compare_networks(const FeatureVector& a, const FeatureVector& b);
std::optional<double> safe_ratio(double a, double b);

}  // namespace emailnet

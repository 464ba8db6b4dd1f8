#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emailnet/fit.hpp"
#include "emailnet/indicators.hpp"
#include "emailnet/ingest.hpp"
#include "emailnet/metrics.hpp"
#include "emailnet/network.hpp"
#include "json.hpp"

namespace emailnet {

inline constexpr int report_schema_version = 1;

// `all`, `day=<n>`, `day=<n>,<h0>h-<h1>h`, or `<start>..<end>` (epoch seconds).
struct WindowSpec {
  enum class Kind { all, day, range };
  Kind kind = Kind::all;
  int day = 0;
  int hour_from = 0;
  int hour_to = 24;
  Timestamp start = 0;
  Timestamp end = 0;
  std::string text = "all";
};

WindowSpec parse_window_spec(std::string_view text);  // UsageError

// Days are numbered from 1, starting at the local midnight (UTC shifted by
// tz_offset_seconds) on or before the earliest event. Throws
// UndefinedValueError when `all` or `day=` is resolved against no events.
TimeWindow resolve_window(const WindowSpec& spec, std::span<const EmailEvent> events,
                          std::int64_t tz_offset_seconds = 0);

struct NetworkStats {
  std::size_t vertices = 0;
  std::size_t edges_directed = 0;
  std::size_t edges_undirected = 0;
  std::optional<double> mean_degree;
  std::size_t self_loops = 0;
};

NetworkStats network_stats(const EmailNetwork& net);

struct AnalysisOptions {
  std::vector<Selector> selectors{Selector::all};
  std::optional<PathOptions> paths;
  IndicatorConfig indicators;
  bool temporal = false;
};

// Builds the window's network, analyzes every requested selector and writes
// the CSV tables into `csv_dir` (skipped when empty). Throws
// UndefinedValueError("empty selection ...") when a requested selector
// yields no edges.
nlohmann::json analyze_window(std::span<const EmailEvent> events, const TimeWindow& window,
                              const std::string& window_tag, const AnalysisOptions& opts,
                              const std::filesystem::path& csv_dir);

// Per-day and cumulative structure for every requested selector over
// `days` consecutive days starting at `first_day_start`; writes
// `<selector>_temporal.csv` and returns the same rows as JSON.
nlohmann::json temporal_growth(std::span<const EmailEvent> events, Timestamp first_day_start,
                               int days, const AnalysisOptions& opts,
                               const std::filesystem::path& csv_dir);

// Sorted keys, two-space indent, trailing newline.
std::string render_report(const nlohmann::json& report);

// temp file + rename in the same directory; IoError on failure.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string histogram_csv(const DegreeHistogram& hist);
DegreeHistogram parse_histogram_csv(std::istream& in, DegreeFlavor flavor);
std::string component_csv(const std::vector<std::pair<std::size_t, double>>& rows);

nlohmann::json fit_json(const PowerLawFit& f);
nlohmann::json features_json(const FeatureVector& f);
FeatureVector features_from_json(const nlohmann::json& j);

}  // namespace emailnet

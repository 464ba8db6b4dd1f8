#include "emailnet/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "emailnet/error.hpp"

namespace emailnet {

using nlohmann::json;

namespace {

constexpr std::int64_t day_seconds = 86400;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  auto q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

template <class T>
std::optional<T> to_number(std::string_view s) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<int> parse_hour(std::string_view s) {
  if (!s.empty() && s.back() == 'h') s.remove_suffix(1);
  return to_number<int>(s);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

json optional_number(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

json component_json(const ComponentSummary& s) {
  return {{"count", s.sizes.size()},
          {"giant_size", s.giant_size()},
          {"giant_fraction", s.giant_fraction},
          {"second_largest", s.second_largest}};
}

json stats_json(const NetworkStats& s) {
  return {{"vertices", s.vertices},
          {"edges_directed", s.edges_directed},
          {"edges_undirected", s.edges_undirected},
          {"mean_degree", optional_number(s.mean_degree)},
          {"self_loops", s.self_loops}};
}

void write_csv(const std::filesystem::path& dir, const std::string& name, const std::string& body) {
  if (dir.empty()) return;
  write_file_atomic(dir / name, body);
}

}  // namespace

WindowSpec parse_window_spec(std::string_view text) {
  WindowSpec w;
  w.text = std::string(text);
  if (text == "all") return w;

  if (text.rfind("day=", 0) == 0) {
    w.kind = WindowSpec::Kind::day;
    auto rest = text.substr(4);
    auto comma = rest.find(',');
    auto day = to_number<int>(rest.substr(0, comma));
    if (!day || *day < 1) throw UsageError("bad day in window spec: " + w.text);
    w.day = *day;
    if (comma != std::string_view::npos) {
      auto hours = rest.substr(comma + 1);
      auto dash = hours.find('-');
      if (dash == std::string_view::npos) throw UsageError("bad hour range in window spec: " + w.text);
      auto from = parse_hour(hours.substr(0, dash));
      auto to = parse_hour(hours.substr(dash + 1));
      if (!from || !to || *from < 0 || *to > 24 || *from >= *to)
        throw UsageError("bad hour range in window spec: " + w.text);
      w.hour_from = *from;
      w.hour_to = *to;
    }
    return w;
  }

  auto dots = text.find("..");
  if (dots != std::string_view::npos) {
    auto a = to_number<Timestamp>(text.substr(0, dots));
    auto b = to_number<Timestamp>(text.substr(dots + 2));
    if (!a || !b || *a >= *b) throw UsageError("bad range in window spec: " + w.text);
    w.kind = WindowSpec::Kind::range;
    w.start = *a;
    w.end = *b;
    return w;
  }
  throw UsageError("window spec must be all, day=<n>[,<h0>h-<h1>h] or <start>..<end>: " + w.text);
}

TimeWindow resolve_window(const WindowSpec& spec, std::span<const EmailEvent> events,
                          std::int64_t tz_offset_seconds) {
  if (spec.kind == WindowSpec::Kind::range) return {spec.start, spec.end};
  if (events.empty()) throw UndefinedValueError("empty selection: no events to window");
  auto [lo, hi] = std::minmax_element(events.begin(), events.end(),
                                      [](const EmailEvent& a, const EmailEvent& b) {
                                        return a.timestamp < b.timestamp;
                                      });
  if (spec.kind == WindowSpec::Kind::all) return {lo->timestamp, hi->timestamp + 1};
  const auto first_midnight =
      floor_div(lo->timestamp + tz_offset_seconds, day_seconds) * day_seconds - tz_offset_seconds;
  const auto day_start = first_midnight + (spec.day - 1) * day_seconds;
  return {day_start + spec.hour_from * 3600, day_start + spec.hour_to * 3600};
}

NetworkStats network_stats(const EmailNetwork& net) {
  NetworkStats s;
  s.vertices = net.vertex_count();
  s.edges_directed = net.edge_count();
  s.edges_undirected = net.undirected_edge_count();
  if (!net.empty()) s.mean_degree = mean_degree(net);
  s.self_loops = net.self_loop_count();
  return s;
}

json fit_json(const PowerLawFit& f) {
  return {{"gamma", f.gamma},
          {"k_min", f.k_min},
          {"ks", f.ks_statistic},
          {"tail_fraction", f.tail_fraction},
          {"method", std::string(to_string(f.method))}};
}

json features_json(const FeatureVector& f) {
  json j = {{"avg_clustering", f.avg_clustering},
            {"random_baseline", f.random_baseline},
            {"clustering_vs_random", f.clustering_vs_random},
            {"powerlaw_deviation_out", f.powerlaw_deviation_out},
            {"powerlaw_deviation_undirected", f.powerlaw_deviation_undirected},
            {"giant_fraction", f.giant_fraction},
            {"reciprocity", f.reciprocity},
            {"out_fit_degenerate", f.out_fit_degenerate},
            {"undirected_fit_degenerate", f.undirected_fit_degenerate}};
  if (f.paths) j["avg_path_length"] = f.paths->mean;
  return j;
}

FeatureVector features_from_json(const json& j) {
  FeatureVector f;
  try {
    f.avg_clustering = j.at("avg_clustering").get<double>();
    f.random_baseline = j.at("random_baseline").get<double>();
    f.clustering_vs_random = j.at("clustering_vs_random").get<double>();
    f.powerlaw_deviation_out = j.at("powerlaw_deviation_out").get<double>();
    f.powerlaw_deviation_undirected = j.at("powerlaw_deviation_undirected").get<double>();
    f.giant_fraction = j.at("giant_fraction").get<double>();
    f.reciprocity = j.at("reciprocity").get<double>();
    f.out_fit_degenerate = j.value("out_fit_degenerate", false);
    f.undirected_fit_degenerate = j.value("undirected_fit_degenerate", false);
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed feature block in report: ") + e.what());
  }
  return f;
}

json analyze_window(std::span<const EmailEvent> events, const TimeWindow& window,
                    const std::string& window_tag, const AnalysisOptions& opts,
                    const std::filesystem::path& csv_dir) {
  const auto net = build_network(events, window);

  json report;
  report["schema_version"] = report_schema_version;
  report["window"] = {{"spec", window_tag},
                      {"start", window.start},
                      {"end", window.end},
                      {"hours", static_cast<double>(window.length()) / 3600.0}};

  json stats = json::array();
  for (auto sel : {Selector::all, Selector::ham, Selector::spam, Selector::rejected_plus_spam}) {
    auto row = stats_json(network_stats(subnetwork(net, sel)));
    row["selector"] = std::string(to_string(sel));
    row["window"] = window_tag;
    stats.push_back(std::move(row));
  }
  report["network_stats"] = std::move(stats);

  json selectors = json::object();
  for (auto sel : opts.selectors) {
    const std::string name(to_string(sel));
    const auto sub = subnetwork(net, sel);
    if (sub.edge_count() == 0)
      throw UndefinedValueError("empty selection: selector '" + name + "' has no edges in window " +
                                window_tag);

    json s;
    s["selector"] = name;
    s["window"] = window_tag;

    FeatureVector f;
    auto c = clustering(sub);
    f.avg_clustering = c.average;
    f.random_baseline = c.random_baseline;
    f.clustering_vs_random = c.random_baseline > 0.0 ? c.average / c.random_baseline : 0.0;
    s["clustering"] = {{"average", c.average},
                       {"random_baseline", c.random_baseline},
                       {"ratio_to_random", optional_number(safe_ratio(c.average, c.random_baseline))},
                       {"vertices", sub.vertex_count()}};

    auto cc = components(sub, ComponentMode::undirected_connected);
    auto scc = components(sub, ComponentMode::directed_strong);
    f.giant_fraction = cc.giant_fraction;
    s["components"] = {{"undirected_connected", component_json(cc)},
                       {"directed_strong", component_json(scc)}};
    write_csv(csv_dir, name + "_cc_sizes.csv", component_csv(component_size_histogram(cc)));
    write_csv(csv_dir, name + "_scc_sizes.csv", component_csv(component_size_histogram(scc)));

    json fits = json::object();
    for (auto flavor : {DegreeFlavor::undirected, DegreeFlavor::in, DegreeFlavor::out}) {
      const std::string fl(to_string(flavor));
      auto hist = degree_histogram(sub, flavor);
      write_csv(csv_dir, name + "_" + fl + "_degree.csv", histogram_csv(hist));
      json entry;
      try {
        auto mle = fit_power_law(hist, FitMethod::mle);
        entry["mle"] = fit_json(mle);
        if (flavor == DegreeFlavor::out) f.powerlaw_deviation_out = mle.ks_statistic;
        if (flavor == DegreeFlavor::undirected) f.powerlaw_deviation_undirected = mle.ks_statistic;
      } catch (const FitImpossibleError& e) {
        entry["mle"] = {{"error", e.what()}};
        if (flavor == DegreeFlavor::out) f.out_fit_degenerate = true;
        if (flavor == DegreeFlavor::undirected) f.undirected_fit_degenerate = true;
      }
      try {
        entry["logbin_ls"] = fit_json(fit_power_law(hist, FitMethod::logbin_ls));
      } catch (const FitImpossibleError& e) {
        entry["logbin_ls"] = {{"error", e.what()}};
      }
      fits[fl] = std::move(entry);
    }
    s["fits"] = std::move(fits);

    f.reciprocity = reciprocity(sub);
    if (opts.paths) {
      auto p = average_path_length(sub, *opts.paths);
      f.paths = p;
      s["paths"] = {{"mean", p.mean},
                    {"sample_sources", p.sample_sources},
                    {"exact", p.exact},
                    {"component_size", p.component_size}};
    }

    auto ind = evaluate(f, opts.indicators);
    json thresholds = json::object();
    const auto kv = opts.indicators.to_key_values();
    for (const auto& [k, v] : kv.values()) thresholds[k] = std::stod(v);
    s["indicators"] = {{"features", features_json(f)},
                       {"spam_score", ind.spam_score},
                       {"verdict", std::string(to_string(ind.verdict))},
                       {"thresholds", std::move(thresholds)}};
    selectors[name] = std::move(s);
  }
  report["selectors"] = std::move(selectors);
  return report;
}

json temporal_growth(std::span<const EmailEvent> events, Timestamp first_day_start, int days,
                     const AnalysisOptions& opts, const std::filesystem::path& csv_dir) {
  json out = json::object();
  std::map<std::string, std::string> csv;
  for (auto sel : opts.selectors)
    csv[std::string(to_string(sel))] =
        "day,vertices,edges,giant_fraction,cumulative_vertices,cumulative_edges,"
        "cumulative_giant_fraction\n";

  auto giant = [](const EmailNetwork& n) -> std::optional<double> {
    if (n.empty()) return std::nullopt;
    return components(n, ComponentMode::undirected_connected).giant_fraction;
  };
  auto cell = [](std::optional<double> v) { return v ? fmt(*v) : std::string(); };

  for (int d = 1; d <= days; ++d) {
    const auto day_start = first_day_start + (d - 1) * day_seconds;
    const auto daily = build_network(events, TimeWindow(day_start, day_start + day_seconds));
    const auto cumulative = build_network(events, TimeWindow(first_day_start, day_start + day_seconds));
    for (auto sel : opts.selectors) {
      const std::string name(to_string(sel));
      auto a = subnetwork(daily, sel);
      auto b = subnetwork(cumulative, sel);
      auto ga = giant(a), gb = giant(b);
      out[name].push_back({{"day", d},
                           {"vertices", a.vertex_count()},
                           {"edges", a.edge_count()},
                           {"giant_fraction", optional_number(ga)},
                           {"cumulative_vertices", b.vertex_count()},
                           {"cumulative_edges", b.edge_count()},
                           {"cumulative_giant_fraction", optional_number(gb)}});
      csv[name] += std::to_string(d) + "," + std::to_string(a.vertex_count()) + "," +
                   std::to_string(a.edge_count()) + "," + cell(ga) + "," +
                   std::to_string(b.vertex_count()) + "," + std::to_string(b.edge_count()) + "," +
                   cell(gb) + "\n";
    }
  }
  for (const auto& [name, body] : csv) write_csv(csv_dir, name + "_temporal.csv", body);
  return out;
}

std::string render_report(const json& report) { return report.dump(2) + "\n"; }

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place: " + path.string());
  }
}

std::string histogram_csv(const DegreeHistogram& hist) {
  std::string out = "k,count,fraction\n";
  for (const auto& r : hist.rows)
    out += std::to_string(r.k) + "," + std::to_string(r.count) + "," + fmt(r.fraction) + "\n";
  return out;
}

DegreeHistogram parse_histogram_csv(std::istream& in, DegreeFlavor flavor) {
  DegreeHistogram h;
  h.flavor = flavor;
  std::string line;
  if (!std::getline(in, line) || line != "k,count,fraction")
    throw UsageError("histogram CSV must start with k,count,fraction");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto c1 = line.find(','), c2 = line.rfind(',');
    if (c1 == std::string::npos || c1 == c2) throw UsageError("malformed histogram row: " + line);
    auto k = to_number<std::uint64_t>(std::string_view(line).substr(0, c1));
    auto count = to_number<std::uint64_t>(std::string_view(line).substr(c1 + 1, c2 - c1 - 1));
    if (!k || !count) throw UsageError("malformed histogram row: " + line);
    h.rows.push_back({*k, *count, std::stod(line.substr(c2 + 1))});
    h.total_vertices += *count;
  }
  return h;
}

std::string component_csv(const std::vector<std::pair<std::size_t, double>>& rows) {
  std::string out = "size,fraction\n";
  for (const auto& [size, frac] : rows) out += std::to_string(size) + "," + fmt(frac) + "\n";
  return out;
}

}  // namespace emailnet

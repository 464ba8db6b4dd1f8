#include "emailnet/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "emailnet/anonymize.hpp"
#include "emailnet/error.hpp"
#include "emailnet/report.hpp"
#include "emailnet/synth.hpp"

namespace emailnet::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr Timestamp default_synth_start = 1267401600;  // a Monday, 00:00 UTC

struct Globals {
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string output_dir = ".";
  bool show_config = false;
};

fs::path resolve_output(const Globals& g, const std::string& name) {
  fs::path p(name);
  if (p.is_absolute()) return p;
  return fs::path(g.output_dir) / p;
}

void ensure_dir(const fs::path& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string());
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

std::string read_all(const std::string& path) {
  auto in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<EmailEvent> load_events(const std::string& path, std::ostream& err) {
  auto in = open_input(path);
  auto parsed = parse_event_log(in);
  if (parsed.malformed > 0)
    err << "warning: " << parsed.malformed << " malformed event line(s) skipped in " << path << "\n";
  return std::move(parsed.events);
}

IndicatorConfig load_indicator_config(const std::string& path) {
  if (path.empty()) return {};
  return IndicatorConfig::from(KeyValues::load(path));
}

void print_config(const IndicatorConfig& cfg, std::ostream& out) {
  const auto kv = cfg.to_key_values();
  for (const auto& [k, v] : kv.values()) out << k << "=" << v << "\n";
}

// ---- ingest ---------------------------------------------------------------

struct IngestArgs {
  std::vector<std::string> inputs;
  std::string output = "events.tsv";
  std::string format = "auto";
  bool anonymize = false;
  std::string key_file;
  std::string key_env;
};

bool looks_like_event_log(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    return std::count(line.begin(), line.end(), '\t') == 4;
  }
  return false;
}

int cmd_ingest(const IngestArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  std::string key;
  if (a.anonymize) {
    if (!a.key_file.empty()) {
      key = read_all(a.key_file);
      while (!key.empty() && (key.back() == '\n' || key.back() == '\r')) key.pop_back();
    } else if (!a.key_env.empty()) {
      const char* v = std::getenv(a.key_env.c_str());
      if (v) key = v;
    }
    if (key.empty()) throw ConfigError("--anonymize needs a non-empty key via --key-file or --key-env");
  }

  std::size_t records = 0, sessions = 0, malformed = 0;
  ClassifyStats stats;
  std::vector<EmailEvent> events;
  for (const auto& path : a.inputs) {
    bool event_format = a.format == "events" || (a.format == "auto" && looks_like_event_log(path));
    auto in = open_input(path);
    if (event_format) {
      auto r = parse_event_log(in);
      records += r.records;
      malformed += r.malformed;
      stats.null_sender += r.null_sender;
      for (auto& e : r.events) {
        (e.status == Status::accepted ? stats.accepted : stats.rejected) += 1;
        events.push_back(std::move(e));
      }
    } else {
      auto r = parse_session_log(in);
      records += r.records;
      sessions += r.sessions.size();
      malformed += r.malformed;
      for (const auto& s : r.sessions) {
        auto evs = classify_session(s, &stats);
        events.insert(events.end(), std::make_move_iterator(evs.begin()),
                      std::make_move_iterator(evs.end()));
      }
    }
  }

  if (a.anonymize) {
    for (auto& e : events) {
      e.sender = emailnet::anonymize(e.sender, key).id;
      for (auto& r : e.recipients) r = emailnet::anonymize(r, key).id;
    }
  }

  std::ostringstream body;
  write_event_log(body, events);
  auto path = resolve_output(g, a.output);
  ensure_dir(path.parent_path());
  write_file_atomic(path, body.str());

  out << "records=" << records << " sessions=" << sessions << " malformed=" << malformed
      << " accepted=" << stats.accepted << " rejected=" << stats.rejected
      << " incomplete=" << stats.incomplete << " null_sender_skipped=" << stats.null_sender
      << " unlabeled=" << stats.unlabeled << " events=" << events.size() << "\n";
  if (malformed > 0) err << "warning: " << malformed << " malformed record(s) skipped\n";
  return 0;
}

// ---- synth ----------------------------------------------------------------

struct SynthArgs {
  std::string model;
  std::vector<std::string> params;
  std::string config;
  std::string output;
};

int cmd_synth(const SynthArgs& a, const Globals& g, std::ostream& out) {
  KeyValues kv;
  if (!a.config.empty()) kv = KeyValues::load(a.config);
  for (const auto& t : a.params) kv.set_token(t);
  if (g.seed) kv.set("seed", std::to_string(*g.seed));

  const bool ham = a.model == "ham" || a.model == "mix";
  const bool spam = a.model == "spam" || a.model == "mix";
  if (!ham && !spam) throw UsageError("synth model must be ham, spam or mix");
  if (a.model == "ham")
    kv.require_known({"n", "m", "reciprocity", "rate", "triad", "seed", "start", "days"});
  else if (a.model == "spam")
    kv.require_known({"spammers", "fanout", "pool", "reject", "campaign", "seed", "start", "days"});
  else
    kv.require_known({"n", "m", "reciprocity", "rate", "triad", "spammers", "fanout", "pool",
                      "reject", "campaign", "seed", "start", "days"});

  const auto start = kv.get_int("start", default_synth_start);
  const auto days = kv.get_uint("days", 7);
  if (days == 0) throw UsageError("days must be at least 1");
  const TimeWindow window(start, start + static_cast<Timestamp>(days) * 86400);
  const auto seed = kv.get_uint("seed", 1);

  std::vector<std::vector<EmailEvent>> streams;
  if (ham) {
    HamModelParams hp;
    hp.events_per_day = static_cast<double>(kv.get_uint("n", hp.n_users));
    hp = ham_params_from(kv, hp);
    streams.push_back(generate_ham(hp, window));
  }
  if (spam) streams.push_back(generate_spam(spam_params_from(kv), window));
  auto events = streams.size() == 1 ? std::move(streams.front()) : interleave(streams);

  std::ostringstream body;
  write_event_log(body, events);
  auto path = resolve_output(g, a.output.empty() ? "synth_" + a.model + ".tsv" : a.output);
  ensure_dir(path.parent_path());
  write_file_atomic(path, body.str());
  out << "seed=" << seed << " model=" << a.model << " events=" << events.size()
      << " output=" << path.string() << "\n";
  return 0;
}

// ---- analyze --------------------------------------------------------------

struct AnalyzeArgs {
  std::string input;
  std::vector<std::string> windows{"all"};
  std::vector<std::string> selectors{"all"};
  bool paths = false;
  std::size_t path_sources = 100;
  bool exact_paths = false;
  bool force = false;
  bool temporal = false;
  double tz_offset_hours = 0.0;
  std::string config;
  bool write_network = false;
};

int cmd_analyze(const AnalyzeArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  AnalysisOptions opts;
  opts.selectors.clear();
  for (const auto& s : a.selectors) {
    auto sel = parse_selector(s);
    if (!sel) throw UsageError("unknown selector '" + s + "'");
    if (std::find(opts.selectors.begin(), opts.selectors.end(), *sel) == opts.selectors.end())
      opts.selectors.push_back(*sel);
  }
  opts.indicators = load_indicator_config(a.config);
  const std::uint64_t seed = g.seed.value_or(1);
  if (a.exact_paths)
    opts.paths = PathOptions::exact_all(a.force);
  else if (a.paths)
    opts.paths = PathOptions::sampled(a.path_sources, seed);
  opts.temporal = a.temporal;
  const auto tz = static_cast<std::int64_t>(a.tz_offset_hours * 3600.0);

  std::vector<WindowSpec> specs;
  for (const auto& w : a.windows) specs.push_back(parse_window_spec(w));
  const auto events = load_events(a.input, err);

  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto window = resolve_window(specs[i], events, tz);
    const fs::path dir =
        specs.size() == 1 ? fs::path(g.output_dir) : fs::path(g.output_dir) / ("window_" + std::to_string(i + 1));
    ensure_dir(dir);

    auto report = analyze_window(events, window, specs[i].text, opts, dir);
    report["tz_offset_hours"] = a.tz_offset_hours;
    if (opts.paths) report["seed"] = seed;
    if (opts.temporal) {
      const auto first = resolve_window(parse_window_spec("day=1"), events, tz).start;
      const auto last = resolve_window(parse_window_spec("all"), events, tz).end;
      const int days = static_cast<int>((last - first + 86399) / 86400);
      report["temporal"] = temporal_growth(events, first, days, opts, dir);
    }
    if (a.write_network) {
      const auto net = build_network(events, window);
      std::ostringstream edges, names;
      write_network(edges, net);
      write_vertex_table(names, net);
      write_file_atomic(dir / "network.tsv", edges.str());
      write_file_atomic(dir / "vertices.tsv", names.str());
    }
    write_file_atomic(dir / "report.json", render_report(report));

    out << "window " << specs[i].text << " [" << window.start << ", " << window.end << ")\n";
    for (const auto& row : report["network_stats"]) {
      out << "  " << row["selector"].get<std::string>() << ": |V|=" << row["vertices"]
          << " |E|dir=" << row["edges_directed"] << " |E|undir=" << row["edges_undirected"]
          << " <k>=" << row["mean_degree"] << "\n";
    }
    for (const auto& [name, s] : report["selectors"].items()) {
      out << "  [" << name << "] C=" << s["clustering"]["average"]
          << " giant=" << s["components"]["undirected_connected"]["giant_fraction"]
          << " spam_score=" << s["indicators"]["spam_score"]
          << " verdict=" << s["indicators"]["verdict"].get<std::string>() << "\n";
    }
    out << "  report: " << (dir / "report.json").string() << "\n";
  }
  return 0;
}

// ---- compare --------------------------------------------------------------

struct CompareArgs {
  std::string a, b;
  std::string selector = "all";
  std::string selector_a, selector_b;
  bool as_json = false;
};

json load_report(const std::string& path) {
  auto text = read_all(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError("cannot parse report " + path + ": " + e.what());
  }
}

const json& selector_block(const json& report, const std::string& sel, const std::string& path) {
  if (!report.contains("selectors") || !report["selectors"].contains(sel))
    throw UsageError("report " + path + " has no selector '" + sel + "'");
  return report["selectors"][sel];
}

std::string cell(const std::optional<double>& v) {
  if (!v) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", *v);
  return buf;
}

int cmd_compare(const CompareArgs& c, std::ostream& out) {
  auto ra = load_report(c.a), rb = load_report(c.b);
  auto va = ra.value("schema_version", -1), vb = rb.value("schema_version", -1);
  if (va != vb || va != report_schema_version)
    throw UsageError("report schema mismatch: " + std::to_string(va) + " vs " + std::to_string(vb));
  const auto sa = c.selector_a.empty() ? c.selector : c.selector_a;
  const auto sb = c.selector_b.empty() ? c.selector : c.selector_b;
  const auto& ba = selector_block(ra, sa, c.a);
  const auto& bb = selector_block(rb, sb, c.b);

  auto rows = compare_networks(features_from_json(ba["indicators"]["features"]),
                               features_from_json(bb["indicators"]["features"]));
  const double score_a = ba["indicators"]["spam_score"], score_b = bb["indicators"]["spam_score"];
  rows.push_back({"spam_score", score_a, score_b, safe_ratio(score_a, score_b), score_a - score_b});
  auto vertices = [](const json& block) {
    return static_cast<double>(block["clustering"]["vertices"].get<std::size_t>());
  };
  rows.push_back({"vertices", vertices(ba), vertices(bb), safe_ratio(vertices(ba), vertices(bb)),
                  vertices(ba) - vertices(bb)});

  if (c.as_json) {
    json j = json::array();
    for (const auto& r : rows)
      j.push_back({{"feature", r.feature},
                   {"a", r.a},
                   {"b", r.b},
                   {"ratio", r.ratio ? json(*r.ratio) : json(nullptr)},
                   {"difference", r.difference}});
    out << j.dump(2) << "\n";
    return 0;
  }
  char line[256];
  std::snprintf(line, sizeof line, "%-31s %14s %14s %12s %14s\n", "feature", ("A:" + sa).c_str(),
                ("B:" + sb).c_str(), "ratio", "difference");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-31s %14.6g %14.6g %12s %14.6g\n", r.feature.c_str(), r.a,
                  r.b, cell(r.ratio).c_str(), r.difference);
    out << line;
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"emailnet: email social network reconstruction and analysis"};
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for sampling and synthesis");
  app.add_option("--threads", g.threads, "Worker threads for parallel kernels");
  app.add_option("--output-dir", g.output_dir, "Directory for outputs");
  app.add_flag("--show-config", g.show_config, "Print default indicator configuration");

  IngestArgs ia;
  auto* ingest = app.add_subcommand("ingest", "Parse SMTP session logs into an event file");
  ingest->add_option("inputs", ia.inputs, "Session or event log files")->required();
  ingest->add_option("-o,--output", ia.output, "Event file to write");
  ingest->add_option("--format", ia.format, "auto, session or events")
      ->check(CLI::IsMember({"auto", "session", "events"}));
  ingest->add_flag("--anonymize", ia.anonymize, "Replace addresses by keyed digests");
  ingest->add_option("--key-file", ia.key_file, "File holding the anonymization key");
  ingest->add_option("--key-env", ia.key_env, "Environment variable holding the key");

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic labeled event file");
  synth->add_option("model", sa.model, "ham, spam or mix")->required();
  synth->add_option("params", sa.params, "key=value model parameters");
  synth->add_option("--config", sa.config, "key=value parameter file");
  synth->add_option("-o,--output", sa.output, "Event file to write");

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "Build networks and write a JSON report with CSV tables");
  analyze->add_option("events", aa.input, "Event file")->required();
  analyze->add_option("-w,--window", aa.windows, "all | day=<n>[,<h0>h-<h1>h] | <start>..<end>");
  analyze->add_option("-s,--selector", aa.selectors, "all, ham, spam, rejected_plus_spam");
  analyze->add_flag("--paths", aa.paths, "Estimate average path length by sampled BFS");
  analyze->add_option("--path-sources", aa.path_sources, "BFS roots for sampled path length");
  analyze->add_flag("--exact-paths", aa.exact_paths, "All-source BFS path length");
  analyze->add_flag("--force", aa.force, "Allow exact paths above the size limit");
  analyze->add_flag("--temporal", aa.temporal, "Per-day and cumulative growth tables");
  analyze->add_option("--tz-offset", aa.tz_offset_hours, "Hours added to UTC for day boundaries");
  analyze->add_option("--config", aa.config, "Indicator key=value configuration");
  analyze->add_flag("--write-network", aa.write_network, "Also serialize the window's network");

  CompareArgs ca;
  auto* compare = app.add_subcommand("compare", "Side-by-side diff of two reports");
  compare->add_option("report_a", ca.a)->required();
  compare->add_option("report_b", ca.b)->required();
  compare->add_option("--selector", ca.selector, "Selector compared in both reports");
  compare->add_option("--selector-a", ca.selector_a);
  compare->add_option("--selector-b", ca.selector_b);
  compare->add_flag("--json", ca.as_json);

  std::string show_config_file;
  auto* show = app.add_subcommand("show-config", "Print the indicator configuration in effect");
  show->add_option("--config", show_config_file, "Configuration file to merge over defaults");

  std::vector<const char*> argv{"emailnet"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::usage);
  }

  try {
    set_thread_count(g.threads);
    if (g.show_config && app.get_subcommands().empty()) {
      print_config(IndicatorConfig{}, out);
      return 0;
    }
    if (*ingest) return cmd_ingest(ia, g, out, err);
    if (*synth) return cmd_synth(sa, g, out);
    if (*analyze) return cmd_analyze(aa, g, out, err);
    if (*compare) return cmd_compare(ca, out);
    if (*show) {
      print_config(load_indicator_config(show_config_file), out);
      return 0;
    }
    err << app.help();
    return static_cast<int>(ExitCode::usage);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::io);
  }
}

}  // namespace emailnet::cli

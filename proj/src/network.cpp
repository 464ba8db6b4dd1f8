#include "emailnet/network.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "emailnet/error.hpp"

namespace emailnet {

TimeWindow::TimeWindow(Timestamp s, Timestamp e) : start(s), end(e) {
  if (!(s < e)) throw UsageError("time window start must precede end");
}

namespace {

bool edge_less(const Edge& a, const Edge& b) {
  return a.src != b.src ? a.src < b.src : a.dst < b.dst;
}

Csr csr_from_sorted(std::size_t n, std::span<const Edge> edges) {
  Csr c;
  c.offsets.assign(n + 1, 0);
  c.targets.reserve(edges.size());
  for (const auto& e : edges) {
    ++c.offsets[e.src + 1];
    c.targets.push_back(e.dst);
  }
  std::partial_sum(c.offsets.begin(), c.offsets.end(), c.offsets.begin());
  return c;
}

Csr csr_transposed(std::size_t n, std::span<const Edge> edges) {
  Csr c;
  c.offsets.assign(n + 1, 0);
  for (const auto& e : edges) ++c.offsets[e.dst + 1];
  std::partial_sum(c.offsets.begin(), c.offsets.end(), c.offsets.begin());
  c.targets.resize(edges.size());
  std::vector<std::uint64_t> cursor(c.offsets.begin(), c.offsets.end() - 1);
  for (const auto& e : edges) c.targets[cursor[e.dst]++] = e.src;
  return c;
}

UndirectedAdjacency undirected_from(std::size_t n, std::span<const Edge> edges) {
  UndirectedAdjacency u;
  u.self_loop.assign(n, 0);
  std::vector<std::uint64_t> pairs;
  pairs.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.src == e.dst) {
      u.self_loop[e.src] = 1;
      continue;
    }
    auto a = std::min(e.src, e.dst), b = std::max(e.src, e.dst);
    pairs.push_back((std::uint64_t{a} << 32) | b);
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  auto& c = u.csr;
  c.offsets.assign(n + 1, 0);
  for (auto p : pairs) {
    ++c.offsets[(p >> 32) + 1];
    ++c.offsets[(p & 0xffffffffu) + 1];
  }
  std::partial_sum(c.offsets.begin(), c.offsets.end(), c.offsets.begin());
  c.targets.resize(2 * pairs.size());
  std::vector<std::uint64_t> cursor(c.offsets.begin(), c.offsets.end() - 1);
  // Pairs are sorted by (a, b), so every list receives its smaller
  // neighbors before its larger ones, in increasing order.
  for (auto p : pairs) {
    auto a = static_cast<VertexId>(p >> 32);
    auto b = static_cast<VertexId>(p & 0xffffffffu);
    c.targets[cursor[a]++] = b;
    c.targets[cursor[b]++] = a;
  }
  return u;
}

}  // namespace

EmailNetwork::EmailNetwork(Directedness d, std::vector<std::string> names,
                           std::vector<Edge> edges, std::size_t transmissions)
    : directedness_(d), transmissions_(transmissions) {
  const std::size_t n = names.size();
  if (n > std::numeric_limits<VertexId>::max()) throw UsageError("too many vertices");

  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{0});
  std::sort(order.begin(), order.end(),
            [&](VertexId a, VertexId b) { return names[a] < names[b]; });
  std::vector<VertexId> rank(n);
  names_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    rank[order[i]] = static_cast<VertexId>(i);
    if (i > 0 && names[order[i]] == names_.back())
      throw UsageError("duplicate vertex name: " + names[order[i]]);
    names_.push_back(std::move(names[order[i]]));
  }

  for (auto& e : edges) {
    if (e.src >= n || e.dst >= n) throw UsageError("edge endpoint out of range");
    e.src = rank[e.src];
    e.dst = rank[e.dst];
    if (!directed() && e.src > e.dst) std::swap(e.src, e.dst);
  }
  std::sort(edges.begin(), edges.end(), edge_less);
  for (const auto& e : edges) {
    if (!edges_.empty() && edges_.back().src == e.src && edges_.back().dst == e.dst) {
      edges_.back().labels |= e.labels;
      edges_.back().first_seen = std::min(edges_.back().first_seen, e.first_seen);
    } else {
      edges_.push_back(e);
    }
  }

  undirected_ = undirected_from(n, edges_);
  if (directed()) {
    out_ = csr_from_sorted(n, edges_);
    in_ = csr_transposed(n, edges_);
  }
}

std::size_t EmailNetwork::undirected_edge_count() const {
  return undirected_.csr.targets.size() / 2 + self_loop_count();
}

std::size_t EmailNetwork::self_loop_count() const {
  return static_cast<std::size_t>(
      std::count(undirected_.self_loop.begin(), undirected_.self_loop.end(), 1));
}

std::optional<VertexId> EmailNetwork::find(std::string_view name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) return std::nullopt;
  return static_cast<VertexId>(it - names_.begin());
}

const Csr& EmailNetwork::out() const {
  if (!directed()) throw UsageError("out-adjacency requires a directed network");
  return out_;
}

const Csr& EmailNetwork::in() const {
  if (!directed()) throw UsageError("in-adjacency requires a directed network");
  return in_;
}

LabelMask label_bit(Status status, Label label) {
  if (status == Status::rejected) return label_rejected;
  if (status != Status::accepted) return 0;
  if (label == Label::ham) return label_ham;
  if (label == Label::spam) return label_spam;
  return 0;
}

EmailNetwork build_network(std::span<const Transmission> transmissions,
                           std::optional<TimeWindow> window, BuildStats* stats) {
  BuildStats local;
  std::unordered_map<std::string_view, VertexId> ids;
  std::vector<std::string> names;
  std::vector<Edge> edges;
  edges.reserve(transmissions.size());

  auto id_of = [&](const std::string& name) {
    auto [it, inserted] = ids.try_emplace(name, static_cast<VertexId>(names.size()));
    if (inserted) names.push_back(name);
    return it->second;
  };

  for (const auto& t : transmissions) {
    if (window && !window->contains(t.timestamp)) {
      ++local.outside_window;
      continue;
    }
    auto mask = label_bit(t.status, t.label);
    if (mask == 0 || t.sender.empty() || t.recipient.empty()) {
      ++local.skipped;
      continue;
    }
    ++local.used;
    edges.push_back({id_of(t.sender), id_of(t.recipient), mask, t.timestamp});
  }
  if (stats) *stats = local;
  return EmailNetwork(Directedness::directed, std::move(names), std::move(edges), local.used);
}

EmailNetwork build_network(std::span<const EmailEvent> events,
                           std::optional<TimeWindow> window, BuildStats* stats) {
  std::vector<Transmission> ts;
  for (const auto& e : events) {
    if (window && !window->contains(e.timestamp)) {
      if (stats) stats->outside_window += e.recipients.size();
      continue;
    }
    auto x = expand_recipients(e);
    ts.insert(ts.end(), std::make_move_iterator(x.begin()), std::make_move_iterator(x.end()));
  }
  BuildStats inner;
  auto net = build_network(ts, std::nullopt, &inner);
  if (stats) {
    stats->used += inner.used;
    stats->skipped += inner.skipped;
  }
  return net;
}

std::string_view to_string(Selector s) {
  switch (s) {
    case Selector::all: return "all";
    case Selector::ham: return "ham";
    case Selector::spam: return "spam";
    case Selector::rejected_plus_spam: return "rejected_plus_spam";
  }
  return "all";
}

std::optional<Selector> parse_selector(std::string_view s) {
  if (s == "all") return Selector::all;
  if (s == "ham") return Selector::ham;
  if (s == "spam") return Selector::spam;
  if (s == "rejected_plus_spam") return Selector::rejected_plus_spam;
  return std::nullopt;
}

LabelMask selector_mask(Selector s) {
  switch (s) {
    case Selector::all: return label_ham | label_spam | label_rejected;
    case Selector::ham: return label_ham;
    case Selector::spam: return label_spam;
    case Selector::rejected_plus_spam: return label_spam | label_rejected;
  }
  return 0;
}

EmailNetwork subnetwork(const EmailNetwork& net, Selector selector) {
  if (selector == Selector::all) return net;
  const auto mask = selector_mask(selector);
  std::vector<VertexId> remap(net.vertex_count(), std::numeric_limits<VertexId>::max());
  std::vector<std::string> names;
  std::vector<Edge> edges;
  auto id_of = [&](VertexId v) {
    if (remap[v] == std::numeric_limits<VertexId>::max()) {
      remap[v] = static_cast<VertexId>(names.size());
      names.push_back(net.names()[v]);
    }
    return remap[v];
  };
  for (const auto& e : net.edges()) {
    if (!(e.labels & mask)) continue;
    edges.push_back({id_of(e.src), id_of(e.dst), e.labels, e.first_seen});
  }
  return EmailNetwork(net.directedness(), std::move(names), std::move(edges));
}

EmailNetwork merge(std::span<const EmailNetwork> nets) {
  if (nets.empty()) return EmailNetwork{};
  const auto d = nets.front().directedness();
  std::vector<std::string> names;
  std::size_t transmissions = 0;
  for (const auto& n : nets) {
    if (n.directedness() != d) throw UsageError("cannot merge networks of mixed directedness");
    names.insert(names.end(), n.names().begin(), n.names().end());
    transmissions += n.transmission_count();
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());

  std::vector<Edge> edges;
  for (const auto& n : nets) {
    // both name lists are sorted: walk them together
    std::vector<VertexId> global(n.vertex_count());
    std::size_t g = 0;
    for (std::size_t v = 0; v < n.vertex_count(); ++v) {
      while (names[g] != n.names()[v]) ++g;
      global[v] = static_cast<VertexId>(g);
    }
    for (const auto& e : n.edges())
      edges.push_back({global[e.src], global[e.dst], e.labels, e.first_seen});
  }
  return EmailNetwork(d, std::move(names), std::move(edges), transmissions);
}

double mean_degree(const EmailNetwork& net) {
  if (net.empty()) throw UndefinedValueError("mean degree of an empty network");
  return 2.0 * static_cast<double>(net.undirected_edge_count()) /
         static_cast<double>(net.vertex_count());
}

double reciprocity(const EmailNetwork& net) {
  const auto& out = net.out();
  std::size_t total = 0, mutual = 0;
  for (const auto& e : net.edges()) {
    if (e.src == e.dst) continue;
    ++total;
    auto nb = out.neighbors(e.dst);
    if (std::binary_search(nb.begin(), nb.end(), e.src)) ++mutual;
  }
  return total == 0 ? 0.0 : static_cast<double>(mutual) / static_cast<double>(total);
}

void write_network(std::ostream& out, const EmailNetwork& net) {
  out << "#emailnet v1 directed=" << (net.directed() ? "true" : "false")
      << " |V|=" << net.vertex_count() << " |E|=" << net.edge_count() << '\n';
  for (const auto& e : net.edges())
    out << e.src << '\t' << e.dst << '\t' << unsigned{e.labels} << '\t' << e.first_seen << '\n';
  if (!out) throw IoError("write error while serializing network");
}

void write_vertex_table(std::ostream& out, const EmailNetwork& net) {
  for (std::size_t v = 0; v < net.vertex_count(); ++v) out << v << '\t' << net.names()[v] << '\n';
  if (!out) throw IoError("write error while serializing vertex table");
}

namespace {

template <class T>
T parse_number(std::string_view s, const char* what) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty())
    throw UsageError(std::string("malformed ") + what + ": '" + std::string(s) + "'");
  return v;
}

}  // namespace

EmailNetwork read_network(std::istream& in, std::istream* vertex_table) {
  std::string header;
  if (!std::getline(in, header)) throw IoError("missing network header");
  std::istringstream hs(header);
  std::string magic, version, dir, vs, es;
  hs >> magic >> version >> dir >> vs >> es;
  if (magic != "#emailnet" || version != "v1" || dir.rfind("directed=", 0) != 0 ||
      vs.rfind("|V|=", 0) != 0 || es.rfind("|E|=", 0) != 0)
    throw UsageError("unrecognized network header: " + header);
  auto dval = dir.substr(9);
  if (dval != "true" && dval != "false") throw UsageError("bad directed flag: " + dval);
  const auto n = parse_number<std::size_t>(std::string_view(vs).substr(4), "|V|");
  const auto m = parse_number<std::size_t>(std::string_view(es).substr(4), "|E|");

  std::vector<Edge> edges;
  edges.reserve(m);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::string_view v = line;
    std::array<std::string_view, 4> f;
    for (std::size_t i = 0; i < 4; ++i) {
      auto tab = v.find('\t');
      if (i < 3 && tab == std::string_view::npos) throw UsageError("malformed edge line: " + line);
      f[i] = v.substr(0, tab);
      v = tab == std::string_view::npos ? std::string_view{} : v.substr(tab + 1);
    }
    auto mask = parse_number<unsigned>(f[2], "labelmask");
    if (mask > 7) throw UsageError("labelmask out of range: " + line);
    edges.push_back({parse_number<VertexId>(f[0], "src"), parse_number<VertexId>(f[1], "dst"),
                     static_cast<LabelMask>(mask), parse_number<Timestamp>(f[3], "timestamp")});
  }
  if (in.bad()) throw IoError("read error while loading network");
  if (edges.size() != m) throw UsageError("edge count does not match header");

  std::vector<std::string> names(n);
  if (vertex_table) {
    std::size_t seen = 0;
    while (std::getline(*vertex_table, line)) {
      if (line.empty()) continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos) throw UsageError("malformed vertex line: " + line);
      auto id = parse_number<std::size_t>(std::string_view(line).substr(0, tab), "vertex id");
      if (id >= n) throw UsageError("vertex id out of range: " + line);
      names[id] = line.substr(tab + 1);
      ++seen;
    }
    if (seen != n) throw UsageError("vertex table does not cover every vertex");
  } else {
    const auto width = std::to_string(n == 0 ? 0 : n - 1).size();
    for (std::size_t i = 0; i < n; ++i) {
      auto s = std::to_string(i);
      names[i] = std::string(width - s.size(), '0') + s;
    }
  }
  return EmailNetwork(dval == "true" ? Directedness::directed : Directedness::undirected,
                      std::move(names), std::move(edges));
}

}  // namespace emailnet

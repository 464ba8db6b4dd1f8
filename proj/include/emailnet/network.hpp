#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emailnet/ingest.hpp"

namespace emailnet {

using VertexId = std::uint32_t;

enum class Directedness { directed, undirected };

// Edge label-set bits; also the on-disk labelmask.
enum LabelBit : std::uint8_t {
  label_ham = 1u << 0,
  label_spam = 1u << 1,
  label_rejected = 1u << 2,
};
using LabelMask = std::uint8_t;

struct Edge {
  VertexId src = 0;
  VertexId dst = 0;
  LabelMask labels = 0;
  Timestamp first_seen = 0;
  bool operator==(const Edge&) const = default;
};

// Half-open [start, end).
struct TimeWindow {
  Timestamp start = 0;
  Timestamp end = 0;

  TimeWindow() = default;
  TimeWindow(Timestamp s, Timestamp e);  // throws UsageError unless s < e
  bool contains(Timestamp t) const { return t >= start && t < end; }
  Timestamp length() const { return end - start; }
  bool operator==(const TimeWindow&) const = default;
};

// Compressed sparse rows. Neighbor lists are sorted and duplicate-free.
struct Csr {
  std::vector<std::uint64_t> offsets{0};
  std::vector<VertexId> targets;

  std::size_t vertex_count() const { return offsets.size() - 1; }
  std::size_t degree(VertexId v) const { return offsets[v + 1] - offsets[v]; }
  std::span<const VertexId> neighbors(VertexId v) const {
    return {targets.data() + offsets[v], targets.data() + offsets[v + 1]};
  }
};

// Undirected view: neighbor sets exclude self-loops, which are flagged
// separately. A self-loop adds 2 to the undirected degree.
struct UndirectedAdjacency {
  Csr csr;
  std::vector<std::uint8_t> self_loop;

  std::size_t degree(VertexId v) const { return csr.degree(v) + 2u * self_loop[v]; }
  std::size_t neighbor_count(VertexId v) const { return csr.degree(v); }
};

// Deduplicated email network. Vertex ids are the ranks of the vertex names in
// lexicographic order, so two networks over the same addresses and edges
// compare equal regardless of how they were assembled. Immutable once built.
class EmailNetwork {
 public:
  EmailNetwork() : EmailNetwork(Directedness::directed, {}, {}) {}

  // Canonicalizes: names are sorted (ids remapped), undirected edges are
  // oriented src <= dst, duplicate pairs are merged by label union and
  // minimum first-seen time. Throws UsageError on duplicate names or
  // out-of-range ids.
  EmailNetwork(Directedness d, std::vector<std::string> names, std::vector<Edge> edges,
               std::size_t transmissions = 0);

  Directedness directedness() const { return directedness_; }
  bool directed() const { return directedness_ == Directedness::directed; }

  std::size_t vertex_count() const { return names_.size(); }
  // Stored edges: ordered pairs when directed, unordered pairs otherwise.
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t undirected_edge_count() const;
  std::size_t self_loop_count() const;
  // Transmissions folded into the edge set; aggregate only.
  std::size_t transmission_count() const { return transmissions_; }
  bool empty() const { return names_.empty(); }

  const std::vector<std::string>& names() const { return names_; }
  std::span<const Edge> edges() const { return edges_; }
  std::optional<VertexId> find(std::string_view name) const;

  const UndirectedAdjacency& undirected() const { return undirected_; }
  // Directed adjacency including self-loops. Throw UsageError on undirected networks.
  const Csr& out() const;
  const Csr& in() const;

  bool operator==(const EmailNetwork& o) const {
    return directedness_ == o.directedness_ && names_ == o.names_ && edges_ == o.edges_;
  }

 private:
  Directedness directedness_;
  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  std::size_t transmissions_ = 0;
  UndirectedAdjacency undirected_;
  Csr out_;
  Csr in_;
};

struct BuildStats {
  std::size_t used = 0;
  std::size_t outside_window = 0;
  std::size_t skipped = 0;  // incomplete or unlabeled transmissions
};

LabelMask label_bit(Status status, Label label);

EmailNetwork build_network(std::span<const Transmission> transmissions,
                           std::optional<TimeWindow> window = std::nullopt,
                           BuildStats* stats = nullptr);

// Convenience: expands every event's recipients first.
EmailNetwork build_network(std::span<const EmailEvent> events,
                           std::optional<TimeWindow> window = std::nullopt,
                           BuildStats* stats = nullptr);

enum class Selector { all, ham, spam, rejected_plus_spam };

std::string_view to_string(Selector s);
std::optional<Selector> parse_selector(std::string_view s);
LabelMask selector_mask(Selector s);

EmailNetwork subnetwork(const EmailNetwork& net, Selector selector);

// Union of vertex and edge sets. Throws UsageError on mixed directedness.
EmailNetwork merge(std::span<const EmailNetwork> nets);

// Undirected mean degree sum_v d(v) / |V| == 2 |E_undirected| / |V|.
// Throws UndefinedValueError on an empty network.
double mean_degree(const EmailNetwork& net);

// Reverse edge present for a fraction of the non-loop directed edges.
double reciprocity(const EmailNetwork& net);

// `#emailnet v1 directed=<bool> |V|=<n> |E|=<m>` header, then
// `<src>\t<dst>\t<labelmask>\t<first_seen>` per edge.
void write_network(std::ostream& out, const EmailNetwork& net);
// `<id>\t<name>` per vertex.
void write_vertex_table(std::ostream& out, const EmailNetwork& net);
// Without a vertex table, names are zero-padded decimal ids.
EmailNetwork read_network(std::istream& edges, std::istream* vertex_table = nullptr);

}  // namespace emailnet

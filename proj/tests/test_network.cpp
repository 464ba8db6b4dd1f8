#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "emailnet/error.hpp"
#include "emailnet/network.hpp"
#include "emailnet/synth.hpp"
#include "oracles.hpp"

using namespace emailnet;

namespace {

Transmission tx(std::string a, std::string b, Timestamp t, Label l = Label::ham,
                Status s = Status::accepted) {
  return {std::move(a), std::move(b), t, s, s == Status::accepted ? l : Label::unknown};
}

std::vector<EmailEvent> small_mix(std::uint64_t seed) {
  HamModelParams h;
  h.n_users = 300;
  h.events_per_day = 150;
  h.seed = seed;
  SpamModelParams s;
  s.n_spammers = 5;
  s.targets_per_spammer = 40;
  s.target_pool = 300;
  s.seed = seed;
  TimeWindow w(0, 7 * 86400);
  std::vector<std::vector<EmailEvent>> streams{generate_ham(h, w), generate_spam(s, w)};
  return interleave(streams);
}

}  // namespace

TEST_CASE("dedup: repeated spam is one edge") {
  std::vector<Transmission> t;
  for (int i = 0; i < 5; ++i) t.push_back(tx("a", "b", 10 - i, Label::spam));
  auto net = build_network(t);
  CHECK(net.vertex_count() == 2);
  REQUIRE(net.edge_count() == 1);
  CHECK(net.edges()[0].labels == label_spam);
  CHECK(net.edges()[0].first_seen == 6);
  CHECK(net.transmission_count() == 5);
}

TEST_CASE("reciprocal pair: two directed edges, one undirected") {
  auto net = build_network(std::vector<Transmission>{tx("a", "b", 1), tx("b", "a", 2)});
  CHECK(net.edge_count() == 2);
  CHECK(net.undirected_edge_count() == 1);
  CHECK(reciprocity(net) == 1.0);
}

TEST_CASE("label union is order independent") {
  auto one = build_network(std::vector<Transmission>{tx("a", "b", 1, Label::ham), tx("a", "b", 2, Label::spam)});
  auto two = build_network(std::vector<Transmission>{tx("a", "b", 2, Label::spam), tx("a", "b", 1, Label::ham)});
  REQUIRE(one.edge_count() == 1);
  CHECK(one.edges()[0].labels == (label_ham | label_spam));
  CHECK(one == two);
  auto rej = build_network(std::vector<Transmission>{tx("a", "b", 1, Label::ham, Status::rejected)});
  CHECK(rej.edges()[0].labels == label_rejected);
}

TEST_CASE("incomplete transmissions and window filtering") {
  BuildStats st;
  std::vector<Transmission> t{tx("a", "b", 5), tx("c", "d", 15), tx("e", "f", 9, Label::ham, Status::incomplete)};
  auto net = build_network(t, TimeWindow(0, 10), &st);
  CHECK(net.edge_count() == 1);
  CHECK(st.used == 1);
  CHECK(st.outside_window == 1);
  CHECK(st.skipped == 1);
  CHECK_THROWS_AS(TimeWindow(5, 5), UsageError);
}

TEST_CASE("self-loops are kept and count twice in undirected degree") {
  auto net = build_network(std::vector<Transmission>{tx("a", "a", 1), tx("a", "b", 2)});
  CHECK(net.self_loop_count() == 1);
  CHECK(net.undirected_edge_count() == 2);
  auto a = *net.find("a");
  CHECK(net.undirected().degree(a) == 3);
  CHECK(net.out().degree(a) == 2);
  CHECK(net.in().degree(a) == 1);
  CHECK(mean_degree(net) == doctest::Approx(2.0));
}

TEST_CASE("subnetwork selectors") {
  auto net = build_network(std::vector<Transmission>{tx("a", "b", 1, Label::ham), tx("c", "d", 1, Label::spam),
                                                     tx("e", "f", 1, Label::ham, Status::rejected)});
  auto ham = subnetwork(net, Selector::ham);
  CHECK(ham.edge_count() == 1);
  CHECK(ham.vertex_count() == 2);
  CHECK(subnetwork(net, Selector::all) == net);
  CHECK(subnetwork(net, Selector::spam).edge_count() == 1);
  CHECK(subnetwork(net, Selector::rejected_plus_spam).edge_count() == 2);

  auto both = build_network(std::vector<Transmission>{tx("a", "b", 1, Label::ham), tx("a", "b", 2, Label::spam)});
  CHECK(subnetwork(both, Selector::ham).edge_count() == 1);
  CHECK(subnetwork(both, Selector::spam).edge_count() == 1);

  CHECK(parse_selector("rejected_plus_spam") == Selector::rejected_plus_spam);
  CHECK(!parse_selector("bogus"));
}

TEST_CASE("ham and spam projections cover every ham/spam edge (property)") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto net = build_network(small_mix(seed));
    auto ham = subnetwork(net, Selector::ham), spam = subnetwork(net, Selector::spam);
    std::size_t labelled = 0;
    for (const auto& e : net.edges())
      if (e.labels & (label_ham | label_spam)) ++labelled;
    std::size_t overlap = 0;
    for (const auto& e : net.edges())
      if ((e.labels & label_ham) && (e.labels & label_spam)) ++overlap;
    CHECK(ham.edge_count() + spam.edge_count() - overlap == labelled);
  }
}

TEST_CASE("merge") {
  auto n1 = build_network(std::vector<Transmission>{tx("a", "b", 5), tx("b", "c", 3)});
  auto n2 = build_network(std::vector<Transmission>{tx("x", "y", 1)});
  std::vector<EmailNetwork> id{n1, EmailNetwork()};
  CHECK(merge(id) == n1);

  std::vector<EmailNetwork> disjoint{n1, n2};
  auto m = merge(disjoint);
  CHECK(m.vertex_count() == n1.vertex_count() + n2.vertex_count());
  CHECK(m.edge_count() == n1.edge_count() + n2.edge_count());

  auto later = build_network(std::vector<Transmission>{tx("a", "b", 9, Label::spam)});
  std::vector<EmailNetwork> over{later, n1};
  auto u = merge(over);
  auto e = std::find_if(u.edges().begin(), u.edges().end(), [&](const Edge& x) {
    return u.names()[x.src] == "a" && u.names()[x.dst] == "b";
  });
  REQUIRE(e != u.edges().end());
  CHECK(e->labels == (label_ham | label_spam));
  CHECK(e->first_seen == 5);

  auto und = oracle::make_network(Directedness::undirected, 2, {{0, 1}});
  std::vector<EmailNetwork> mixed{n1, und};
  CHECK_THROWS_AS(merge(mixed), UsageError);
}

TEST_CASE("split at any time: merge of halves equals the full build (property)") {
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto ev = small_mix(seed);
    auto full = build_network(ev);
    std::uniform_int_distribution<std::size_t> cut(0, ev.size());
    auto at = cut(rng);
    std::vector<EmailEvent> a(ev.begin(), ev.begin() + at), b(ev.begin() + at, ev.end());
    std::vector<EmailNetwork> parts{build_network(a), build_network(b)};
    CHECK(merge(parts) == full);
  }
}

TEST_CASE("rebuilding from the edge list is idempotent") {
  auto net = build_network(small_mix(9));
  std::vector<Transmission> again;
  for (const auto& e : net.edges()) {
    for (auto [bit, status, label] : {std::tuple{label_ham, Status::accepted, Label::ham},
                                      std::tuple{label_spam, Status::accepted, Label::spam},
                                      std::tuple{label_rejected, Status::rejected, Label::unknown}})
      if (e.labels & bit) again.push_back({net.names()[e.src], net.names()[e.dst], e.first_seen, status, label});
  }
  auto rebuilt = build_network(again);
  CHECK(rebuilt == net);
}

TEST_CASE("undirected edge count never exceeds directed") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto net = build_network(small_mix(seed));
    CHECK(net.undirected_edge_count() <= net.edge_count());
  }
}

TEST_CASE("mean degree") {
  CHECK(mean_degree(oracle::make_network(Directedness::undirected, 2, {{0, 1}})) == 1.0);
  CHECK(mean_degree(oracle::make_network(Directedness::undirected, 3, {{0, 1}, {1, 2}, {2, 0}})) == 2.0);
  CHECK_THROWS_AS(mean_degree(EmailNetwork()), UndefinedValueError);
  // reference week row: 2|E|/|V|
  CHECK(2.0 * 10'949'763 / 6'096'959 == doctest::Approx(3.59).epsilon(0.003));
}

TEST_CASE("mean degree identity on random digraphs with self-loops (property)") {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 50; ++round) {
    std::size_t n = 2 + rng() % 60;
    auto edges = oracle::random_digraph(n, 0.05, rng, true);
    auto net = oracle::make_network(Directedness::directed, n, edges);
    double sum = 0;
    for (VertexId v = 0; v < n; ++v) sum += static_cast<double>(net.undirected().degree(v));
    CHECK(mean_degree(net) == doctest::Approx(sum / static_cast<double>(n)));
    CHECK(mean_degree(net) == doctest::Approx(2.0 * net.undirected_edge_count() / static_cast<double>(n)));
  }
}

TEST_CASE("canonical ids: assembly order does not matter") {
  auto a = build_network(std::vector<Transmission>{tx("z", "a", 1), tx("m", "z", 2)});
  auto b = build_network(std::vector<Transmission>{tx("m", "z", 2), tx("z", "a", 1)});
  CHECK(a == b);
  CHECK(a.names() == std::vector<std::string>{"a", "m", "z"});
  CHECK_THROWS_AS(EmailNetwork(Directedness::directed, {"a", "a"}, {}), UsageError);
  CHECK_THROWS_AS(EmailNetwork(Directedness::directed, {"a"}, {{0, 3, label_ham, 0}}), UsageError);
  CHECK_THROWS_AS(oracle::make_network(Directedness::undirected, 2, {{0, 1}}).out(), UsageError);
}

TEST_CASE("serialization round trip") {
  auto net = build_network(small_mix(4));
  std::stringstream edges, table;
  write_network(edges, net);
  write_vertex_table(table, net);
  CHECK(edges.str().rfind("#emailnet v1 directed=true |V|=" + std::to_string(net.vertex_count()) +
                              " |E|=" + std::to_string(net.edge_count()) + "\n",
                          0) == 0);
  auto back = read_network(edges, &table);
  CHECK(back == net);

  std::istringstream bare("#emailnet v1 directed=false |V|=3 |E|=1\n0\t2\t1\t7\n");
  auto u = read_network(bare);
  CHECK(!u.directed());
  CHECK(u.vertex_count() == 3);
  CHECK(u.edges()[0] == Edge{0, 2, label_ham, 7});
}

TEST_CASE("reciprocity ignores self-loops") {
  auto net = build_network(std::vector<Transmission>{tx("a", "a", 1), tx("a", "b", 1)});
  CHECK(reciprocity(net) == 0.0);
  auto only_loop = build_network(std::vector<Transmission>{tx("a", "a", 1)});
  CHECK(reciprocity(only_loop) == 0.0);
}

#include "emailnet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "emailnet/error.hpp"

namespace emailnet {

std::string user_address(std::uint64_t index) {
  return "user" + std::to_string(index) + "@mail.example";
}

std::string spammer_address(std::uint64_t index) {
  return "sender" + std::to_string(index) + "@bulk.example";
}

void HamModelParams::validate() const {
  if (n_users < 2) throw UsageError("ham model needs at least 2 users");
  if (m < 1 || m >= n_users) throw UsageError("ham model needs 1 <= m < n_users");
  if (!(reciprocity >= 0.0 && reciprocity <= 1.0)) throw UsageError("reciprocity must lie in [0,1]");
  if (!(triadic_closure >= 0.0 && triadic_closure <= 1.0))
    throw UsageError("triadic closure probability must lie in [0,1]");
  if (!(events_per_day >= 0.0)) throw UsageError("events_per_day must be non-negative");
}

void SpamModelParams::validate() const {
  if (n_spammers < 1) throw UsageError("spam model needs at least one spammer");
  if (targets_per_spammer < 1) throw UsageError("spam fan-out must be at least 1");
  if (targets_per_spammer > target_pool)
    throw UsageError("spam fan-out " + std::to_string(targets_per_spammer) +
                     " exceeds target pool " + std::to_string(target_pool));
  if (!(rejection_rate >= 0.0 && rejection_rate <= 1.0))
    throw UsageError("rejection rate must lie in [0,1]");
  if (campaign_seconds < 1) throw UsageError("campaign length must be at least one second");
}

HamModelParams ham_params_from(const KeyValues& kv, HamModelParams p) {
  p.n_users = kv.get_uint("n", p.n_users);
  p.m = kv.get_uint("m", p.m);
  p.reciprocity = kv.get_double("reciprocity", p.reciprocity);
  p.events_per_day = kv.get_double("rate", p.events_per_day);
  p.triadic_closure = kv.get_double("triad", p.triadic_closure);
  p.seed = kv.get_uint("seed", p.seed);
  return p;
}

SpamModelParams spam_params_from(const KeyValues& kv, SpamModelParams p) {
  p.n_spammers = kv.get_uint("spammers", p.n_spammers);
  p.targets_per_spammer = kv.get_uint("fanout", p.targets_per_spammer);
  p.target_pool = kv.get_uint("pool", p.target_pool);
  p.rejection_rate = kv.get_double("reject", p.rejection_rate);
  p.campaign_seconds = kv.get_int("campaign", p.campaign_seconds);
  p.seed = kv.get_uint("seed", p.seed);
  return p;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> ham_contact_graph(const HamModelParams& p) {
  p.validate();
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
  std::vector<std::vector<std::uint64_t>> adj(p.n_users);
  std::vector<std::uint64_t> endpoints;  // one entry per edge end: degree-weighted picks
  auto link = [&](std::uint64_t a, std::uint64_t b) {
    edges.emplace_back(a, b);
    adj[a].push_back(b);
    adj[b].push_back(a);
    endpoints.push_back(a);
    endpoints.push_back(b);
  };

  for (std::uint64_t a = 0; a <= p.m; ++a)
    for (std::uint64_t b = 0; b < a; ++b) link(a, b);

  std::vector<std::uint64_t> chosen, candidates;
  for (std::uint64_t v = p.m + 1; v < p.n_users; ++v) {
    chosen.clear();
    auto by_degree = [&] {
      std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
      while (true) {
        auto t = endpoints[pick(rng)];
        if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) return t;
      }
    };
    chosen.push_back(by_degree());
    while (chosen.size() < p.m) {
      std::uint64_t next;
      bool closed = false;
      if (coin(rng) < p.triadic_closure) {
        candidates.clear();
        for (auto w : adj[chosen.back()])
          if (std::find(chosen.begin(), chosen.end(), w) == chosen.end()) candidates.push_back(w);
        if (!candidates.empty()) {
          std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
          next = candidates[pick(rng)];
          closed = true;
        }
      }
      if (!closed) next = by_degree();
      chosen.push_back(next);
    }
    for (auto t : chosen) link(v, t);
  }
  return edges;
}

std::vector<EmailEvent> generate_ham(const HamModelParams& p, TimeWindow window) {
  auto contacts = ham_contact_graph(p);
  std::mt19937_64 rng(p.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<Timestamp> when(window.start, window.end - 1);
  std::uniform_int_distribution<std::size_t> pick(0, contacts.size() - 1);
  std::uniform_int_distribution<Timestamp> delay(60, 3600);

  const double days = static_cast<double>(window.length()) / 86400.0;
  const auto count = static_cast<std::uint64_t>(std::llround(p.events_per_day * days));
  std::vector<EmailEvent> events;
  events.reserve(count + count / 2);
  for (std::uint64_t i = 0; i < count; ++i) {
    auto [a, b] = contacts[pick(rng)];
    if (coin(rng) < 0.5) std::swap(a, b);
    const auto ts = when(rng);
    events.push_back({ts, user_address(a), {user_address(b)}, Status::accepted, Label::ham});
    if (coin(rng) < p.reciprocity) {
      const auto reply = ts + delay(rng);
      if (reply < window.end)
        events.push_back({reply, user_address(b), {user_address(a)}, Status::accepted, Label::ham});
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const EmailEvent& x, const EmailEvent& y) { return x.timestamp < y.timestamp; });
  return events;
}

std::vector<EmailEvent> generate_spam(const SpamModelParams& p, TimeWindow window) {
  p.validate();
  std::mt19937_64 rng(p.seed ^ 0x5bd1e9955bd1e995ULL);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const auto burst = std::min<Timestamp>(p.campaign_seconds, window.length());
  std::uniform_int_distribution<Timestamp> campaign_start(window.start, window.end - burst);
  std::uniform_int_distribution<Timestamp> offset(0, burst - 1);

  std::vector<EmailEvent> events;
  events.reserve(p.n_spammers * p.targets_per_spammer);
  std::unordered_set<std::uint64_t> picked;
  std::vector<std::uint64_t> targets;
  for (std::uint64_t s = 0; s < p.n_spammers; ++s) {
    // Floyd's sampling without replacement
    picked.clear();
    targets.clear();
    for (auto j = p.target_pool - p.targets_per_spammer; j < p.target_pool; ++j) {
      std::uniform_int_distribution<std::uint64_t> pick(0, j);
      auto t = pick(rng);
      if (!picked.insert(t).second) {
        picked.insert(j);
        t = j;
      }
      targets.push_back(t);
    }
    const auto sender = spammer_address(s);
    const auto begin = campaign_start(rng);
    for (auto t : targets) {
      const auto ts = begin + offset(rng);
      if (coin(rng) < p.rejection_rate)
        events.push_back({ts, sender, {user_address(t)}, Status::rejected, Label::unknown});
      else
        events.push_back({ts, sender, {user_address(t)}, Status::accepted, Label::spam});
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const EmailEvent& x, const EmailEvent& y) { return x.timestamp < y.timestamp; });
  return events;
}

EmailNetwork generate_random(std::uint64_t n, double edge_probability, std::uint64_t seed) {
  if (!(edge_probability > 0.0 && edge_probability < 1.0))
    throw UsageError("edge probability must lie in (0,1)");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double log_q = std::log1p(-edge_probability);

  std::vector<Edge> edges;
  // Batagelj-Brandes: walk pairs (w < v) skipping geometric gaps
  std::int64_t v = 1, w = -1;
  const auto nn = static_cast<std::int64_t>(n);
  while (v < nn) {
    const double r = unit(rng);
    const double skip = std::floor(std::log1p(-r) / log_q);
    if (skip > 4e18) break;
    w += 1 + static_cast<std::int64_t>(skip);
    while (w >= v && v < nn) {
      w -= v;
      ++v;
    }
    if (v < nn)
      edges.push_back({static_cast<VertexId>(w), static_cast<VertexId>(v), label_ham, 0});
  }

  const auto width = std::to_string(n == 0 ? 0 : n - 1).size();
  std::vector<std::string> names(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    auto s = std::to_string(i);
    names[i] = "r" + std::string(width - s.size(), '0') + s;
  }
  return EmailNetwork(Directedness::undirected, std::move(names), std::move(edges));
}

std::vector<EmailEvent> interleave(std::span<const std::vector<EmailEvent>> streams) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < streams.size(); ++i) {
    const auto& s = streams[i];
    for (std::size_t j = 1; j < s.size(); ++j)
      if (s[j].timestamp < s[j - 1].timestamp)
        throw UsageError("stream " + std::to_string(i) + " is not time-ordered");
    total += s.size();
  }
  std::vector<EmailEvent> out;
  out.reserve(total);
  for (const auto& s : streams) out.insert(out.end(), s.begin(), s.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const EmailEvent& x, const EmailEvent& y) { return x.timestamp < y.timestamp; });
  return out;
}

}  // namespace emailnet

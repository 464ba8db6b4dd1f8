#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "emailnet/config.hpp"
#include "emailnet/ingest.hpp"
#include "emailnet/network.hpp"

namespace emailnet {

// Ham users and spam targets share one address space, so spam lands on the
// same mailboxes that exchange ham.
std::string user_address(std::uint64_t index);
std::string spammer_address(std::uint64_t index);

struct HamModelParams {
  std::uint64_t n_users = 1000;
  std::uint64_t m = 2;              // attachment edges per new user
  double reciprocity = 0.3;         // chance a message gets a reply
  double events_per_day = 1000.0;
  double triadic_closure = 0.1;     // chance each non-first link closes a triangle
  std::uint64_t seed = 1;

  void validate() const;  // UsageError
};

struct SpamModelParams {
  std::uint64_t n_spammers = 10;
  std::uint64_t targets_per_spammer = 100;
  std::uint64_t target_pool = 10'000;
  double rejection_rate = 0.5;
  // Each spammer sends its whole fan-out in one burst of this length,
  // starting at a uniform time in the window.
  std::int64_t campaign_seconds = 3600;
  std::uint64_t seed = 1;

  void validate() const;  // UsageError
};

HamModelParams ham_params_from(const KeyValues& kv, HamModelParams base = {});
SpamModelParams spam_params_from(const KeyValues& kv, SpamModelParams base = {});

// Undirected contact graph grown by preferential attachment: each new user
// links to m distinct earlier users; after the first link, each further link
// goes to a neighbor of the previous target with probability
// `triadic_closure` (closing a triangle) and by degree otherwise.
// Pairs are (new user, earlier user).
std::vector<std::pair<std::uint64_t, std::uint64_t>> ham_contact_graph(const HamModelParams& p);

// Accepted ham events sampled from the contact graph with random direction
// and uniform timestamps; each may be answered by a reply in the opposite
// direction. Time-ordered.
std::vector<EmailEvent> generate_ham(const HamModelParams& p, TimeWindow window);

// Each spammer mails `targets_per_spammer` distinct pool addresses during one
// campaign burst; every transmission is independently rejected with
// `rejection_rate`. No replies. Time-ordered.
std::vector<EmailEvent> generate_spam(const SpamModelParams& p, TimeWindow window);

// Undirected G(n, p) by geometric edge skipping. Isolated vertices are kept.
// Throws UsageError unless 0 < p < 1.
EmailNetwork generate_random(std::uint64_t n, double edge_probability, std::uint64_t seed);

// Merge of time-ordered streams; ties keep stream order. Throws UsageError on
// an unsorted input.
std::vector<EmailEvent> interleave(std::span<const std::vector<EmailEvent>> streams);

}  // namespace emailnet

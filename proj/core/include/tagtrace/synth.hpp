#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tagtrace/timeutil.hpp"
#include "tagtrace/trace.hpp"

namespace tagtrace {

/// Seeded generator whose output is stable across platforms and runs:
/// std::mt19937_64 (its output sequence is fixed by the standard) feeding
/// hand-written uniform draws, since the <random> distributions are
/// implementation-defined.
class StableRng {
 public:
  explicit StableRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform in [0, bound); bound > 0. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

/// Parameters of the planted-community trace generator.
struct GenConfig {
  std::uint64_t seed = 1;
  std::uint32_t users = 200;
  std::uint32_t days = 30;
  std::uint32_t events_per_day = 1000;
  double item_reuse_p = 0.5;
  double tag_reuse_p = 0.8;
  std::uint32_t communities = 1;
  /// Cap on the number of items a community shares; 0 means unbounded.
  std::uint32_t intra_community_item_pool = 0;
  /// Cap on the size of a community's tag vocabulary; 0 means unbounded.
  std::uint32_t intra_community_tag_pool = 0;
  double noise_p = 0.05;
  Timestamp start = 1099267200;  // 2004-11-01T00:00:00Z
};

/// Throws ConfigError when a probability lies outside [0, 1], a count is zero,
/// or communities > users.
void validate(const GenConfig& config);

struct GroundTruth {
  GenConfig config;
  /// (user name, community) for every generated user, ordered by name.
  std::vector<std::pair<std::string, std::uint32_t>> community_of;

  /// Community of a user by name; ConfigError if unknown.
  std::uint32_t community(std::string_view user) const;
};

struct GeneratedTrace {
  Trace trace;
  GroundTruth truth;
};

/// Day-by-day generation. Each event picks a uniform user; with
/// item_reuse_p it reuses a seen item (from the user's community pool, or with
/// noise_p from the global pool), otherwise it mints a fresh item. Tags follow
/// the same scheme with tag_reuse_p over community vocabularies.
GeneratedTrace generate(const GenConfig& config);

/// Partnered trace for recommender checks: users come in pairs that share part
/// of their library during the first window, and each user adopts the
/// partner's remaining items during the second window.
struct CopycatConfig {
  std::uint64_t seed = 1;
  std::uint32_t pairs = 50;
  std::uint32_t items_per_user = 10;
  std::uint32_t shared_per_pair = 4;
  /// Extra items per user drawn from a global pool, to create weak cross-pair links.
  std::uint32_t noise_items = 3;
  std::uint32_t noise_pool = 500;
  std::uint32_t window_days = 30;
  Timestamp start = 1099267200;
};

struct CopycatTrace {
  Trace trace;
  /// First second of the adoption window.
  Timestamp cutoff = 0;
  /// (user name, partner name) for every user.
  std::vector<std::pair<std::string, std::string>> partner_of;
};

CopycatTrace generate_copycat(const CopycatConfig& config);

}  // namespace tagtrace

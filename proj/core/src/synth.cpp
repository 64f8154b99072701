#include "tagtrace/synth.hpp"

#include <algorithm>
#include <cstdio>

#include "tagtrace/error.hpp"

namespace tagtrace {

std::uint64_t StableRng::below(std::uint64_t bound) {
  // Largest multiple of bound that fits; draws at or above it are rejected.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

void validate(const GenConfig& c) {
  auto probability = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]");
  };
  probability(c.item_reuse_p, "item_reuse_p");
  probability(c.tag_reuse_p, "tag_reuse_p");
  probability(c.noise_p, "noise_p");
  if (c.users == 0 || c.days == 0 || c.events_per_day == 0 || c.communities == 0) {
    throw ConfigError("users, days, events_per_day and communities must be at least 1");
  }
  if (c.communities > c.users) throw ConfigError("more communities than users");
  if (c.start < 0) throw ConfigError("start timestamp must be non-negative");
}

std::uint32_t GroundTruth::community(std::string_view user) const {
  const auto it = std::lower_bound(community_of.begin(), community_of.end(), user,
                                   [](const auto& entry, std::string_view name) { return entry.first < name; });
  if (it == community_of.end() || it->first != user) {
    throw ConfigError("user '" + std::string(user) + "' is not part of the ground truth");
  }
  return it->second;
}

namespace {

std::string numbered(const char* prefix, std::uint64_t n, int width) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%0*llu", prefix, width, static_cast<unsigned long long>(n));
  return buf;
}

// Seen entities of one kind: a global pool plus one (optionally capped) pool
// per community.
class ReusePools {
 public:
  ReusePools(std::uint32_t communities, std::uint32_t cap) : community_(communities), cap_(cap) {}

  // Entity for one event: a reused one with probability reuse_p, else a fresh one.
  std::uint64_t draw(StableRng& rng, std::uint32_t community, double reuse_p, double noise_p) {
    if (!rng.bernoulli(reuse_p)) return mint(community);
    const auto& local = community_[community];
    const bool escape = rng.bernoulli(noise_p);
    if (!escape && !local.empty()) return local[rng.below(local.size())];
    if (!global_.empty()) return global_[rng.below(global_.size())];
    return mint(community);
  }

 private:
  std::uint64_t mint(std::uint32_t community) {
    const std::uint64_t id = next_++;
    global_.push_back(id);
    auto& local = community_[community];
    if (cap_ == 0 || local.size() < cap_) local.push_back(id);
    return id;
  }

  std::vector<std::vector<std::uint64_t>> community_;
  std::vector<std::uint64_t> global_;
  std::uint32_t cap_;
  std::uint64_t next_ = 0;
};

}  // namespace

GeneratedTrace generate(const GenConfig& config) {
  validate(config);
  StableRng rng(config.seed);

  // Users are dealt round-robin into communities.
  std::vector<std::string> user_names(config.users);
  std::vector<std::uint32_t> community(config.users);
  for (std::uint32_t u = 0; u < config.users; ++u) {
    user_names[u] = numbered("user", u, 5);
    community[u] = u % config.communities;
  }

  ReusePools items(config.communities, config.intra_community_item_pool);
  ReusePools tags(config.communities, config.intra_community_tag_pool);

  TraceBuilder builder;
  builder.reserve(static_cast<std::size_t>(config.days) * config.events_per_day);
  for (std::uint32_t day = 0; day < config.days; ++day) {
    const Timestamp day_begin = config.start + static_cast<Timestamp>(day) * kSecondsPerDay;
    for (std::uint32_t i = 0; i < config.events_per_day; ++i) {
      const Timestamp ts =
          day_begin + static_cast<Timestamp>(i) * kSecondsPerDay / config.events_per_day;
      const auto u = static_cast<std::uint32_t>(rng.below(config.users));
      const auto item = items.draw(rng, community[u], config.item_reuse_p, config.noise_p);
      const auto tag = tags.draw(rng, community[u], config.tag_reuse_p, config.noise_p);
      builder.add(user_names[u], numbered("item", item, 7), numbered("tag", tag, 6), ts);
    }
  }

  GroundTruth truth;
  truth.config = config;
  truth.community_of.reserve(config.users);
  for (std::uint32_t u = 0; u < config.users; ++u) truth.community_of.emplace_back(user_names[u], community[u]);
  std::sort(truth.community_of.begin(), truth.community_of.end());
  return GeneratedTrace{builder.build().trace, std::move(truth)};
}

CopycatTrace generate_copycat(const CopycatConfig& c) {
  if (c.pairs == 0 || c.items_per_user == 0 || c.window_days == 0) {
    throw ConfigError("copycat generator needs at least one pair, item and window day");
  }
  if (c.shared_per_pair >= c.items_per_user) {
    throw ConfigError("shared_per_pair must be smaller than items_per_user");
  }
  if (c.noise_items > 0 && c.noise_pool == 0) throw ConfigError("noise_pool must be positive");
  StableRng rng(c.seed);
  const Timestamp window = static_cast<Timestamp>(c.window_days) * kSecondsPerDay;
  auto when = [&](Timestamp base) { return base + static_cast<Timestamp>(rng.below(window)); };

  TraceBuilder builder;
  std::vector<std::pair<std::string, std::string>> partner_of;
  std::uint64_t next_item = 0;
  const std::uint32_t exclusive = c.items_per_user - c.shared_per_pair;
  for (std::uint32_t pair = 0; pair < c.pairs; ++pair) {
    const std::string a = numbered("user", 2ull * pair, 5);
    const std::string b = numbered("user", 2ull * pair + 1, 5);
    const std::string tag = numbered("topic", pair, 4);
    std::vector<std::string> shared;
    std::vector<std::string> only_a;
    std::vector<std::string> only_b;
    for (std::uint32_t i = 0; i < c.shared_per_pair; ++i) shared.push_back(numbered("item", next_item++, 7));
    for (std::uint32_t i = 0; i < exclusive; ++i) only_a.push_back(numbered("item", next_item++, 7));
    for (std::uint32_t i = 0; i < exclusive; ++i) only_b.push_back(numbered("item", next_item++, 7));

    for (const auto& user : {a, b}) {
      for (const auto& item : shared) builder.add(user, item, tag, when(c.start));
      for (std::uint32_t i = 0; i < c.noise_items; ++i) {
        builder.add(user, numbered("popular", rng.below(c.noise_pool), 5), "misc", when(c.start));
      }
    }
    for (const auto& item : only_a) {
      builder.add(a, item, tag, when(c.start));
      builder.add(b, item, tag, when(c.start + window));
    }
    for (const auto& item : only_b) {
      builder.add(b, item, tag, when(c.start));
      builder.add(a, item, tag, when(c.start + window));
    }
    partner_of.emplace_back(a, b);
    partner_of.emplace_back(b, a);
  }
  return CopycatTrace{builder.build().trace, c.start + window, std::move(partner_of)};
}

}  // namespace tagtrace

#include "tagtrace/recommender.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "tagtrace/error.hpp"

namespace tagtrace {

TemporalSplit split(const Trace& trace, Timestamp cutoff) {
  if (!(trace.first_timestamp() < cutoff && cutoff <= trace.last_timestamp())) {
    throw ConfigError("cutoff " + std::to_string(cutoff) + " is not strictly inside the trace span [" +
                      std::to_string(trace.first_timestamp()) + ", " +
                      std::to_string(trace.last_timestamp()) + "]");
  }
  const auto records = trace.assignments();
  const auto boundary = std::partition_point(
      records.begin(), records.end(), [&](const TagAssignment& a) { return a.timestamp < cutoff; });
  const auto at = static_cast<std::size_t>(boundary - records.begin());
  return TemporalSplit{cutoff, trace.slice(0, at), trace.slice(at, records.size())};
}

Timestamp cutoff_at_fraction(const Trace& trace, double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train fraction must lie strictly between 0 and 1");
  }
  const auto records = trace.assignments();
  auto rank = static_cast<std::size_t>(std::ceil(train_fraction * static_cast<double>(records.size())));
  rank = std::clamp<std::size_t>(rank, 1, records.size() - 1);
  Timestamp cutoff = records[rank].timestamp;
  if (cutoff <= trace.first_timestamp()) {
    // Everything up to `rank` shares the first timestamp; move to the next distinct one.
    const auto next = std::upper_bound(records.begin(), records.end(), trace.first_timestamp(),
                                       [](Timestamp t, const TagAssignment& a) { return t < a.timestamp; });
    if (next == records.end()) throw ConfigError("trace has a single timestamp; it cannot be split");
    cutoff = next->timestamp;
  }
  return cutoff;
}

RecommendMode parse_recommend_mode(std::string_view name) {
  if (name == "items" || name == "item") return RecommendMode::items;
  if (name == "tags" || name == "tag") return RecommendMode::tags;
  throw ConfigError("unknown recommendation mode '" + std::string(name) + "'");
}

std::string_view to_string(RecommendMode mode) {
  return mode == RecommendMode::items ? "items" : "tags";
}

namespace {

template <class Id>
std::span<const Id> entities_of(const UserProfile& p);

template <>
std::span<const ItemId> entities_of<ItemId>(const UserProfile& p) {
  return p.items;
}

template <>
std::span<const TagId> entities_of<TagId>(const UserProfile& p) {
  return p.tags;
}

template <class Id>
std::vector<ScoredEntity> score_candidates(const ProfileSet& profiles, const UserProfile& self,
                                           std::span<const NeighborIndex::Neighbor> neighbors,
                                           std::size_t n) {
  struct Contribution {
    std::uint32_t entity;
    std::uint32_t rank;
    double weight;
  };
  const auto own = entities_of<Id>(self);
  std::vector<Contribution> contributions;
  for (std::uint32_t rank = 0; rank < neighbors.size(); ++rank) {
    const auto* p = profiles.find(neighbors[rank].user);
    if (p == nullptr) continue;
    for (auto e : entities_of<Id>(*p)) {
      if (std::binary_search(own.begin(), own.end(), e)) continue;
      contributions.push_back({e.value, rank, neighbors[rank].weight});
    }
  }
  // Sum per entity in neighbor-rank order so scores do not depend on layout.
  std::sort(contributions.begin(), contributions.end(), [](const auto& x, const auto& y) {
    return std::tie(x.entity, x.rank) < std::tie(y.entity, y.rank);
  });
  std::vector<ScoredEntity> scored;
  for (const auto& c : contributions) {
    if (scored.empty() || scored.back().entity != c.entity) scored.push_back({c.entity, 0.0});
    scored.back().score += c.weight;
  }
  auto better = [](const ScoredEntity& x, const ScoredEntity& y) {
    if (x.score != y.score) return x.score > y.score;
    return x.entity < y.entity;
  };
  const std::size_t keep = std::min(n, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(),
                    better);
  scored.resize(keep);
  return scored;
}

}  // namespace

NeighborRecommender::NeighborRecommender(const ProfileSet& train_profiles,
                                         const SparseSimilarity& train_similarity,
                                         double min_weight)
    : profiles_(train_profiles), index_(train_similarity, min_weight) {}

std::span<const NeighborIndex::Neighbor> NeighborRecommender::neighbors(UserId user,
                                                                        std::size_t k) const {
  const auto all = index_.neighbors(user);
  return all.first(std::min(k, all.size()));
}

Recommendation NeighborRecommender::recommend(UserId user, std::size_t k, std::size_t n,
                                              RecommendMode mode) const {
  const auto* self = profiles_.find(user);
  if (self == nullptr) throw ColdStartError("user is absent from the training period");
  Recommendation rec;
  rec.user = user;
  rec.mode = mode;
  const auto top = neighbors(user, k);
  rec.ranked = mode == RecommendMode::items ? score_candidates<ItemId>(profiles_, *self, top, n)
                                            : score_candidates<TagId>(profiles_, *self, top, n);
  return rec;
}

namespace {

template <class Id>
void score_user(const UserProfile& test_profile, std::span<const char> train_universe,
                const Recommendation& rec, UserOutcome& outcome) {
  std::vector<std::uint32_t> recommended;
  recommended.reserve(rec.ranked.size());
  for (const auto& r : rec.ranked) recommended.push_back(r.entity);
  std::sort(recommended.begin(), recommended.end());
  auto hit = [&](Id e) { return std::binary_search(recommended.begin(), recommended.end(), e.value); };

  for (auto e : entities_of<Id>(test_profile)) {
    const bool reused = e.index() < train_universe.size() && train_universe[e.index()];
    if (reused) outcome.reused_only_applicable = true;
    if (hit(e)) {
      ++outcome.hits;
      outcome.success = true;
      if (reused) outcome.reused_only_success = true;
    }
  }
}

}  // namespace

EvalReport evaluate(const TemporalSplit& split, const EvalParams& params) {
  const auto train_profiles = build_profiles(split.train);
  const auto test_profiles = build_profiles(split.test);

  EvalReport report;
  report.params = params;
  report.cutoff = split.cutoff;

  std::vector<UserId> both;
  for (const auto& p : test_profiles) {
    if (train_profiles.find(p.user) != nullptr) {
      both.push_back(p.user);
    } else {
      ++report.cold_start_users;
    }
  }
  if (both.empty()) throw EmptyInputError("no user is active in both the training and test periods");

  SparseSimilarity sim;
  if (train_profiles.size() >= 2) {
    sim = all_pairs(train_profiles, params.similarity, params.pairs);
  } else {
    sim.mode = params.similarity;
    sim.universe = train_profiles.size();
    sim.id_bound = train_profiles.user_universe();
  }
  const NeighborRecommender recommender(train_profiles, sim, params.threshold);

  const auto& vocab = split.train.vocabulary();
  std::vector<char> train_universe(
      params.mode == RecommendMode::items ? vocab.items.size() : vocab.tags.size(), 0);
  if (params.mode == RecommendMode::items) {
    for (auto id : split.train.items()) train_universe[id.index()] = 1;
  } else {
    for (auto id : split.train.tags()) train_universe[id.index()] = 1;
  }

  report.per_user.reserve(both.size());
  for (auto user : both) {
    const auto rec = recommender.recommend(user, params.k, params.n, params.mode);
    UserOutcome outcome;
    outcome.user = user;
    const auto& test_profile = test_profiles.at(user);
    if (params.mode == RecommendMode::items) {
      score_user<ItemId>(test_profile, train_universe, rec, outcome);
    } else {
      score_user<TagId>(test_profile, train_universe, rec, outcome);
    }
    ++report.users_evaluated;
    if (outcome.success) ++report.successes;
    if (outcome.reused_only_applicable) {
      ++report.reused_only_users;
      if (outcome.reused_only_success) ++report.reused_only_successes;
    }
    report.per_user.push_back(outcome);
  }
  report.success_rate =
      static_cast<double>(report.successes) / static_cast<double>(report.users_evaluated);
  if (report.reused_only_users > 0) {
    report.success_rate_reused_only = static_cast<double>(report.reused_only_successes) /
                                      static_cast<double>(report.reused_only_users);
  }
  return report;
}

}  // namespace tagtrace

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "tagtrace/similarity.hpp"
#include "tagtrace/trace.hpp"

namespace tagtrace {

/// Events before `cutoff` train; events at or after it test.
struct TemporalSplit {
  Timestamp cutoff = 0;
  Trace train;
  Trace test;
};

/// Requires first_timestamp < cutoff <= last_timestamp, otherwise ConfigError.
TemporalSplit split(const Trace& trace, Timestamp cutoff);

/// Cutoff placing roughly `train_fraction` of the assignments in training:
/// the timestamp of the assignment at that rank. ConfigError if the fraction
/// is outside (0, 1) or no valid cutoff exists.
Timestamp cutoff_at_fraction(const Trace& trace, double train_fraction);

enum class RecommendMode { items, tags };

RecommendMode parse_recommend_mode(std::string_view name);
std::string_view to_string(RecommendMode mode);

struct ScoredEntity {
  std::uint32_t entity = 0;  // ItemId or TagId value, per mode
  double score = 0.0;
};

/// Ranked by score descending, then entity id ascending.
struct Recommendation {
  UserId user;
  RecommendMode mode = RecommendMode::items;
  std::vector<ScoredEntity> ranked;
};

/// Neighbor-based recommender over a training snapshot: each candidate is
/// scored by the summed weights of the user's top-k neighbors holding it.
class NeighborRecommender {
 public:
  /// Neighbors with weight below `min_weight` are ignored. Both arguments must
  /// outlive the recommender.
  NeighborRecommender(const ProfileSet& train_profiles, const SparseSimilarity& train_similarity,
                      double min_weight = 0.0);

  /// Throws ColdStartError when `user` has no training profile. A user
  /// without neighbors gets an empty list.
  Recommendation recommend(UserId user, std::size_t k, std::size_t n, RecommendMode mode) const;

  /// Top-k neighbors, strongest first.
  std::span<const NeighborIndex::Neighbor> neighbors(UserId user, std::size_t k) const;

 private:
  const ProfileSet& profiles_;
  NeighborIndex index_;
};

struct EvalParams {
  std::size_t k = 20;
  std::size_t n = 10;
  RecommendMode mode = RecommendMode::items;
  SimilarityMode similarity = SimilarityMode::user_item;
  /// Neighbor weight floor; 0 keeps every nonzero neighbor.
  double threshold = 0.0;
  AllPairsOptions pairs;
};

struct UserOutcome {
  UserId user;
  std::size_t hits = 0;
  bool success = false;
  bool reused_only_applicable = false;
  bool reused_only_success = false;
};

struct EvalReport {
  EvalParams params;
  Timestamp cutoff = 0;
  std::size_t users_evaluated = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  std::size_t reused_only_users = 0;
  std::size_t reused_only_successes = 0;
  /// Unset when no evaluated user touched a training-period entity in test.
  std::optional<double> success_rate_reused_only;
  /// Users active only in the test period; excluded from every denominator.
  std::size_t cold_start_users = 0;
  std::vector<UserOutcome> per_user;
};

/// Evaluates hit-rate@n for every user active in both periods. Throws
/// EmptyInputError when no such user exists.
EvalReport evaluate(const TemporalSplit& split, const EvalParams& params = {});

}  // namespace tagtrace

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "tagtrace/stats.hpp"
#include "tagtrace/timeutil.hpp"
#include "tagtrace/trace.hpp"

namespace tagtrace {

/// Which per-user set the Jaccard ratio is taken over.
enum class SimilarityMode { user_item, user_tag };

SimilarityMode parse_similarity_mode(std::string_view name);
std::string_view to_string(SimilarityMode mode);

/// |A ∩ B| / |A ∪ B| over the profiles' item sets or tag vocabularies.
/// Throws ConfigError for a self-pair.
double pair_similarity(const UserProfile& a, const UserProfile& b, SimilarityMode mode);

/// One user pair with overlapping sets. `a < b`. The weight is derived from the
/// exact counts on demand.
struct PairEntry {
  UserId a;
  UserId b;
  std::uint32_t shared = 0;    // |S_a ∩ S_b| > 0
  std::uint32_t combined = 0;  // |S_a ∪ S_b|

  double weight() const noexcept {
    return static_cast<double>(shared) / static_cast<double>(combined);
  }
};

/// All nonzero pairwise interest-sharing ratios over a set of users. Pairs not
/// stored have weight zero.
struct SparseSimilarity {
  SimilarityMode mode = SimilarityMode::user_item;
  /// Number of users the pairs were drawn from.
  std::size_t universe = 0;
  /// Exclusive upper bound on user ids (size of the vocabulary).
  std::size_t id_bound = 0;
  /// Sorted by (a, b).
  std::vector<PairEntry> entries;

  std::uint64_t total_pairs() const noexcept {
    const auto n = static_cast<std::uint64_t>(universe);
    return n < 2 ? 0 : n * (n - 1) / 2;
  }
  std::uint64_t zero_pairs() const noexcept { return total_pairs() - entries.size(); }
};

struct AllPairsOptions {
  /// Hard cap on stored pairs; exceeding it throws CapacityError. 0 disables the cap.
  std::size_t max_entries = 250'000'000;
  /// 0 uses hardware concurrency.
  unsigned threads = 1;
};

/// Inverted-index all-pairs Jaccard. Work is proportional to the number of
/// co-occurring (pair, entity) incidences, not to the number of user pairs.
/// Throws EmptyInputError for fewer than two profiles.
SparseSimilarity all_pairs(const ProfileSet& profiles, SimilarityMode mode,
                           const AllPairsOptions& options = {});

enum class PairPopulation { nonzero, all };

PairPopulation parse_population(std::string_view name);
std::string_view to_string(PairPopulation population);

struct SimilaritySummary {
  SimilarityMode mode = SimilarityMode::user_item;
  PairPopulation population = PairPopulation::nonzero;
  std::uint64_t count = 0;
  double mean = 0.0;
  double sd = 0.0;
  double median = 0.0;
};

/// Zero pairs are accounted for analytically under PairPopulation::all.
/// Throws EmptyInputError when the population is empty.
SimilaritySummary summarize(const SparseSimilarity& sim, PairPopulation population);

struct CdfPoint {
  double threshold = 0.0;
  double cumulative = 0.0;  // fraction of the population with weight <= threshold
};

/// Empirical CDF sampled at k/grid for k = 0..grid and at every distinct weight,
/// ascending by threshold. The last point is (1.0, 1.0).
std::vector<CdfPoint> cdf(const SparseSimilarity& sim, PairPopulation population,
                          std::size_t grid = 100);

/// Evaluates the CDF at one threshold.
double cdf_at(const SparseSimilarity& sim, PairPopulation population, double threshold);

/// Threshold at the point of maximum distance from the chord joining the first
/// and last CDF points. Throws EmptyInputError for fewer than two points.
double knee_threshold(std::span<const CdfPoint> curve);

/// Similarity neighbors per user, strongest first (ties by user id).
class NeighborIndex {
 public:
  struct Neighbor {
    UserId user;
    double weight = 0.0;
  };

  /// Keeps pairs with weight >= min_weight (all stored pairs by default).
  explicit NeighborIndex(const SparseSimilarity& sim, double min_weight = 0.0);

  std::span<const Neighbor> neighbors(UserId user) const;

 private:
  std::vector<std::size_t> offset_;
  std::vector<Neighbor> neighbors_;
};

struct WindowOptions {
  int window_days = 30;
  SimilarityMode mode = SimilarityMode::user_item;
  /// Profiles accumulate from the start of the trace instead of per window.
  bool cumulative = false;
  AllPairsOptions pairs;
};

struct WindowStats {
  DayIndex window_start = 0;
  std::size_t active_users = 0;
  /// Number of nonzero pairs the quartiles are taken over.
  std::size_t population = 0;
  std::optional<stats::FiveNumber> quartiles;
};

/// Consecutive disjoint windows of `window_days` UTC days, starting at the
/// first event's day. Windows with no nonzero pair have population 0.
std::vector<WindowStats> windowed(const Trace& trace, const WindowOptions& options = {});

}  // namespace tagtrace

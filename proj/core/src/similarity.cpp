#include "tagtrace/similarity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

#include "tagtrace/error.hpp"
#include "tagtrace/parallel.hpp"

namespace tagtrace {

SimilarityMode parse_similarity_mode(std::string_view name) {
  if (name == "user-item" || name == "item") return SimilarityMode::user_item;
  if (name == "user-tag" || name == "tag") return SimilarityMode::user_tag;
  throw ConfigError("unknown similarity mode '" + std::string(name) + "'");
}

std::string_view to_string(SimilarityMode mode) {
  return mode == SimilarityMode::user_item ? "user-item" : "user-tag";
}

PairPopulation parse_population(std::string_view name) {
  if (name == "nonzero") return PairPopulation::nonzero;
  if (name == "all") return PairPopulation::all;
  throw ConfigError("unknown pair population '" + std::string(name) + "'");
}

std::string_view to_string(PairPopulation population) {
  return population == PairPopulation::nonzero ? "nonzero" : "all";
}

namespace {

template <class Id>
using MemberSet = std::vector<Id> UserProfile::*;

// Calls `f` with a pointer to the profile member holding the selected sets.
template <class F>
decltype(auto) visit_sets(SimilarityMode mode, F&& f) {
  if (mode == SimilarityMode::user_item) return f(&UserProfile::items);
  return f(&UserProfile::tags);
}

template <class Id>
std::size_t intersection_size(const std::vector<Id>& a, const std::vector<Id>& b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

}  // namespace

double pair_similarity(const UserProfile& a, const UserProfile& b, SimilarityMode mode) {
  if (a.user == b.user) throw ConfigError("interest sharing of a user with itself is undefined");
  return visit_sets(mode, [&](auto member) {
    const auto& sa = a.*member;
    const auto& sb = b.*member;
    const std::size_t shared = intersection_size(sa, sb);
    const std::size_t combined = sa.size() + sb.size() - shared;
    if (combined == 0) return 0.0;
    return static_cast<double>(shared) / static_cast<double>(combined);
  });
}

namespace {

template <class Id>
SparseSimilarity all_pairs_impl(const ProfileSet& profiles, SimilarityMode mode,
                                MemberSet<Id> member, const AllPairsOptions& options) {
  const std::size_t n = profiles.size();
  auto entity_set = [&](const UserProfile& p) -> const std::vector<Id>& { return p.*member; };

  // Inverted index: entity -> ascending list of profile slots holding it.
  std::uint32_t entity_bound = 0;
  for (const auto& p : profiles) {
    const auto& s = entity_set(p);
    if (!s.empty()) entity_bound = std::max(entity_bound, s.back().value + 1);
  }
  std::vector<std::size_t> offset(entity_bound + 1, 0);
  for (const auto& p : profiles) {
    for (auto e : entity_set(p)) ++offset[e.index() + 1];
  }
  for (std::size_t e = 0; e < entity_bound; ++e) offset[e + 1] += offset[e];
  std::vector<std::uint32_t> postings(offset.back());
  {
    std::vector<std::size_t> cursor(offset.begin(), offset.end() - 1);
    for (std::size_t slot = 0; slot < n; ++slot) {
      for (auto e : entity_set(profiles[slot])) {
        postings[cursor[e.index()]++] = static_cast<std::uint32_t>(slot);
      }
    }
  }

  // Each chunk owns a contiguous range of left-hand slots; chunk outputs are
  // concatenated in chunk order so the result is sorted regardless of threads.
  constexpr std::size_t kSlotsPerChunk = 64;
  const std::size_t chunks = (n + kSlotsPerChunk - 1) / kSlotsPerChunk;
  std::vector<std::vector<PairEntry>> chunk_entries(chunks);
  std::atomic<std::size_t> stored{0};
  const std::size_t cap = options.max_entries;

  parallel_chunks(chunks, options.threads, [&](std::size_t chunk) {
    std::vector<std::uint32_t> count(n, 0);
    std::vector<std::uint32_t> touched;
    auto& out = chunk_entries[chunk];
    const std::size_t begin = chunk * kSlotsPerChunk;
    const std::size_t end = std::min(n, begin + kSlotsPerChunk);
    for (std::size_t i = begin; i < end; ++i) {
      const auto& si = entity_set(profiles[i]);
      for (auto e : si) {
        const auto* first = postings.data() + offset[e.index()];
        const auto* last = postings.data() + offset[e.index() + 1];
        for (const auto* p = std::upper_bound(first, last, static_cast<std::uint32_t>(i));
             p != last; ++p) {
          if (count[*p]++ == 0) touched.push_back(*p);
        }
      }
      std::sort(touched.begin(), touched.end());
      for (auto j : touched) {
        const auto& sj = entity_set(profiles[j]);
        const std::uint32_t shared = count[j];
        out.push_back(PairEntry{profiles[i].user, profiles[j].user, shared,
                                static_cast<std::uint32_t>(si.size() + sj.size() - shared)});
        count[j] = 0;
      }
      if (cap != 0 && stored.fetch_add(touched.size()) + touched.size() > cap) {
        throw CapacityError("pair store exceeded the configured cap of " + std::to_string(cap) +
                            " entries");
      }
      touched.clear();
    }
  });

  SparseSimilarity sim;
  sim.mode = mode;
  sim.universe = n;
  sim.id_bound = profiles.user_universe();
  std::size_t total = 0;
  for (const auto& c : chunk_entries) total += c.size();
  sim.entries.reserve(total);
  for (auto& c : chunk_entries) {
    sim.entries.insert(sim.entries.end(), c.begin(), c.end());
    std::vector<PairEntry>().swap(c);
  }
  return sim;
}

}  // namespace

SparseSimilarity all_pairs(const ProfileSet& profiles, SimilarityMode mode,
                           const AllPairsOptions& options) {
  if (profiles.size() < 2) throw EmptyInputError("all-pairs similarity needs at least two users");
  return visit_sets(mode, [&](auto member) { return all_pairs_impl(profiles, mode, member, options); });
}

namespace {

std::vector<double> sorted_weights(const SparseSimilarity& sim) {
  std::vector<double> w;
  w.reserve(sim.entries.size());
  for (const auto& e : sim.entries) w.push_back(e.weight());
  std::sort(w.begin(), w.end());
  return w;
}

std::uint64_t population_size(const SparseSimilarity& sim, PairPopulation population) {
  return population == PairPopulation::nonzero ? sim.entries.size() : sim.total_pairs();
}

}  // namespace

SimilaritySummary summarize(const SparseSimilarity& sim, PairPopulation population) {
  const std::uint64_t count = population_size(sim, population);
  if (count == 0) throw EmptyInputError("similarity summary over an empty pair population");
  const std::uint64_t zeros = population == PairPopulation::all ? sim.zero_pairs() : 0;

  const auto weights = sorted_weights(sim);
  double sum = 0.0;
  for (double w : weights) sum += w;
  const double mean = sum / static_cast<double>(count);
  double sq = static_cast<double>(zeros) * mean * mean;
  for (double w : weights) sq += (w - mean) * (w - mean);

  // Lower median over zeros followed by the ascending nonzero weights.
  const std::uint64_t mid = (count - 1) / 2;
  const double median = mid < zeros ? 0.0 : weights[mid - zeros];

  SimilaritySummary s;
  s.mode = sim.mode;
  s.population = population;
  s.count = count;
  s.mean = mean;
  s.sd = std::sqrt(sq / static_cast<double>(count));
  s.median = median;
  return s;
}

std::vector<CdfPoint> cdf(const SparseSimilarity& sim, PairPopulation population,
                          std::size_t grid) {
  const std::uint64_t count = population_size(sim, population);
  if (count == 0) throw EmptyInputError("CDF over an empty pair population");
  if (grid == 0) grid = 1;
  const std::uint64_t zeros = population == PairPopulation::all ? sim.zero_pairs() : 0;
  const auto weights = sorted_weights(sim);

  std::vector<double> thresholds;
  thresholds.reserve(grid + 1 + weights.size());
  for (std::size_t k = 0; k <= grid; ++k) {
    thresholds.push_back(static_cast<double>(k) / static_cast<double>(grid));
  }
  thresholds.insert(thresholds.end(), weights.begin(), weights.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  std::vector<CdfPoint> curve;
  curve.reserve(thresholds.size());
  std::size_t below = 0;
  for (double t : thresholds) {
    while (below < weights.size() && weights[below] <= t) ++below;
    const std::uint64_t at_most = zeros + below;
    curve.push_back(CdfPoint{
        t, at_most == count ? 1.0 : static_cast<double>(at_most) / static_cast<double>(count)});
  }
  return curve;
}

double cdf_at(const SparseSimilarity& sim, PairPopulation population, double threshold) {
  const std::uint64_t count = population_size(sim, population);
  if (count == 0) throw EmptyInputError("CDF over an empty pair population");
  std::uint64_t at_most = 0;
  if (population == PairPopulation::all && threshold >= 0.0) at_most = sim.zero_pairs();
  for (const auto& e : sim.entries) {
    if (e.weight() <= threshold) ++at_most;
  }
  return static_cast<double>(at_most) / static_cast<double>(count);
}

double knee_threshold(std::span<const CdfPoint> curve) {
  if (curve.size() < 2) throw EmptyInputError("knee detection needs at least two CDF points");
  const auto& p0 = curve.front();
  const auto& p1 = curve.back();
  const double dx = p1.threshold - p0.threshold;
  const double dy = p1.cumulative - p0.cumulative;
  const double norm = std::hypot(dx, dy);
  double best = -1.0;
  double knee = p0.threshold;
  for (const auto& p : curve) {
    const double d =
        norm == 0.0 ? 0.0
                    : std::abs(dy * (p.threshold - p0.threshold) - dx * (p.cumulative - p0.cumulative)) / norm;
    if (d > best) {
      best = d;
      knee = p.threshold;
    }
  }
  return knee;
}

NeighborIndex::NeighborIndex(const SparseSimilarity& sim, double min_weight)
    : offset_(sim.id_bound + 1, 0) {
  auto keep = [&](const PairEntry& e) { return e.weight() >= min_weight; };
  for (const auto& e : sim.entries) {
    if (!keep(e)) continue;
    ++offset_[e.a.index() + 1];
    ++offset_[e.b.index() + 1];
  }
  for (std::size_t u = 0; u + 1 < offset_.size(); ++u) offset_[u + 1] += offset_[u];
  neighbors_.resize(offset_.back());
  std::vector<std::size_t> cursor(offset_.begin(), offset_.end() - 1);
  for (const auto& e : sim.entries) {
    if (!keep(e)) continue;
    const double w = e.weight();
    neighbors_[cursor[e.a.index()]++] = Neighbor{e.b, w};
    neighbors_[cursor[e.b.index()]++] = Neighbor{e.a, w};
  }
  for (std::size_t u = 0; u + 1 < offset_.size(); ++u) {
    std::sort(neighbors_.begin() + static_cast<std::ptrdiff_t>(offset_[u]),
              neighbors_.begin() + static_cast<std::ptrdiff_t>(offset_[u + 1]),
              [](const Neighbor& x, const Neighbor& y) {
                if (x.weight != y.weight) return x.weight > y.weight;
                return x.user < y.user;
              });
  }
}

std::span<const NeighborIndex::Neighbor> NeighborIndex::neighbors(UserId user) const {
  if (user.index() + 1 >= offset_.size()) return {};
  return {neighbors_.data() + offset_[user.index()], offset_[user.index() + 1] - offset_[user.index()]};
}

std::vector<WindowStats> windowed(const Trace& trace, const WindowOptions& options) {
  if (options.window_days < 1) throw ConfigError("window length must be at least one day");
  const auto records = trace.assignments();
  const DayIndex first_day = utc_day(trace.first_timestamp());
  const DayIndex last_day = utc_day(trace.last_timestamp());
  const DayIndex window_count = (last_day - first_day) / options.window_days + 1;
  const std::size_t id_bound = trace.vocabulary().users.size();

  std::vector<WindowStats> out;
  out.reserve(static_cast<std::size_t>(window_count));
  std::size_t begin = 0;
  for (DayIndex w = 0; w < window_count; ++w) {
    const DayIndex start = first_day + w * options.window_days;
    const Timestamp end_ts = day_start(start + options.window_days);
    std::size_t end = begin;
    while (end < records.size() && records[end].timestamp < end_ts) ++end;

    WindowStats stats;
    stats.window_start = start;
    const std::size_t from = options.cumulative ? 0 : begin;
    if (end > from) {
      const auto profiles = build_profiles(records.subspan(from, end - from), id_bound);
      stats.active_users = profiles.size();
      if (profiles.size() >= 2) {
        const auto sim = all_pairs(profiles, options.mode, options.pairs);
        stats.population = sim.entries.size();
        if (!sim.entries.empty()) {
          std::vector<double> weights;
          weights.reserve(sim.entries.size());
          for (const auto& e : sim.entries) weights.push_back(e.weight());
          stats.quartiles = stats::five_number(std::move(weights));
        }
      }
    }
    out.push_back(stats);
    begin = end;
  }
  return out;
}

}  // namespace tagtrace

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "tagtrace/error.hpp"
#include "tagtrace/similarity.hpp"

using namespace tagtrace;

namespace {

// Builds a trace where each user tags each of their items with the item's name
// as tag, so item and tag sets coincide.
Trace from_sets(const std::vector<std::vector<std::string>>& sets) {
  TraceBuilder b;
  Timestamp ts = 1000;
  for (std::size_t u = 0; u < sets.size(); ++u) {
    for (const auto& e : sets[u]) b.add("u" + std::to_string(u + 1), e, e, ts++);
  }
  return b.build().trace;
}

void expect_matches_oracle(const Trace& t, SimilarityMode mode, unsigned threads = 1) {
  const auto profiles = build_profiles(t);
  AllPairsOptions opts;
  opts.threads = threads;
  const auto sim = all_pairs(profiles, mode, opts);
  const auto expected =
      oracle::all_pairs(oracle::profiles(oracle::events_of(t)), mode == SimilarityMode::user_tag);
  ASSERT_EQ(sim.entries.size(), expected.size());
  for (const auto& e : sim.entries) {
    auto a = t.user_name(e.a);
    auto b = t.user_name(e.b);
    if (b < a) std::swap(a, b);
    const auto it = expected.find({a, b});
    ASSERT_NE(it, expected.end()) << a << "," << b;
    EXPECT_EQ(e.shared, it->second.shared);
    EXPECT_EQ(e.combined, it->second.combined);
    EXPECT_NEAR(e.weight(), it->second.weight, 1e-12);
  }
}

}  // namespace

TEST(PairSimilarity, HandExamples) {
  const auto t = from_sets({{"a", "b", "c"}, {"b", "c", "d", "e"}, {"a", "b", "c"}, {"x"}});
  const auto p = build_profiles(t);
  EXPECT_DOUBLE_EQ(pair_similarity(p[0], p[1], SimilarityMode::user_item), 0.4);
  EXPECT_DOUBLE_EQ(pair_similarity(p[0], p[2], SimilarityMode::user_item), 1.0);
  EXPECT_DOUBLE_EQ(pair_similarity(p[0], p[3], SimilarityMode::user_tag), 0.0);
  EXPECT_THROW(pair_similarity(p[0], p[0], SimilarityMode::user_item), ConfigError);
}

TEST(PairSimilarity, SymmetricAndInRange) {
  const auto t = oracle::random_trace(4, 25, 30, 12, 300);
  const auto p = build_profiles(t);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      for (auto mode : {SimilarityMode::user_item, SimilarityMode::user_tag}) {
        const double w = pair_similarity(p[i], p[j], mode);
        EXPECT_EQ(w, pair_similarity(p[j], p[i], mode));
        EXPECT_GE(w, 0.0);
        EXPECT_LE(w, 1.0);
        const bool equal = mode == SimilarityMode::user_item ? p[i].items == p[j].items : p[i].tags == p[j].tags;
        EXPECT_EQ(w == 1.0, equal);
      }
    }
  }
}

TEST(AllPairs, ThreeUserExample) {
  const auto t = from_sets({{"a", "b"}, {"b", "c"}, {"d"}});
  const auto sim = all_pairs(build_profiles(t), SimilarityMode::user_item);
  ASSERT_EQ(sim.entries.size(), 1u);
  EXPECT_DOUBLE_EQ(sim.entries[0].weight(), 1.0 / 3.0);
  EXPECT_EQ(sim.zero_pairs(), 2u);
  EXPECT_EQ(sim.universe, 3u);
}

TEST(AllPairs, CompleteCooccurrence) {
  std::vector<std::vector<std::string>> sets(30, {"common"});
  for (std::size_t i = 0; i < sets.size(); ++i) sets[i].push_back("own" + std::to_string(i));
  const auto sim = all_pairs(build_profiles(from_sets(sets)), SimilarityMode::user_item);
  EXPECT_EQ(sim.entries.size(), 30u * 29u / 2u);
  EXPECT_EQ(sim.zero_pairs(), 0u);
}

TEST(AllPairs, FewerThanTwoProfilesThrows) {
  const auto t = from_sets({{"a"}});
  EXPECT_THROW(all_pairs(build_profiles(t), SimilarityMode::user_item), EmptyInputError);
}

TEST(AllPairs, CapacityCap) {
  std::vector<std::vector<std::string>> sets(10, {"common"});
  AllPairsOptions opts;
  opts.max_entries = 5;
  EXPECT_THROW(all_pairs(build_profiles(from_sets(sets)), SimilarityMode::user_item, opts), CapacityError);
}

TEST(AllPairs, EntriesSortedPositiveAndOrdered) {
  const auto t = oracle::random_trace(8, 80, 150, 40, 1200);
  const auto sim = all_pairs(build_profiles(t), SimilarityMode::user_tag);
  for (std::size_t i = 0; i < sim.entries.size(); ++i) {
    const auto& e = sim.entries[i];
    EXPECT_LT(e.a, e.b);
    EXPECT_GT(e.weight(), 0.0);
    EXPECT_LE(e.weight(), 1.0);
    if (i > 0) {
      const auto& p = sim.entries[i - 1];
      EXPECT_TRUE(p.a < e.a || (p.a == e.a && p.b < e.b));
    }
  }
}

TEST(AllPairs, MatchesBruteForceOracle) {
  for (std::uint64_t seed = 100; seed < 106; ++seed) {
    const auto t = oracle::random_trace(seed, 200, 600, 120, 5000);
    expect_matches_oracle(t, SimilarityMode::user_item);
    expect_matches_oracle(t, SimilarityMode::user_tag);
  }
}

TEST(AllPairs, ThreadCountDoesNotChangeResult) {
  const auto t = oracle::random_trace(55, 300, 500, 100, 6000);
  const auto profiles = build_profiles(t);
  AllPairsOptions one;
  AllPairsOptions four;
  four.threads = 4;
  const auto a = all_pairs(profiles, SimilarityMode::user_item, one);
  const auto b = all_pairs(profiles, SimilarityMode::user_item, four);
  ASSERT_EQ(a.entries.size(), b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    EXPECT_EQ(a.entries[i].a, b.entries[i].a);
    EXPECT_EQ(a.entries[i].b, b.entries[i].b);
    EXPECT_EQ(a.entries[i].shared, b.entries[i].shared);
  }
  expect_matches_oracle(t, SimilarityMode::user_tag, 3);
}

TEST(Summary, AllPopulationIncludesZeros) {
  const auto t = from_sets({{"a", "b", "c"}, {"b", "c", "d", "e"}, {"z"}});
  // weights: (u1,u2) = 0.4; the two pairs with u3 are zero.
  const auto sim = all_pairs(build_profiles(t), SimilarityMode::user_item);
  const auto nz = summarize(sim, PairPopulation::nonzero);
  EXPECT_EQ(nz.count, 1u);
  EXPECT_DOUBLE_EQ(nz.mean, 0.4);
  const auto all = summarize(sim, PairPopulation::all);
  EXPECT_EQ(all.count, 3u);
  EXPECT_NEAR(all.mean, 0.4 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(all.median, 0.0);
  const double m = 0.4 / 3.0;
  EXPECT_NEAR(all.sd, std::sqrt(((0.4 - m) * (0.4 - m) + 2 * m * m) / 3.0), 1e-15);
}

TEST(Summary, NonzeroDominatesAll) {
  for (std::uint64_t seed = 1; seed < 6; ++seed) {
    const auto t = oracle::random_trace(seed, 60, 200, 50, 600);
    for (auto mode : {SimilarityMode::user_item, SimilarityMode::user_tag}) {
      const auto sim = all_pairs(build_profiles(t), mode);
      if (sim.entries.empty()) continue;
      EXPECT_GE(summarize(sim, PairPopulation::nonzero).mean, summarize(sim, PairPopulation::all).mean);
    }
  }
}

TEST(Summary, EmptyPopulationThrows) {
  const auto t = from_sets({{"a"}, {"b"}});
  const auto sim = all_pairs(build_profiles(t), SimilarityMode::user_item);
  EXPECT_THROW(summarize(sim, PairPopulation::nonzero), EmptyInputError);
  EXPECT_NO_THROW(summarize(sim, PairPopulation::all));
}

TEST(Cdf, HandExample) {
  // weights 0.1, 0.1, 0.4
  SparseSimilarity sim;
  sim.universe = 3;
  sim.entries = {{UserId{0}, UserId{1}, 1, 10}, {UserId{0}, UserId{2}, 1, 10}, {UserId{1}, UserId{2}, 2, 5}};
  EXPECT_NEAR(cdf_at(sim, PairPopulation::nonzero, 0.1), 2.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(cdf_at(sim, PairPopulation::nonzero, 0.4), 1.0);
  EXPECT_DOUBLE_EQ(cdf_at(sim, PairPopulation::nonzero, 0.05), 0.0);
  const auto curve = cdf(sim, PairPopulation::nonzero, 10);
  EXPECT_DOUBLE_EQ(curve.back().threshold, 1.0);
  EXPECT_DOUBLE_EQ(curve.back().cumulative, 1.0);
  bool saw_exact = false;
  for (const auto& p : curve) {
    if (p.threshold == 0.1) {
      EXPECT_NEAR(p.cumulative, 2.0 / 3.0, 1e-15);
      saw_exact = true;
    }
  }
  EXPECT_TRUE(saw_exact);
}

TEST(Cdf, MonotoneEndingAtOne) {
  for (std::uint64_t seed = 1; seed < 6; ++seed) {
    const auto t = oracle::random_trace(seed, 80, 300, 40, 1000);
    const auto sim = all_pairs(build_profiles(t), SimilarityMode::user_item);
    for (auto pop : {PairPopulation::nonzero, PairPopulation::all}) {
      const auto curve = cdf(sim, pop, 50);
      ASSERT_GE(curve.size(), 2u);
      for (std::size_t i = 1; i < curve.size(); ++i) {
        EXPECT_GT(curve[i].threshold, curve[i - 1].threshold);
        EXPECT_GE(curve[i].cumulative, curve[i - 1].cumulative);
      }
      EXPECT_EQ(curve.back().cumulative, 1.0);
      EXPECT_EQ(curve.back().threshold, 1.0);
    }
  }
}

TEST(Cdf, KneeOfSimpleCurve) {
  std::vector<CdfPoint> curve{{0.0, 0.0}, {0.1, 0.9}, {0.5, 0.95}, {1.0, 1.0}};
  EXPECT_DOUBLE_EQ(knee_threshold(curve), 0.1);
  EXPECT_THROW(knee_threshold(std::vector<CdfPoint>{{0.0, 0.0}}), EmptyInputError);
}

TEST(Neighbors, StrongestFirstThenId) {
  SparseSimilarity sim;
  sim.universe = 4;
  sim.id_bound = 4;
  sim.entries = {{UserId{0}, UserId{1}, 1, 4}, {UserId{0}, UserId{2}, 1, 2}, {UserId{0}, UserId{3}, 1, 4}};
  const NeighborIndex index(sim);
  const auto n = index.neighbors(UserId{0});
  ASSERT_EQ(n.size(), 3u);
  EXPECT_EQ(n[0].user, UserId{2});
  EXPECT_EQ(n[1].user, UserId{1});
  EXPECT_EQ(n[2].user, UserId{3});
  EXPECT_EQ(index.neighbors(UserId{3}).size(), 1u);
  const NeighborIndex strong(sim, 0.3);
  EXPECT_EQ(strong.neighbors(UserId{0}).size(), 1u);
}

TEST(Windows, OneDayTraceIsOneWindow) {
  const auto t = from_sets({{"a", "b"}, {"b"}});
  const auto w = windowed(t);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0].population, 1u);
  EXPECT_EQ(w[0].active_users, 2u);
}

TEST(Windows, UsersInDifferentWindowsShareNothing) {
  TraceBuilder b;
  b.add("u1", "i", "t", 1'000'000);
  b.add("u2", "i", "t", 1'000'000 + 40 * kSecondsPerDay);
  const auto w = windowed(b.build().trace);
  ASSERT_EQ(w.size(), 2u);
  for (const auto& s : w) {
    EXPECT_EQ(s.population, 0u);
    EXPECT_FALSE(s.quartiles);
  }
}

TEST(Windows, MatchPerWindowBruteForce) {
  const auto t = oracle::random_trace(77, 120, 300, 60, 4000, 95);
  WindowOptions opts;
  opts.window_days = 30;
  const auto windows = windowed(t, opts);
  const auto events = oracle::events_of(t);
  const std::int64_t first_day = events.front().timestamp / 86400;
  ASSERT_EQ(windows.size(), std::size_t((events.back().timestamp / 86400 - first_day) / 30 + 1));
  for (std::size_t w = 0; w < windows.size(); ++w) {
    std::vector<oracle::Event> slice;
    for (const auto& e : events) {
      if ((e.timestamp / 86400 - first_day) / 30 == std::int64_t(w)) slice.push_back(e);
    }
    const auto pairs = oracle::all_pairs(oracle::profiles(slice), false);
    EXPECT_EQ(windows[w].population, pairs.size());
    EXPECT_EQ(windows[w].window_start, first_day + 30 * std::int64_t(w));
    if (pairs.empty()) {
      EXPECT_FALSE(windows[w].quartiles);
      continue;
    }
    std::vector<double> weights;
    for (const auto& [k, v] : pairs) weights.push_back(v.weight);
    const auto expected = oracle::five_number(weights);
    ASSERT_TRUE(windows[w].quartiles);
    const auto& q = *windows[w].quartiles;
    EXPECT_DOUBLE_EQ(q.min, expected[0]);
    EXPECT_DOUBLE_EQ(q.q1, expected[1]);
    EXPECT_DOUBLE_EQ(q.median, expected[2]);
    EXPECT_DOUBLE_EQ(q.q3, expected[3]);
    EXPECT_DOUBLE_EQ(q.max, expected[4]);
    EXPECT_LE(q.min, q.q1);
    EXPECT_LE(q.q1, q.median);
    EXPECT_LE(q.median, q.q3);
    EXPECT_LE(q.q3, q.max);
    EXPECT_LE(q.max, 1.0);
  }
}

TEST(Windows, CumulativeProfilesGrow) {
  const auto t = oracle::random_trace(78, 60, 200, 40, 2000, 90);
  WindowOptions opts;
  opts.cumulative = true;
  const auto windows = windowed(t, opts);
  for (std::size_t i = 1; i < windows.size(); ++i) {
    EXPECT_GE(windows[i].active_users, windows[i - 1].active_users);
  }
}

TEST(Modes, Names) {
  EXPECT_EQ(parse_similarity_mode("user-item"), SimilarityMode::user_item);
  EXPECT_EQ(parse_similarity_mode("tag"), SimilarityMode::user_tag);
  EXPECT_EQ(to_string(SimilarityMode::user_tag), "user-tag");
  EXPECT_EQ(parse_population("all"), PairPopulation::all);
  EXPECT_THROW(parse_similarity_mode("cosine"), ConfigError);
}

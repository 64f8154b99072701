#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "tagtrace/graph.hpp"
#include "tagtrace/recommender.hpp"
#include "tagtrace/reuse.hpp"
#include "tagtrace/similarity.hpp"
#include "tagtrace/synth.hpp"
#include "tagtrace/trace_io.hpp"

// CSV and JSON renderings of every report. CSV numbers use the shortest
// decimal text that round-trips to the same double, so files are stable
// byte-for-byte across runs.

namespace tagtrace {

/// Shortest round-trip decimal representation.
std::string format_number(double value);

// --- CSV -------------------------------------------------------------------

/// `day,total,new_count,reused_count,reused_pct`
void write_reuse_csv(std::ostream& out, std::span<const DailyReuseRecord> series);

/// `user_a,user_b,weight`, order-normalized by user id.
void write_pairs_csv(std::ostream& out, const SparseSimilarity& sim, const Vocabulary& vocab);

/// `threshold,cum_prob`
void write_cdf_csv(std::ostream& out, std::span<const CdfPoint> curve);

/// `window_start,population,min,q1,median,q3,max`; empty windows leave the
/// quartile columns blank.
void write_windows_csv(std::ostream& out, std::span<const WindowStats> windows);

/// `user_a,user_b,weight`
void write_edges_csv(std::ostream& out, const InterestGraph& graph, const Vocabulary& vocab);

/// `user,degree,component,triangles,clustering`
void write_nodes_csv(std::ostream& out, const InterestGraph& graph, const Vocabulary& vocab);

/// `user,hits,success,reused_only_applicable`
void write_outcomes_csv(std::ostream& out, const EvalReport& report, const Vocabulary& vocab);

// --- JSON ------------------------------------------------------------------

std::string to_json(const ValidationReport& report);
std::string to_json(const ReuseSummary& summary);
std::string to_json(const SimilaritySummary& summary);
std::string to_json(const TopologyReport& report);
std::string to_json(const EvalReport& report);
std::string to_json(const GroundTruth& truth);

}  // namespace tagtrace

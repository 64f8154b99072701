#include "tagtrace/export.hpp"

#include <charconv>
#include <ostream>

#include "json.hpp"
#include "tagtrace/error.hpp"

namespace tagtrace {

using nlohmann::ordered_json;

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

namespace {

void check(std::ostream& out) {
  if (!out) throw IoError("write error while emitting CSV");
}

struct Field {
  const std::string& text;
};

std::ostream& operator<<(std::ostream& out, Field f) {
  if (f.text.find_first_of(",\"\r\n") == std::string::npos) return out << f.text;
  out << '"';
  for (char c : f.text) {
    if (c == '"') out << '"';
    out << c;
  }
  return out << '"';
}

Field name(const Dictionary& dict, std::uint32_t id) { return Field{dict.name(id)}; }

}  // namespace

void write_reuse_csv(std::ostream& out, std::span<const DailyReuseRecord> series) {
  out << "day,total,new_count,reused_count,reused_pct\n";
  for (const auto& r : series) {
    out << format_date(r.day) << ',' << r.total << ',' << r.new_count << ',' << r.reused_count << ','
        << format_number(r.reused_pct) << '\n';
  }
  check(out);
}

void write_pairs_csv(std::ostream& out, const SparseSimilarity& sim, const Vocabulary& vocab) {
  out << "user_a,user_b,weight\n";
  for (const auto& e : sim.entries) {
    out << name(vocab.users, e.a.value) << ',' << name(vocab.users, e.b.value) << ','
        << format_number(e.weight()) << '\n';
  }
  check(out);
}

void write_cdf_csv(std::ostream& out, std::span<const CdfPoint> curve) {
  out << "threshold,cum_prob\n";
  for (const auto& p : curve) out << format_number(p.threshold) << ',' << format_number(p.cumulative) << '\n';
  check(out);
}

void write_windows_csv(std::ostream& out, std::span<const WindowStats> windows) {
  out << "window_start,population,min,q1,median,q3,max\n";
  for (const auto& w : windows) {
    out << format_date(w.window_start) << ',' << w.population;
    if (w.quartiles) {
      const auto& q = *w.quartiles;
      out << ',' << format_number(q.min) << ',' << format_number(q.q1) << ',' << format_number(q.median)
          << ',' << format_number(q.q3) << ',' << format_number(q.max);
    } else {
      out << ",,,,,";
    }
    out << '\n';
  }
  check(out);
}

void write_edges_csv(std::ostream& out, const InterestGraph& graph, const Vocabulary& vocab) {
  out << "user_a,user_b,weight\n";
  for (const auto& e : graph.edges()) {
    out << name(vocab.users, e.a.value) << ',' << name(vocab.users, e.b.value) << ','
        << format_number(e.weight) << '\n';
  }
  check(out);
}

void write_nodes_csv(std::ostream& out, const InterestGraph& graph, const Vocabulary& vocab) {
  out << "user,degree,component,triangles,clustering\n";
  const auto stats = node_stats(graph);
  for (std::uint32_t v = 0; v < stats.size(); ++v) {
    const auto& s = stats[v];
    out << name(vocab.users, v) << ',' << s.degree << ',' << s.component << ',' << s.triangles << ',';
    if (s.clustering) out << format_number(*s.clustering);
    out << '\n';
  }
  check(out);
}

void write_outcomes_csv(std::ostream& out, const EvalReport& report, const Vocabulary& vocab) {
  out << "user,hits,success,reused_only_applicable\n";
  for (const auto& o : report.per_user) {
    out << name(vocab.users, o.user.value) << ',' << o.hits << ',' << (o.success ? 1 : 0) << ','
        << (o.reused_only_applicable ? 1 : 0) << '\n';
  }
  check(out);
}

namespace {

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

std::string to_json(const ValidationReport& r) {
  ordered_json j;
  j["total_lines"] = r.total_lines;
  j["parsed"] = r.parsed;
  j["rejected"] = r.rejected;
  j["rejected_by_reason"] = {{"malformed", r.malformed},
                             {"empty_tag", r.empty_tag},
                             {"bad_timestamp", r.bad_timestamp},
                             {"duplicate", r.duplicate}};
  j["comment_lines"] = r.comment_lines;
  j["span"] = {{"first", r.first_timestamp},
               {"last", r.last_timestamp},
               {"first_day", format_date(utc_day(r.first_timestamp))},
               {"last_day", format_date(utc_day(r.last_timestamp))}};
  j["users"] = r.users;
  j["items"] = r.items;
  j["tags"] = r.tags;
  j["assignments"] = r.parsed;
  return j.dump(2);
}

std::string to_json(const ReuseSummary& s) {
  ordered_json j;
  j["dimension"] = std::string(to_string(s.dimension));
  j["days"] = s.days;
  j["mean_abs"] = s.mean_abs;
  j["sd_abs"] = s.sd_abs;
  j["median_abs"] = s.median_abs;
  j["mean_pct"] = s.mean_pct;
  j["sd_pct"] = s.sd_pct;
  j["median_pct"] = s.median_pct;
  return j.dump(2);
}

std::string to_json(const SimilaritySummary& s) {
  ordered_json j;
  j["mode"] = std::string(to_string(s.mode));
  j["population"] = std::string(to_string(s.population));
  j["count"] = s.count;
  j["mean"] = s.mean;
  j["sd"] = s.sd;
  j["median"] = s.median;
  return j.dump(2);
}

std::string to_json(const TopologyReport& r) {
  ordered_json j;
  j["nodes"] = r.nodes;
  j["edges"] = r.edges;
  j["isolated"] = r.isolated;
  j["isolated_fraction"] = r.isolated_fraction;
  j["components"] = r.components;
  ordered_json hist = ordered_json::array();
  for (const auto& b : r.component_histogram) hist.push_back({{"size", b.size}, {"count", b.count}});
  j["component_histogram"] = std::move(hist);
  j["giant_size"] = r.giant_size;
  j["small_component_nodes"] = r.small_component_nodes;
  j["small_component_fraction"] = r.small_component_fraction;
  j["triangles"] = r.triangles;
  j["avg_clustering_all"] = optional_number(r.avg_clustering_all);
  j["avg_clustering_core"] = optional_number(r.avg_clustering_core);
  j["avg_clustering_all_zero_filled"] = r.avg_clustering_all_zero_filled;
  j["avg_clustering_core_zero_filled"] = r.avg_clustering_core_zero_filled;
  j["clustering_defined_all"] = r.clustering_defined_all;
  j["clustering_defined_core"] = r.clustering_defined_core;
  return j.dump(2);
}

std::string to_json(const EvalReport& r) {
  ordered_json j;
  j["users_evaluated"] = r.users_evaluated;
  j["successes"] = r.successes;
  j["success_rate"] = r.success_rate;
  j["reused_only_users"] = r.reused_only_users;
  j["reused_only_successes"] = r.reused_only_successes;
  j["success_rate_reused_only"] = optional_number(r.success_rate_reused_only);
  j["cold_start_users"] = r.cold_start_users;
  j["cutoff"] = r.cutoff;
  j["parameters"] = {{"k", r.params.k},
                     {"n", r.params.n},
                     {"mode", std::string(to_string(r.params.mode))},
                     {"similarity", std::string(to_string(r.params.similarity))},
                     {"threshold", r.params.threshold}};
  return j.dump(2);
}

std::string to_json(const GroundTruth& t) {
  ordered_json j;
  const auto& c = t.config;
  j["config"] = {{"seed", c.seed},
                 {"users", c.users},
                 {"days", c.days},
                 {"events_per_day", c.events_per_day},
                 {"item_reuse_p", c.item_reuse_p},
                 {"tag_reuse_p", c.tag_reuse_p},
                 {"communities", c.communities},
                 {"intra_community_item_pool", c.intra_community_item_pool},
                 {"intra_community_tag_pool", c.intra_community_tag_pool},
                 {"noise_p", c.noise_p},
                 {"start", c.start}};
  ordered_json members = ordered_json::object();
  for (const auto& [user, community] : t.community_of) members[user] = community;
  j["community_of"] = std::move(members);
  return j.dump(2);
}

}  // namespace tagtrace

#include "tagtrace/reuse.hpp"

#include <algorithm>
#include <string>

#include "tagtrace/error.hpp"
#include "tagtrace/stats.hpp"

namespace tagtrace {

Dimension parse_dimension(std::string_view name) {
  if (name == "item") return Dimension::item;
  if (name == "tag") return Dimension::tag;
  if (name == "user") return Dimension::user;
  throw ConfigError("unknown dimension '" + std::string(name) + "'");
}

std::string_view to_string(Dimension dimension) {
  switch (dimension) {
    case Dimension::item:
      return "item";
    case Dimension::tag:
      return "tag";
    case Dimension::user:
      return "user";
  }
  return "unknown";
}

void classify(const Trace& trace, const std::function<void(const ClassifiedAssignment&)>& sink) {
  const auto& vocab = trace.vocabulary();
  std::vector<bool> seen_item(vocab.items.size(), false);
  std::vector<bool> seen_tag(vocab.tags.size(), false);
  std::vector<bool> seen_user(vocab.users.size(), false);

  ClassifiedAssignment out;
  for (const auto& a : trace.assignments()) {
    out.assignment = a;
    out.item_new = !seen_item[a.item.index()];
    out.tag_new = !seen_tag[a.tag.index()];
    out.user_new = !seen_user[a.user.index()];
    seen_item[a.item.index()] = true;
    seen_tag[a.tag.index()] = true;
    seen_user[a.user.index()] = true;
    sink(out);
  }
}

std::vector<ClassifiedAssignment> classify(const Trace& trace) {
  std::vector<ClassifiedAssignment> out;
  out.reserve(trace.size());
  classify(trace, [&](const ClassifiedAssignment& c) { out.push_back(c); });
  return out;
}

namespace {

std::uint32_t entity_of(const TagAssignment& a, Dimension d) {
  switch (d) {
    case Dimension::item:
      return a.item.value;
    case Dimension::tag:
      return a.tag.value;
    case Dimension::user:
      return a.user.value;
  }
  return 0;
}

void finish(DailyReuseRecord& r) {
  r.reused_count = r.total - r.new_count;
  r.reused_pct = 100.0 * static_cast<double>(r.reused_count) / static_cast<double>(r.total);
}

std::vector<DailyReuseRecord> assignment_series(std::span<const ClassifiedAssignment> classified,
                                                Dimension dimension) {
  std::vector<DailyReuseRecord> series;
  for (const auto& c : classified) {
    const DayIndex day = utc_day(c.assignment.timestamp);
    if (series.empty() || series.back().day != day) {
      if (!series.empty()) finish(series.back());
      series.push_back(DailyReuseRecord{day});
    }
    auto& r = series.back();
    ++r.total;
    if (c.is_new(dimension)) ++r.new_count;
  }
  if (!series.empty()) finish(series.back());
  return series;
}

// Each entity counts once per day. An entity is new on the day it first
// appears and reused on every later day it appears.
std::vector<DailyReuseRecord> distinct_series(std::span<const ClassifiedAssignment> classified,
                                              Dimension dimension) {
  std::uint32_t universe = 0;
  for (const auto& c : classified) universe = std::max(universe, entity_of(c.assignment, dimension) + 1);
  std::vector<DayIndex> last_day(universe, 0);
  std::vector<bool> touched(universe, false);

  std::vector<DailyReuseRecord> series;
  for (const auto& c : classified) {
    const DayIndex day = utc_day(c.assignment.timestamp);
    if (series.empty() || series.back().day != day) {
      if (!series.empty()) finish(series.back());
      series.push_back(DailyReuseRecord{day});
    }
    const auto e = entity_of(c.assignment, dimension);
    if (touched[e] && last_day[e] == day) continue;
    touched[e] = true;
    last_day[e] = day;
    auto& r = series.back();
    ++r.total;
    if (c.is_new(dimension)) ++r.new_count;
  }
  if (!series.empty()) finish(series.back());
  return series;
}

}  // namespace

std::vector<DailyReuseRecord> daily_series(std::span<const ClassifiedAssignment> classified,
                                           Dimension dimension, CountingMode counting) {
  return counting == CountingMode::assignments ? assignment_series(classified, dimension)
                                               : distinct_series(classified, dimension);
}

ReuseSummary summarize(std::span<const DailyReuseRecord> series, Dimension dimension) {
  if (series.empty()) throw EmptyInputError("reuse summary over an empty daily series");
  std::vector<double> abs_values;
  std::vector<double> pct_values;
  abs_values.reserve(series.size());
  pct_values.reserve(series.size());
  for (const auto& r : series) {
    abs_values.push_back(static_cast<double>(r.reused_count));
    pct_values.push_back(r.reused_pct);
  }
  const auto a = stats::summarize(abs_values);
  const auto p = stats::summarize(pct_values);
  ReuseSummary s;
  s.dimension = dimension;
  s.days = series.size();
  s.mean_abs = a.mean;
  s.sd_abs = a.sd;
  s.median_abs = a.median;
  s.mean_pct = p.mean;
  s.sd_pct = p.sd;
  s.median_pct = p.median;
  return s;
}

}  // namespace tagtrace

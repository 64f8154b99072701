#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "tagtrace/timeutil.hpp"
#include "tagtrace/trace.hpp"

namespace tagtrace {

enum class Dimension { item, tag, user };

/// Throws ConfigError for an unknown name.
Dimension parse_dimension(std::string_view name);
std::string_view to_string(Dimension dimension);

/// An assignment with first-occurrence flags. A flag is set iff no earlier
/// assignment in (timestamp, seq) order mentions the same entity.
struct ClassifiedAssignment {
  TagAssignment assignment;
  bool item_new = false;
  bool tag_new = false;
  bool user_new = false;

  bool is_new(Dimension d) const noexcept {
    switch (d) {
      case Dimension::item:
        return item_new;
      case Dimension::tag:
        return tag_new;
      case Dimension::user:
        return user_new;
    }
    return false;
  }
};

/// Streaming form: calls `sink` once per assignment, in trace order.
void classify(const Trace& trace, const std::function<void(const ClassifiedAssignment&)>& sink);

std::vector<ClassifiedAssignment> classify(const Trace& trace);

struct DailyReuseRecord {
  DayIndex day = 0;
  std::size_t total = 0;
  std::size_t new_count = 0;
  std::size_t reused_count = 0;
  double reused_pct = 0.0;
};

enum class CountingMode {
  assignments,        // every assignment counts once
  distinct_entities,  // each entity counts once per day; new iff first seen that day
};

/// One record per UTC day with activity, ascending by day.
std::vector<DailyReuseRecord> daily_series(std::span<const ClassifiedAssignment> classified,
                                           Dimension dimension,
                                           CountingMode counting = CountingMode::assignments);

struct ReuseSummary {
  Dimension dimension = Dimension::item;
  std::size_t days = 0;
  double mean_abs = 0.0;
  double sd_abs = 0.0;
  double median_abs = 0.0;
  double mean_pct = 0.0;
  double sd_pct = 0.0;
  double median_pct = 0.0;
};

/// Throws EmptyInputError on an empty series.
ReuseSummary summarize(std::span<const DailyReuseRecord> series, Dimension dimension);

}  // namespace tagtrace

#include "tagtrace/stats.hpp"

#include <algorithm>
#include <cmath>

#include "tagtrace/error.hpp"

namespace tagtrace::stats {

namespace {

void require_nonempty(std::span<const double> values) {
  if (values.empty()) throw EmptyInputError("statistics requested over an empty sample");
}

}  // namespace

double mean(std::span<const double> values) {
  require_nonempty(values);
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double population_sd(std::span<const double> values) {
  const double m = mean(values);
  double acc = 0.0;
  for (double v : values) acc += (v - m) * (v - m);
  return std::sqrt(acc / static_cast<double>(values.size()));
}

double lower_median(std::span<const double> values) {
  require_nonempty(values);
  std::vector<double> copy(values.begin(), values.end());
  const auto mid = copy.begin() + static_cast<std::ptrdiff_t>((copy.size() - 1) / 2);
  std::nth_element(copy.begin(), mid, copy.end());
  return *mid;
}

double nearest_rank(std::span<const double> sorted, double p) {
  require_nonempty(sorted);
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(p * n));
  if (rank == 0) rank = 1;
  if (rank > sorted.size()) rank = sorted.size();
  return sorted[rank - 1];
}

Summary summarize(std::span<const double> values) {
  Summary s;
  s.count = values.size();
  s.mean = mean(values);
  s.sd = population_sd(values);
  s.median = lower_median(values);
  return s;
}

FiveNumber five_number(std::vector<double> values) {
  require_nonempty(values);
  std::sort(values.begin(), values.end());
  FiveNumber f;
  f.min = values.front();
  f.q1 = nearest_rank(values, 0.25);
  f.median = nearest_rank(values, 0.5);
  f.q3 = nearest_rank(values, 0.75);
  f.max = values.back();
  return f;
}

}  // namespace tagtrace::stats

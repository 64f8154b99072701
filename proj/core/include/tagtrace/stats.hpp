#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tagtrace::stats {

// Descriptive statistics shared by the reuse, similarity and window reports.
// Conventions: standard deviation divides by n; the median of an even-sized
// sample is the lower of the two middle values; quantiles are nearest-rank.

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;
  double median = 0.0;
};

/// Throws EmptyInputError on an empty sample. Does not require sorted input.
Summary summarize(std::span<const double> values);

double mean(std::span<const double> values);
double population_sd(std::span<const double> values);

/// Lower median; `values` need not be sorted.
double lower_median(std::span<const double> values);

/// Nearest-rank quantile of an ascending sample: element ceil(p*n) - 1,
/// clamped to the first element for p == 0.
double nearest_rank(std::span<const double> sorted, double p);

struct FiveNumber {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

/// Sorts a copy. Throws EmptyInputError on an empty sample.
FiveNumber five_number(std::vector<double> values);

}  // namespace tagtrace::stats

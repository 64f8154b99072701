#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "tagtrace/timeutil.hpp"
#include "tagtrace/trace.hpp"

namespace tagtrace {

enum class TraceFormat {
  canonical_tsv,   // user \t item \t tag \t timestamp
  citeulike_pipe,  // item|user|timestamp|tag
};

/// Throws ConfigError for an unknown name.
TraceFormat parse_trace_format(std::string_view name);
std::string_view to_string(TraceFormat format);

/// Field positions within one record. CiteULike dumps have shipped with more
/// than one column order, so the layout is overridable.
struct ColumnLayout {
  char delimiter = '\t';
  std::size_t field_count = 4;
  std::size_t user = 0;
  std::size_t item = 1;
  std::size_t tag = 2;
  std::size_t timestamp = 3;

  static ColumnLayout defaults_for(TraceFormat format);
};

struct ParseOptions {
  TraceFormat format = TraceFormat::canonical_tsv;
  std::optional<ColumnLayout> layout;
  /// Unset: detected from the first record whose timestamp parses.
  std::optional<TimestampStyle> timestamp_style;
};

/// Accounts for every non-comment, non-blank input line.
struct ValidationReport {
  std::size_t total_lines = 0;
  std::size_t parsed = 0;
  std::size_t rejected = 0;
  std::size_t malformed = 0;
  std::size_t empty_tag = 0;
  std::size_t bad_timestamp = 0;
  std::size_t duplicate = 0;
  std::size_t comment_lines = 0;
  Timestamp first_timestamp = 0;
  Timestamp last_timestamp = 0;
  std::size_t users = 0;
  std::size_t items = 0;
  std::size_t tags = 0;
};

struct ParseResult {
  Trace trace;
  ValidationReport report;
};

/// Single streaming pass over `in`. Malformed lines are counted, never fatal.
/// Throws IoError if the stream fails and EmptyInputError if no record parses.
ParseResult parse_trace(std::istream& in, const ParseOptions& options = {});

/// Opens `path` ("-" reads standard input). Throws IoError if it cannot be read.
ParseResult parse_trace_file(const std::filesystem::path& path, const ParseOptions& options = {});

/// Canonical TSV with epoch-second timestamps, in trace order.
void write_canonical_tsv(const Trace& trace, std::ostream& out);

}  // namespace tagtrace

#include "tagtrace/trace_io.hpp"

#include <array>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "tagtrace/error.hpp"

namespace tagtrace {

TraceFormat parse_trace_format(std::string_view name) {
  if (name == "canonical-tsv" || name == "tsv") return TraceFormat::canonical_tsv;
  if (name == "citeulike-pipe" || name == "citeulike") return TraceFormat::citeulike_pipe;
  throw ConfigError("unknown trace format '" + std::string(name) + "'");
}

std::string_view to_string(TraceFormat format) {
  return format == TraceFormat::canonical_tsv ? "canonical-tsv" : "citeulike-pipe";
}

ColumnLayout ColumnLayout::defaults_for(TraceFormat format) {
  ColumnLayout layout;
  if (format == TraceFormat::citeulike_pipe) {
    layout.delimiter = '|';
    layout.item = 0;
    layout.user = 1;
    layout.timestamp = 2;
    layout.tag = 3;
  }
  return layout;
}

namespace {

void validate_layout(const ColumnLayout& layout) {
  const std::array<std::size_t, 4> columns{layout.user, layout.item, layout.tag, layout.timestamp};
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] >= layout.field_count) {
      throw ConfigError("column index outside the record's field count");
    }
    for (std::size_t j = i + 1; j < columns.size(); ++j) {
      if (columns[i] == columns[j]) throw ConfigError("two fields mapped to the same column");
    }
  }
}

// Splits on `delim` into at most `limit + 1` fields; returns the field count seen.
std::size_t split(std::string_view line, char delim, std::vector<std::string_view>& fields,
                  std::size_t limit) {
  fields.clear();
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
    if (fields.size() > limit) break;
  }
  return fields.size();
}

}  // namespace

ParseResult parse_trace(std::istream& in, const ParseOptions& options) {
  const ColumnLayout layout = options.layout.value_or(ColumnLayout::defaults_for(options.format));
  validate_layout(layout);

  ValidationReport report;
  std::optional<TimestampStyle> style = options.timestamp_style;
  TraceBuilder builder;
  std::vector<std::string_view> fields;
  std::string line;
  std::uint64_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (trim(view).empty() || view.front() == '#') {
      ++report.comment_lines;
      continue;
    }
    ++report.total_lines;
    if (split(view, layout.delimiter, fields, layout.field_count) != layout.field_count) {
      ++report.malformed;
      continue;
    }
    const std::string_view ts_field = trim(fields[layout.timestamp]);
    if (!style) style = detect_timestamp_style(ts_field);
    std::optional<Timestamp> ts;
    if (style) ts = parse_timestamp(ts_field, *style);

    // A missing user or item outranks a bad timestamp, which outranks an empty tag.
    if (trim(fields[layout.user]).empty() || trim(fields[layout.item]).empty()) {
      ++report.malformed;
      continue;
    }
    if (!ts || *ts < 0) {
      ++report.bad_timestamp;
      continue;
    }
    switch (builder.add(fields[layout.user], fields[layout.item], fields[layout.tag], *ts,
                        line_no)) {
      case TraceBuilder::AddResult::accepted:
        break;
      case TraceBuilder::AddResult::malformed:
        ++report.malformed;
        break;
      case TraceBuilder::AddResult::empty_tag:
        ++report.empty_tag;
        break;
      case TraceBuilder::AddResult::bad_timestamp:
        ++report.bad_timestamp;
        break;
    }
  }
  if (in.bad()) throw IoError("read error while parsing trace");

  auto output = builder.build();
  report.duplicate = output.duplicates;
  report.rejected = report.malformed + report.empty_tag + report.bad_timestamp + report.duplicate;
  report.parsed = report.total_lines - report.rejected;
  report.first_timestamp = output.trace.first_timestamp();
  report.last_timestamp = output.trace.last_timestamp();
  report.users = output.trace.users().size();
  report.items = output.trace.items().size();
  report.tags = output.trace.tags().size();
  return ParseResult{std::move(output.trace), report};
}

ParseResult parse_trace_file(const std::filesystem::path& path, const ParseOptions& options) {
  if (path == "-") return parse_trace(std::cin, options);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open trace file '" + path.string() + "'");
  return parse_trace(in, options);
}

void write_canonical_tsv(const Trace& trace, std::ostream& out) {
  std::string buf;
  for (const auto& a : trace.assignments()) {
    buf.clear();
    buf.append(trace.user_name(a.user)).push_back('\t');
    buf.append(trace.item_name(a.item)).push_back('\t');
    buf.append(trace.tag_name(a.tag)).push_back('\t');
    buf.append(std::to_string(a.timestamp)).push_back('\n');
    out << buf;
  }
  if (!out) throw IoError("write error while emitting trace");
}

}  // namespace tagtrace

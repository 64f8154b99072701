#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "output.hpp"
#include "tagtrace/error.hpp"
#include "tagtrace/export.hpp"
#include "tagtrace/graph.hpp"
#include "tagtrace/recommender.hpp"
#include "tagtrace/reuse.hpp"
#include "tagtrace/similarity.hpp"
#include "tagtrace/synth.hpp"
#include "tagtrace/trace_io.hpp"

namespace tagtrace::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string version_string() {
  return std::string("tagtrace ") + TAGTRACE_VERSION + " (" + TAGTRACE_BUILD_TYPE + ", " __DATE__ ")";
}

namespace {

constexpr const char* kOutputDirEnv = "TAGTRACE_OUTPUT_DIR";

struct InputOptions {
  std::string path = "-";
  std::string format = "canonical-tsv";
  std::vector<std::string> columns;
  std::string delimiter;
};

struct Options {
  InputOptions input;
  std::string out_dir;
  unsigned threads = 1;
  std::size_t max_pairs = AllPairsOptions{}.max_entries;

  // reuse
  std::string dimension = "all";
  bool distinct = false;
  // similarity / windows / graph
  std::string mode = "user-item";
  std::string population = "nonzero";
  std::size_t grid = 100;
  bool skip_pairs = false;
  int window_days = 30;
  bool cumulative = false;
  std::optional<double> threshold;
  bool knee = false;
  // recommend
  std::optional<Timestamp> cutoff;
  std::optional<double> train_fraction;
  std::size_t k = 20;
  std::size_t n = 10;
  std::string rec_mode = "items";
  std::string rec_similarity = "user-item";
  double neighbor_threshold = 0.0;
  bool per_user = false;
  // synth
  GenConfig gen;
  std::string trace_out = "-";
  std::string truth_out;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void report_error(std::ostream& err, std::string_view kind, const std::string& message) {
  ordered_json j;
  j["error"] = std::string(kind);
  j["message"] = message;
  err << j.dump() << '\n';
}

ParseOptions parse_options(const InputOptions& in) {
  ParseOptions po;
  po.format = parse_trace_format(in.format);
  if (in.columns.empty() && in.delimiter.empty()) return po;

  ColumnLayout layout = ColumnLayout::defaults_for(po.format);
  if (!in.delimiter.empty()) {
    if (in.delimiter == "\\t" || in.delimiter == "tab") {
      layout.delimiter = '\t';
    } else if (in.delimiter.size() == 1) {
      layout.delimiter = in.delimiter.front();
    } else {
      throw UsageError("--delimiter takes a single character");
    }
  }
  if (!in.columns.empty()) {
    layout.field_count = in.columns.size();
    bool user = false, item = false, tag = false, ts = false;
    for (std::size_t i = 0; i < in.columns.size(); ++i) {
      const auto& c = in.columns[i];
      if (c == "user") {
        layout.user = i;
        user = true;
      } else if (c == "item") {
        layout.item = i;
        item = true;
      } else if (c == "tag") {
        layout.tag = i;
        tag = true;
      } else if (c == "timestamp") {
        layout.timestamp = i;
        ts = true;
      } else if (c != "-" && c != "skip") {
        throw UsageError("unknown column name '" + c + "' in --columns");
      }
    }
    if (!(user && item && tag && ts)) {
      throw UsageError("--columns must name user, item, tag and timestamp");
    }
  }
  po.layout = layout;
  return po;
}

fs::path output_dir(const Options& o) {
  if (!o.out_dir.empty()) return o.out_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return ".";
}

ParseResult load(const Options& o, Streams& s) {
  const auto po = parse_options(o.input);
  if (o.input.path == "-") return parse_trace(s.in, po);
  return parse_trace_file(o.input.path, po);
}

AllPairsOptions pair_options(const Options& o) {
  AllPairsOptions p;
  p.max_entries = o.max_pairs;
  p.threads = o.threads;
  return p;
}

std::vector<Dimension> dimensions(const Options& o) {
  if (o.dimension == "all") return {Dimension::item, Dimension::tag, Dimension::user};
  return {parse_dimension(o.dimension)};
}

double default_threshold(SimilarityMode mode) {
  return mode == SimilarityMode::user_item ? 0.05 : 0.03;
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_validate(const Options& o, Streams& s) {
  const auto parsed = load(o, s);
  const auto json = to_json(parsed.report);
  if (!o.out_dir.empty() || std::getenv(kOutputDirEnv) != nullptr) {
    const auto dir = output_dir(o);
    ensure_directory(dir);
    write_text(dir / "validation.json", json);
  }
  s.out << json << '\n';
  return kExitOk;
}

ordered_json reuse_section(const Trace& trace, const std::vector<Dimension>& dims, bool distinct,
                           const fs::path* dir, std::ostream* table) {
  const auto classified = classify(trace);
  const auto counting = distinct ? CountingMode::distinct_entities : CountingMode::assignments;
  ordered_json summaries = ordered_json::array();
  if (table != nullptr) {
    *table << "dimension  statistic      absolute (percent)\n";
  }
  for (auto d : dims) {
    const auto series = daily_series(classified, d, counting);
    const auto summary = summarize(series, d);
    if (dir != nullptr) {
      write_atomically(*dir / ("reuse_" + std::string(to_string(d)) + ".csv"),
                       [&](std::ostream& out) { write_reuse_csv(out, series); });
    }
    summaries.push_back(ordered_json::parse(to_json(summary)));
    if (table != nullptr) {
      const std::string label = d == Dimension::item ? "items" : d == Dimension::tag ? "tags" : "users";
      *table << std::left << std::setw(11) << label << std::setw(15) << "average"
             << fixed(summary.mean_abs, 2) << " (" << fixed(summary.mean_pct, 2) << "%)\n"
             << std::setw(11) << "" << std::setw(15) << "s.deviation" << fixed(summary.sd_abs, 2)
             << " (" << fixed(summary.sd_pct, 2) << "%)\n"
             << std::setw(11) << "" << std::setw(15) << "median" << fixed(summary.median_abs, 2)
             << " (" << fixed(summary.median_pct, 2) << "%)\n";
    }
  }
  return summaries;
}

int cmd_reuse(const Options& o, Streams& s) {
  const auto dims = dimensions(o);
  const auto parsed = load(o, s);
  const auto dir = output_dir(o);
  ensure_directory(dir);
  const auto summaries = reuse_section(parsed.trace, dims, o.distinct, &dir, &s.out);
  ordered_json j;
  j["counting"] = o.distinct ? "distinct" : "assignments";
  j["summaries"] = summaries;
  write_text(dir / "reuse_summary.json", j.dump(2));
  return kExitOk;
}

int cmd_similarity(const Options& o, Streams& s) {
  const auto mode = parse_similarity_mode(o.mode);
  const auto population = parse_population(o.population);
  const auto parsed = load(o, s);
  const auto dir = output_dir(o);
  ensure_directory(dir);

  const auto profiles = build_profiles(parsed.trace);
  const auto sim = all_pairs(profiles, mode, pair_options(o));
  const std::string suffix(to_string(mode));
  if (!o.skip_pairs) {
    write_atomically(dir / ("pairs_" + suffix + ".csv"),
                     [&](std::ostream& out) { write_pairs_csv(out, sim, parsed.trace.vocabulary()); });
  }
  const auto curve = cdf(sim, population, o.grid);
  write_atomically(dir / ("cdf_" + suffix + ".csv"), [&](std::ostream& out) { write_cdf_csv(out, curve); });
  const auto json = to_json(summarize(sim, population));
  write_text(dir / ("similarity_" + suffix + ".json"), json);
  s.out << json << '\n';
  return kExitOk;
}

int cmd_windows(const Options& o, Streams& s) {
  WindowOptions wo;
  wo.window_days = o.window_days;
  wo.mode = parse_similarity_mode(o.mode);
  wo.cumulative = o.cumulative;
  wo.pairs = pair_options(o);
  const auto parsed = load(o, s);
  const auto dir = output_dir(o);
  ensure_directory(dir);
  const auto windows = windowed(parsed.trace, wo);
  write_atomically(dir / ("windows_" + std::string(to_string(wo.mode)) + ".csv"),
                   [&](std::ostream& out) { write_windows_csv(out, windows); });
  s.out << windows.size() << " windows\n";
  return kExitOk;
}

struct GraphResult {
  double threshold = 0.0;
  TopologyReport topology;
};

GraphResult run_graph(const Trace& trace, const ProfileSet& profiles, SimilarityMode mode,
                      const Options& o, const fs::path* dir) {
  const auto sim = all_pairs(profiles, mode, pair_options(o));
  double threshold = o.threshold.value_or(default_threshold(mode));
  if (o.knee) threshold = knee_threshold(cdf(sim, PairPopulation::nonzero, o.grid));
  const auto graph = build_graph(sim, trace.vocabulary().users.size(), threshold);
  GraphResult result{threshold, topology(graph)};
  if (dir != nullptr) {
    const std::string suffix(to_string(mode));
    write_atomically(*dir / ("edges_" + suffix + ".csv"),
                     [&](std::ostream& out) { write_edges_csv(out, graph, trace.vocabulary()); });
    write_atomically(*dir / ("nodes_" + suffix + ".csv"),
                     [&](std::ostream& out) { write_nodes_csv(out, graph, trace.vocabulary()); });
  }
  return result;
}

ordered_json graph_json(const GraphResult& g, SimilarityMode mode) {
  auto j = ordered_json::parse(to_json(g.topology));
  j["mode"] = std::string(to_string(mode));
  j["threshold"] = g.threshold;
  return j;
}

int cmd_graph(const Options& o, Streams& s) {
  const auto mode = parse_similarity_mode(o.mode);
  if (o.threshold && !(*o.threshold > 0.0)) throw UsageError("--threshold must be positive");
  const auto parsed = load(o, s);
  const auto dir = output_dir(o);
  ensure_directory(dir);
  const auto profiles = build_profiles(parsed.trace);
  const auto result = run_graph(parsed.trace, profiles, mode, o, &dir);
  const auto json = graph_json(result, mode).dump(2);
  write_text(dir / ("topology_" + std::string(to_string(mode)) + ".json"), json);
  s.out << json << '\n';
  return kExitOk;
}

EvalParams eval_params(const Options& o) {
  EvalParams p;
  p.k = o.k;
  p.n = o.n;
  p.mode = parse_recommend_mode(o.rec_mode);
  p.similarity = parse_similarity_mode(o.rec_similarity);
  p.threshold = o.neighbor_threshold;
  p.pairs = pair_options(o);
  return p;
}

Timestamp resolve_cutoff(const Options& o, const Trace& trace) {
  if (o.cutoff) return *o.cutoff;
  return cutoff_at_fraction(trace, o.train_fraction.value_or(0.8));
}

int cmd_recommend(const Options& o, Streams& s) {
  if (o.cutoff && o.train_fraction) throw UsageError("--cutoff and --train-fraction are exclusive");
  const auto params = eval_params(o);
  const auto parsed = load(o, s);
  const auto dir = output_dir(o);
  ensure_directory(dir);
  const auto parts = split(parsed.trace, resolve_cutoff(o, parsed.trace));
  const auto report = evaluate(parts, params);
  const auto json = to_json(report);
  write_text(dir / "eval.json", json);
  if (o.per_user) {
    write_atomically(dir / "outcomes.csv", [&](std::ostream& out) {
      write_outcomes_csv(out, report, parsed.trace.vocabulary());
    });
  }
  s.out << json << '\n';
  return kExitOk;
}

int cmd_synth(const Options& o, Streams& s) {
  const auto generated = generate(o.gen);
  if (o.trace_out == "-") {
    write_canonical_tsv(generated.trace, s.out);
  } else {
    write_atomically(o.trace_out, [&](std::ostream& out) { write_canonical_tsv(generated.trace, out); });
  }
  if (!o.truth_out.empty()) write_text(o.truth_out, to_json(generated.truth));
  return kExitOk;
}

int cmd_report(const Options& o, Streams& s) {
  if (o.cutoff && o.train_fraction) throw UsageError("--cutoff and --train-fraction are exclusive");
  const auto params = eval_params(o);
  const auto parsed = load(o, s);
  const auto dir = output_dir(o);
  ensure_directory(dir);
  const auto& trace = parsed.trace;

  ordered_json bundle;
  bundle["version"] = version_string();
  bundle["validation"] = ordered_json::parse(to_json(parsed.report));
  bundle["reuse"] = reuse_section(trace, {Dimension::item, Dimension::tag, Dimension::user},
                                  o.distinct, nullptr, nullptr);

  const auto profiles = build_profiles(trace);
  ordered_json similarity = ordered_json::object();
  ordered_json graphs = ordered_json::object();
  for (auto mode : {SimilarityMode::user_item, SimilarityMode::user_tag}) {
    const std::string key(to_string(mode));
    try {
      const auto sim = all_pairs(profiles, mode, pair_options(o));
      ordered_json entry;
      for (auto pop : {PairPopulation::nonzero, PairPopulation::all}) {
        try {
          entry[std::string(to_string(pop))] = ordered_json::parse(to_json(summarize(sim, pop)));
        } catch (const EmptyInputError& e) {
          entry[std::string(to_string(pop))] = {{"error", e.what()}};
        }
      }
      similarity[key] = std::move(entry);
      graphs[key] = graph_json(run_graph(trace, profiles, mode, o, nullptr), mode);
    } catch (const EmptyInputError& e) {
      similarity[key] = {{"error", e.what()}};
      graphs[key] = {{"error", e.what()}};
    }
  }
  bundle["similarity"] = std::move(similarity);
  bundle["graph"] = std::move(graphs);

  try {
    const auto parts = split(trace, resolve_cutoff(o, trace));
    bundle["recommendation"] = ordered_json::parse(to_json(evaluate(parts, params)));
  } catch (const Error& e) {
    bundle["recommendation"] = {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
  }

  write_text(dir / "report.json", bundle.dump(2));
  s.out << (dir / "report.json").string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// Argument wiring

void add_input(CLI::App* cmd, Options& o) {
  cmd->add_option("-i,--input", o.input.path, "Trace file, or - for standard input")->capture_default_str();
  cmd->add_option("-f,--format", o.input.format, "canonical-tsv | citeulike-pipe")
      ->check(CLI::IsMember({"canonical-tsv", "tsv", "citeulike-pipe", "citeulike"}))
      ->capture_default_str();
  cmd->add_option("--columns", o.input.columns,
                  "Field order, e.g. item,user,timestamp,tag ('-' skips a field)")
      ->delimiter(',');
  cmd->add_option("--delimiter", o.input.delimiter, "Field separator (single character or 'tab')");
}

void add_output(CLI::App* cmd, Options& o) {
  cmd->add_option("-o,--out", o.out_dir,
                  std::string("Output directory (default: $") + kOutputDirEnv + " or .)");
}

void add_compute(CLI::App* cmd, Options& o) {
  cmd->add_option("--threads", o.threads, "Worker threads, 0 = all cores")->capture_default_str();
  cmd->add_option("--max-pairs", o.max_pairs, "Fail if more user pairs than this must be stored (0 = no cap)")
      ->capture_default_str();
}

void add_mode(CLI::App* cmd, Options& o) {
  cmd->add_option("-m,--mode", o.mode, "user-item | user-tag")
      ->check(CLI::IsMember({"user-item", "user-tag"}))
      ->capture_default_str();
}

void add_recommender(CLI::App* cmd, Options& o) {
  cmd->add_option("--cutoff", o.cutoff, "Split timestamp (epoch seconds)");
  cmd->add_option("--train-fraction", o.train_fraction, "Split at this fraction of assignments (default 0.8)")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("-k,--neighbors", o.k, "Neighbors per user")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("-n,--list-size", o.n, "Recommendation list size")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--recommend", o.rec_mode, "items | tags")
      ->check(CLI::IsMember({"items", "tags"}))
      ->capture_default_str();
  cmd->add_option("--similarity", o.rec_similarity, "Neighbor weights: user-item | user-tag")
      ->check(CLI::IsMember({"user-item", "user-tag"}))
      ->capture_default_str();
  cmd->add_option("--neighbor-threshold", o.neighbor_threshold, "Ignore neighbors below this weight")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
}

}  // namespace

int run(const std::vector<std::string>& args, Streams streams) {
  Options o;
  CLI::App app{"Content-reuse and interest-sharing analytics for tagging traces", "tagtrace"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  auto* validate_cmd = app.add_subcommand("validate", "Parse a trace and report what was accepted or rejected");
  add_input(validate_cmd, o);
  add_output(validate_cmd, o);

  auto* reuse_cmd = app.add_subcommand("reuse", "Daily item/tag/user reuse series and summaries");
  add_input(reuse_cmd, o);
  add_output(reuse_cmd, o);
  reuse_cmd->add_option("-d,--dimension", o.dimension, "item | tag | user | all")
      ->check(CLI::IsMember({"item", "tag", "user", "all"}))
      ->capture_default_str();
  reuse_cmd->add_flag("--distinct", o.distinct, "Count distinct entities per day instead of assignments");

  auto* sim_cmd = app.add_subcommand("similarity", "Pairwise interest-sharing ratios, summary and CDF");
  add_input(sim_cmd, o);
  add_output(sim_cmd, o);
  add_compute(sim_cmd, o);
  add_mode(sim_cmd, o);
  sim_cmd->add_option("-p,--population", o.population, "nonzero | all")
      ->check(CLI::IsMember({"nonzero", "all"}))
      ->capture_default_str();
  sim_cmd->add_option("--grid", o.grid, "CDF grid resolution")->capture_default_str()->check(CLI::PositiveNumber);
  sim_cmd->add_flag("--no-pairs", o.skip_pairs, "Skip writing the per-pair CSV");

  auto* win_cmd = app.add_subcommand("windows", "Interest sharing per time window");
  add_input(win_cmd, o);
  add_output(win_cmd, o);
  add_compute(win_cmd, o);
  add_mode(win_cmd, o);
  win_cmd->add_option("-w,--window-days", o.window_days, "Window length in days")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  win_cmd->add_flag("--cumulative", o.cumulative, "Profiles accumulate from the start of the trace");

  auto* graph_cmd = app.add_subcommand("graph", "Thresholded interest-sharing graph topology");
  add_input(graph_cmd, o);
  add_output(graph_cmd, o);
  add_compute(graph_cmd, o);
  add_mode(graph_cmd, o);
  auto* threshold_opt = graph_cmd->add_option("-t,--threshold", o.threshold,
                                              "Edge weight cutoff (default 0.05 user-item, 0.03 user-tag)");
  graph_cmd->add_flag("--knee", o.knee, "Pick the threshold at the knee of the nonzero CDF")->excludes(threshold_opt);
  graph_cmd->add_option("--grid", o.grid, "CDF grid resolution for --knee")->capture_default_str();

  auto* rec_cmd = app.add_subcommand("recommend", "Neighbor recommender success rate on a temporal split");
  add_input(rec_cmd, o);
  add_output(rec_cmd, o);
  add_compute(rec_cmd, o);
  add_recommender(rec_cmd, o);
  rec_cmd->add_flag("--per-user", o.per_user, "Also write outcomes.csv");

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic trace with planted reuse and communities");
  synth_cmd->add_option("--seed", o.gen.seed)->capture_default_str();
  synth_cmd->add_option("--users", o.gen.users)->capture_default_str()->check(CLI::PositiveNumber);
  synth_cmd->add_option("--days", o.gen.days)->capture_default_str()->check(CLI::PositiveNumber);
  synth_cmd->add_option("--events-per-day", o.gen.events_per_day)->capture_default_str()->check(CLI::PositiveNumber);
  synth_cmd->add_option("--item-reuse", o.gen.item_reuse_p)->capture_default_str()->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--tag-reuse", o.gen.tag_reuse_p)->capture_default_str()->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--communities", o.gen.communities)->capture_default_str()->check(CLI::PositiveNumber);
  synth_cmd->add_option("--item-pool", o.gen.intra_community_item_pool, "Community item pool cap (0 = none)")
      ->capture_default_str();
  synth_cmd->add_option("--tag-pool", o.gen.intra_community_tag_pool, "Community vocabulary cap (0 = none)")
      ->capture_default_str();
  synth_cmd->add_option("--noise", o.gen.noise_p)->capture_default_str()->check(CLI::Range(0.0, 1.0));
  synth_cmd->add_option("--start", o.gen.start, "First day (epoch seconds)")->capture_default_str();
  synth_cmd->add_option("--trace-out", o.trace_out, "Canonical TSV destination, - for stdout")->capture_default_str();
  synth_cmd->add_option("--truth-out", o.truth_out, "Ground-truth JSON destination");

  auto* report_cmd = app.add_subcommand("report", "Run every analysis and bundle the summaries in report.json");
  add_input(report_cmd, o);
  add_output(report_cmd, o);
  add_compute(report_cmd, o);
  add_recommender(report_cmd, o);
  report_cmd->add_option("-t,--threshold", o.threshold, "Graph threshold for both modes (default per mode)");
  report_cmd->add_flag("--knee", o.knee, "Graph thresholds at the CDF knee");
  report_cmd->add_flag("--distinct", o.distinct, "Distinct-entity reuse counting");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    streams.out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    streams.out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    streams.out << version_string() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(streams.err, "usage", e.what());
    return kExitUsage;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(o, streams);
    if (reuse_cmd->parsed()) return cmd_reuse(o, streams);
    if (sim_cmd->parsed()) return cmd_similarity(o, streams);
    if (win_cmd->parsed()) return cmd_windows(o, streams);
    if (graph_cmd->parsed()) return cmd_graph(o, streams);
    if (rec_cmd->parsed()) return cmd_recommend(o, streams);
    if (synth_cmd->parsed()) return cmd_synth(o, streams);
    if (report_cmd->parsed()) return cmd_report(o, streams);
  } catch (const UsageError& e) {
    report_error(streams.err, "usage", e.what());
    return kExitUsage;
  } catch (const ConfigError& e) {
    report_error(streams.err, to_string(e.kind()), e.what());
    return kExitUsage;
  } catch (const Error& e) {
    report_error(streams.err, to_string(e.kind()), e.what());
    return kExitDataError;
  } catch (const std::exception& e) {
    report_error(streams.err, "internal", e.what());
    return kExitDataError;
  }
  report_error(streams.err, "usage", "no subcommand given");
  return kExitUsage;
}

}  // namespace tagtrace::cli

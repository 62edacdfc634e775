// Copyright 2026 The ARC Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "arc/cli/pipeline.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <regex>
#include <set>

#include <nlohmann/json.hpp>

#include "arc/bias.hpp"
#include "arc/corpus.hpp"
#include "arc/csv.hpp"
#include "arc/decompose.hpp"
#include "arc/error.hpp"
#include "arc/judge.hpp"
#include "arc/position.hpp"
#include "arc/scoring.hpp"
#include "arc/stats.hpp"

namespace arc::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kCorpus = "corpus.jsonl";
constexpr std::string_view kStats = "stats.csv";
constexpr std::string_view kArguments = "arguments.jsonl";
constexpr std::string_view kFacts = "facts.jsonl";
constexpr std::string_view kVerdicts = "verdicts.jsonl";
constexpr std::string_view kScores = "scores.csv";
constexpr std::string_view kScoresSummary = "scores_summary.csv";
constexpr std::string_view kDistillation = "distillation.jsonl";
constexpr std::string_view kBias = "bias.csv";
constexpr std::string_view kPositions = "positions.csv";
constexpr std::string_view kHistogram = "histogram.csv";
constexpr std::string_view kDocPositions = "doc_positions.csv";
constexpr std::string_view kCorrelations = "correlations.csv";
constexpr std::string_view kReport = "report.json";

std::string fixed(double v, int places) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", places, v);
  return buf;
}

void prepare_out(const RunConfig& config) {
  std::error_code ec;
  fs::create_directories(config.out, ec);
  if (ec || !fs::is_directory(config.out)) {
    throw ValidationError("output directory " + config.out.string() + " is not writable");
  }
}

fs::path require(const RunConfig& config, std::string_view name) {
  fs::path p = config.artifact(name);
  if (!fs::exists(p)) throw MissingUpstream(std::string(name));
  return p;
}

corpus::Corpus load_snapshot(const RunConfig& config) {
  return corpus::load_corpus(require(config, kCorpus), corpus::resolve_scheme(config.scheme));
}

csv::Table read_table(const RunConfig& config, std::string_view name) {
  return csv::read(require(config, name));
}

std::size_t col(const csv::Table& t, const std::string& name, std::string_view file) {
  int i = t.column(name);
  if (i < 0) throw ValidationError(std::string(file) + " lacks column '" + name + "'");
  return static_cast<std::size_t>(i);
}

// Backends, cache and clients for one command.
struct Session {
  judge::VerdictCache cache;
  std::unique_ptr<judge::Backend> judge_backend;
  std::unique_ptr<judge::Backend> nli_backend;
  std::unique_ptr<judge::JudgeClient> judge;
  std::unique_ptr<judge::JudgeClient> nli;

  Session(const RunConfig& config, const std::string& judge_descriptor, bool with_nli,
          std::optional<int> max_tokens = {})
      : cache(config.cache_path()) {
    judge::ClientOptions options;
    options.budget = config.budget;
    options.max_in_flight = std::max<std::size_t>(1, config.parallel);
    options.requests_per_minute = config.rpm;
    judge::BackendConfig main = backend_config(config, judge_descriptor);
    main.max_tokens = max_tokens;
    judge_backend = judge::make_backend(main);
    judge = std::make_unique<judge::JudgeClient>(*judge_backend, cache, options);
    if (with_nli) {
      nli_backend = judge::make_backend(backend_config(config, config.nli));
      nli = std::make_unique<judge::JudgeClient>(*nli_backend, cache, options);
    }
  }

  static judge::BackendConfig backend_config(const RunConfig& config, const std::string& d) {
    judge::BackendConfig c = judge::parse_backend_descriptor(d);
    if (config.max_retries < 0) throw ValidationError("max-retries must be non-negative");
    c.max_retries = config.max_retries;
    return c;
  }

  void report(std::ostream& log, std::string_view what) const {
    log << what << ": " << judge->network_calls() << " network calls, " << judge->cache_hits()
        << " cache hits";
    if (nli) log << "; nli " << nli->network_calls() << " calls, " << nli->cache_hits() << " hits";
    log << '\n';
  }
};

std::map<std::string, std::vector<corpus::ArgumentUnit>> by_doc(
    const std::vector<corpus::ArgumentUnit>& arguments) {
  std::map<std::string, std::vector<corpus::ArgumentUnit>> out;
  for (const auto& a : arguments) out[a.doc_id].push_back(a);
  return out;
}

nlohmann::ordered_json cell_value(const std::string& cell) {
  static const std::regex integer(R"(-?\d+)");
  static const std::regex decimal(R"(-?\d+\.\d+([eE][-+]?\d+)?|-?\d+[eE][-+]?\d+)");
  if (std::regex_match(cell, integer)) return std::stoll(cell);
  if (std::regex_match(cell, decimal)) return std::stod(cell);
  if (cell == "true") return true;
  if (cell == "false") return false;
  if (cell.empty()) return nullptr;
  return cell;
}

nlohmann::ordered_json table_json(const csv::Table& t) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const csv::Row& r : t.rows) {
    nlohmann::ordered_json o;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
      o[t.header[i]] = cell_value(i < r.size() ? r[i] : "");
    }
    rows.push_back(std::move(o));
  }
  return rows;
}

csv::Table project(const csv::Table& t, const std::vector<std::string>& columns,
                   std::string_view file) {
  csv::Table out;
  out.header = columns;
  std::vector<std::size_t> idx;
  for (const auto& c : columns) idx.push_back(col(t, c, file));
  for (const csv::Row& r : t.rows) {
    csv::Row row;
    for (std::size_t i : idx) row.push_back(i < r.size() ? r[i] : "");
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace

fs::path RunConfig::cache_path() const { return cache ? *cache : out / "cache.jsonl"; }

void cmd_ingest(const RunConfig& config, std::ostream& log) {
  if (config.input.empty()) throw ValidationError("--input is required");
  if (!fs::exists(config.input)) {
    throw ValidationError("input corpus " + config.input.string() + " does not exist");
  }
  corpus::Corpus c = corpus::load_corpus(config.input, corpus::resolve_scheme(config.scheme));
  prepare_out(config);
  corpus::write_corpus(c, config.artifact(kCorpus));

  corpus::CorpusStats s = corpus::corpus_stats(c);
  corpus::LengthPolicy policy = config.length_policy
                                    ? corpus::parse_length_policy(*config.length_policy)
                                    : corpus::infer_length_policy(c);
  csv::Table t;
  t.header = {"scheme",           "docs",           "input_words_min", "input_words_mean",
              "input_words_max",  "summary_words_min", "summary_words_mean",
              "summary_words_max", "pct_roles_input", "pct_roles_summary", "length_policy"};
  t.rows.push_back({c.scheme.scheme_id, std::to_string(s.docs),
                    std::to_string(s.input_length.min), fixed(s.input_length.mean, 2),
                    std::to_string(s.input_length.max), std::to_string(s.summary_length.min),
                    fixed(s.summary_length.mean, 2), std::to_string(s.summary_length.max),
                    format_decimal(s.pct_roles_input, 2),
                    s.pct_roles_summary ? format_decimal(*s.pct_roles_summary, 2) : "",
                    corpus::to_string(policy)});
  csv::write(config.artifact(kStats), t);
  log << "ingest: " << s.docs << " documents, scheme " << c.scheme.scheme_id << ", length policy "
      << corpus::to_string(policy) << '\n';
}

void cmd_generate(const RunConfig& config, std::ostream& log) {
  corpus::Corpus c = load_snapshot(config);
  corpus::LengthPolicy policy = config.length_policy
                                    ? corpus::parse_length_policy(*config.length_policy)
                                    : corpus::infer_length_policy(c);
  prepare_out(config);
  Session session(config, config.generator, false, config.max_tokens);
  judge::BackendConfig bc = judge::parse_backend_descriptor(config.generator);
  const std::string system = config.system.empty() ? bc.backend_id : config.system;
  if (system.rfind("reference", 0) == 0) {
    throw ValidationError("system tag '" + system + "' is reserved");
  }
  for (corpus::DocumentRecord& doc : c.documents) {
    std::size_t target = corpus::target_length(doc, policy);
    auto request = judge::make_request(
        judge::TemplateId::kSummarize,
        {{"document", doc.plain_text()}, {"target_words", std::to_string(target)}});
    std::string text = session.judge->invoke(request);
    corpus::SummaryRecord summary;
    summary.system = system;
    summary.text = text;
    std::erase_if(doc.generated_summaries,
                  [&](const corpus::SummaryRecord& s) { return s.system == system; });
    doc.generated_summaries.push_back(std::move(summary));
  }
  corpus::write_corpus(c, config.artifact(kCorpus));
  session.report(log, "generate");
}

void cmd_decompose(const RunConfig& config, std::ostream& log) {
  corpus::Corpus c = load_snapshot(config);
  corpus::SaliencyPolicy policy = corpus::SaliencyPolicy::parse(config.policy);
  std::vector<corpus::ArgumentUnit> arguments;
  for (const auto& doc : c.documents) {
    for (auto& a : corpus::extract_salient(doc, policy)) arguments.push_back(std::move(a));
  }
  corpus::write_arguments(arguments, config.artifact(kArguments));
  Session session(config, config.judge, true);
  decompose::FactSet facts =
      decompose::decompose_all(arguments, *session.judge, *session.nli, config.parallel);
  decompose::write_facts(facts, config.artifact(kFacts));
  std::size_t kept = 0;
  for (const auto& a : arguments) kept += facts.kept(a.arg_id).size();
  log << "decompose: " << arguments.size() << " arguments, " << kept << " facts kept, "
      << facts.failures.size() << " failures\n";
  session.report(log, "decompose");
}

void cmd_score(const RunConfig& config, std::ostream& log) {
  corpus::Corpus c = load_snapshot(config);
  scoring::LevelSet levels = scoring::LevelSet::parse(config.levels);
  std::optional<decompose::FactSet> facts;
  if (levels.atomic) facts = decompose::read_facts(require(config, kFacts));
  auto arguments = corpus::read_arguments(require(config, kArguments));

  Session session(config, config.judge, false);
  auto grouped = by_doc(arguments);
  std::vector<scoring::ScoreCard> cards;
  std::vector<scoring::VerdictRecord> records;
  for (const corpus::DocumentRecord& doc : c.documents) {
    const auto& args = grouped[doc.doc_id];
    for (const auto& [system, summary] : scoring::summaries_to_score(doc)) {
      auto scored = scoring::score_summary(doc.doc_id, args, facts ? &*facts : nullptr, *summary,
                                           system, *session.judge, levels, config.parallel);
      cards.push_back(std::move(scored.card));
      for (auto& r : scored.records) records.push_back(std::move(r));
    }
  }
  scoring::write_verdicts(records, config.artifact(kVerdicts));
  scoring::write_scores_csv(cards, config.artifact(kScores));

  csv::Table summary;
  summary.header = {"system", "level", "mean_doc", "pooled", "docs"};
  for (const auto& s : scoring::aggregate_corpus(cards, records)) {
    summary.rows.push_back({s.system, std::string(scoring::to_string(s.level)),
                            s.mean_doc ? format_decimal(*s.mean_doc) : "",
                            s.pooled ? format_decimal(*s.pooled) : "", std::to_string(s.docs)});
  }
  csv::write(config.artifact(kScoresSummary), summary);

  std::map<std::string, std::string> unit_text;
  for (const auto& a : arguments) unit_text[a.arg_id] = a.text;
  if (facts) {
    for (const auto& [arg, list] : facts->by_argument) {
      for (const auto& f : list) unit_text[f.fact_id] = f.text;
    }
  }
  std::map<std::pair<std::string, std::string>, std::string> summary_text;
  for (const auto& doc : c.documents) {
    for (const auto& [system, s] : scoring::summaries_to_score(doc)) {
      summary_text[{doc.doc_id, system}] = s->text;
    }
  }
  std::vector<judge::DistillationItem> items;
  std::size_t unjudged = 0;
  for (const auto& r : records) {
    if (!r.judged()) {
      ++unjudged;
      continue;
    }
    if (r.level == scoring::Level::kFullset) continue;
    judge::DistillationItem item;
    item.level = r.level == scoring::Level::kRole ? judge::DistillationItem::Level::kRole
                                                  : judge::DistillationItem::Level::kAtomic;
    item.unit = unit_text[r.target];
    item.summary = summary_text[{r.doc_id, r.summary_system}];
    item.verdict = *r.verdict;
    items.push_back(std::move(item));
  }
  judge::export_distillation(items, config.artifact(kDistillation));
  log << "score: " << cards.size() << " summaries, " << records.size() << " verdicts, "
      << unjudged << " unjudged\n";
  session.report(log, "score");
}

void cmd_bias(const RunConfig& config, std::ostream& log) {
  corpus::Corpus c = load_snapshot(config);
  auto arguments = corpus::read_arguments(require(config, kArguments));
  auto records = scoring::read_verdicts(require(config, kVerdicts));
  bias::BiasOptions options;
  options.length_ratio = config.length_ratio;
  options.edge = config.edge;
  options.mass = config.mass;
  options.length_control = false;
  options.position_control = false;
  std::string spec = config.control;
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::size_t comma = spec.find(',', start);
    std::string item = spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (item == "length") {
      options.length_control = true;
    } else if (item == "position" || item == "length_and_position") {
      options.length_control = options.position_control = true;
    } else if (item != "none" && !item.empty()) {
      throw ValidationError("unknown control '" + item + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  auto reports = bias::compute_bias(c, corpus::SaliencyPolicy::parse(config.policy), arguments,
                                    records, options);
  bias::write_bias_csv(reports, config.artifact(kBias));
  log << "bias: " << reports.size() << " rows\n";
}

void cmd_position(const RunConfig& config, std::ostream& log) {
  corpus::Corpus c = load_snapshot(config);
  corpus::SaliencyPolicy policy = corpus::SaliencyPolicy::parse(config.policy);
  std::vector<position::PositionRow> rows;
  csv::Table doc_positions;
  doc_positions.header = {"doc_id", "mean_salient_position"};
  for (const auto& doc : c.documents) {
    for (auto& r : position::attribute_positions(doc)) rows.push_back(std::move(r));
    try {
      doc_positions.rows.push_back(
          {doc.doc_id, fixed(position::mean_salient_position(doc, policy), 6)});
    } catch (const NoSalientArguments&) {
      // Documents without salient arguments have no mean position.
    }
  }
  position::write_positions_csv(rows, config.artifact(kPositions));
  position::write_histogram_csv(position::profiles_by_system(rows), config.artifact(kHistogram));
  csv::write(config.artifact(kDocPositions), doc_positions);
  log << "position: " << rows.size() << " attributed sentences, " << doc_positions.rows.size()
      << " documents with salient positions\n";
}

void cmd_correlate(const RunConfig& config, std::ostream& log) {
  csv::Table scores = read_table(config, kScores);
  csv::Table positions = read_table(config, kDocPositions);
  const std::size_t s_doc = col(scores, "doc_id", kScores), s_sys = col(scores, "system", kScores),
                    s_role = col(scores, "role", kScores);
  const std::size_t p_doc = col(positions, "doc_id", kDocPositions),
                    p_val = col(positions, "mean_salient_position", kDocPositions);
  std::map<std::string, double> mean_position;
  for (const auto& r : positions.rows) mean_position[r.at(p_doc)] = std::stod(r.at(p_val));

  std::vector<stats::CorrelationRow> rows;
  // Position against coverage, per system.
  {
    const std::size_t s_atomic = col(scores, "arc_atomic", kScores);
    std::map<std::string, std::vector<std::pair<double, double>>> per_system;
    for (const auto& r : scores.rows) {
      if (r.at(s_role) != "*" || r.at(s_atomic).empty()) continue;
      auto it = mean_position.find(r.at(s_doc));
      if (it == mean_position.end()) continue;
      per_system[r.at(s_sys)].emplace_back(it->second, std::stod(r.at(s_atomic)));
    }
    for (const auto& [system, pairs] : per_system) {
      try {
        rows.push_back(stats::to_row(stats::position_coverage_correlation(pairs),
                                     "position:" + system, ""));
      } catch (const DegenerateSeries& e) {
        log << "correlate: skipping position:" << system << " (" << e.what() << ")\n";
      }
    }
  }

  if (config.human) {
    stats::ExpertScores human = stats::read_expert_scores(*config.human);
    for (const std::string level : {"arc_fullset", "arc_role", "arc_atomic"}) {
      const std::size_t s_level = col(scores, level, kScores);
      stats::MetricScores metric;
      for (const auto& r : scores.rows) {
        if (r.at(s_role) != "*" || r.at(s_sys).rfind("reference", 0) == 0) continue;
        const std::string& v = r.at(s_level);
        metric[{r.at(s_doc), r.at(s_sys)}] =
            v.empty() ? std::nullopt : std::optional<double>(std::stod(v));
      }
      try {
        auto a = stats::metric_human_agreement(metric, human);
        const std::string scope = "human:" + level;
        for (const auto& [expert, r] : a.tau) rows.push_back(stats::to_row(r, scope, expert));
        rows.push_back(stats::to_row(a.tau_corr_of_avg, scope, "corr_of_avg"));
        rows.push_back({"kendall_tau_b", scope, "avg_of_corr", a.tau_avg_of_corr, std::nullopt,
                        a.tau_corr_of_avg.n});
        for (const auto& [expert, r] : a.rho) rows.push_back(stats::to_row(r, scope, expert));
        rows.push_back(stats::to_row(a.rho_corr_of_avg, scope, "corr_of_avg"));
        rows.push_back({"pearson", scope, "avg_of_corr", a.rho_avg_of_corr, std::nullopt,
                        a.rho_corr_of_avg.n});
      } catch (const DegenerateSeries& e) {
        log << "correlate: skipping human:" << level << " (" << e.what() << ")\n";
      }
    }
  }
  stats::write_correlations_csv(rows, config.artifact(kCorrelations));
  log << "correlate: " << rows.size() << " rows\n";
}

void cmd_report(const RunConfig& config, std::ostream& log) {
  csv::Table stats_table = read_table(config, kStats);
  csv::Table summary = read_table(config, kScoresSummary);
  csv::Table scores = read_table(config, kScores);
  csv::Table bias_table = read_table(config, kBias);
  csv::Table positions = read_table(config, kPositions);
  csv::Table histogram = read_table(config, kHistogram);
  csv::Table correlations = read_table(config, kCorrelations);

  // Error-type shares per (system, role), pooled over documents.
  csv::Table errors;
  errors.header = {"system", "role", "supported", "missing", "not_factual",
                   "share_supported", "share_missing", "share_not_factual"};
  {
    const std::size_t sys = col(scores, "system", kScores), role = col(scores, "role", kScores),
                      sup = col(scores, "supported", kScores),
                      mis = col(scores, "missing", kScores),
                      nf = col(scores, "not_factual", kScores);
    std::map<std::pair<std::string, std::string>, std::array<long long, 3>> totals;
    for (const auto& r : scores.rows) {
      auto& t = totals[{r.at(sys), r.at(role)}];
      t[0] += std::stoll(r.at(sup));
      t[1] += std::stoll(r.at(mis));
      t[2] += std::stoll(r.at(nf));
    }
    for (const auto& [key, t] : totals) {
      long long n = t[0] + t[1] + t[2];
      auto share = [&](long long k) {
        return n == 0 ? std::string() : format_decimal(Rational(k, n));
      };
      errors.rows.push_back({key.first, key.second, std::to_string(t[0]), std::to_string(t[1]),
                             std::to_string(t[2]), share(t[0]), share(t[1]), share(t[2])});
    }
  }

  csv::Table fig2;
  fig2.header = summary.header;
  for (const auto& r : summary.rows) {
    if (r.at(col(summary, "level", kScoresSummary)) == "atomic") fig2.rows.push_back(r);
  }
  csv::write(config.artifact("fig2_arc_atomic.csv"), fig2);
  csv::write(config.artifact("fig3_errors.csv"), errors);
  csv::write(config.artifact("fig4_positions.csv"),
             project(histogram, {"system", "role", "bin_lo", "bin_hi", "share"}, kHistogram));
  csv::write(config.artifact("fig5_bias.csv"),
             project(bias_table, {"system", "role", "control", "variant", "scope", "beta"}, kBias));

  nlohmann::ordered_json report;
  report["corpus"] = table_json(stats_table);
  report["scores"] = table_json(summary);
  report["errors"] = table_json(errors);
  report["bias"] = table_json(bias_table);
  report["histogram"] = table_json(histogram);
  report["correlations"] = table_json(correlations);
  report["positions"] = static_cast<std::uint64_t>(positions.rows.size());
  std::ofstream out(config.artifact(kReport), std::ios::binary);
  if (!out) throw ValidationError("cannot write report.json");
  out << report.dump(2) << '\n';
  log << "report: wrote " << config.artifact(kReport).string() << '\n';
}

void cmd_run(const RunConfig& config, std::ostream& log) {
  cmd_ingest(config, log);
  cmd_decompose(config, log);
  cmd_score(config, log);
  cmd_bias(config, log);
  cmd_position(config, log);
  cmd_correlate(config, log);
  cmd_report(config, log);
}

void dispatch(std::string_view command, const RunConfig& config, std::ostream& log) {
  if (command == "ingest") return cmd_ingest(config, log);
  if (command == "generate") return cmd_generate(config, log);
  if (command == "decompose") return cmd_decompose(config, log);
  if (command == "score") return cmd_score(config, log);
  if (command == "bias") return cmd_bias(config, log);
  if (command == "position") return cmd_position(config, log);
  if (command == "correlate") return cmd_correlate(config, log);
  if (command == "report") return cmd_report(config, log);
  if (command == "run") return cmd_run(config, log);
  throw ValidationError("unknown command '" + std::string(command) + "'");
}

int run_guarded(std::string_view command, const RunConfig& config, std::ostream& log,
                std::ostream& err) {
  try {
    dispatch(command, config, log);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.error_class()) {
      case ErrorClass::kValidation: return 2;
      case ErrorClass::kTransport: return 3;
      case ErrorClass::kBudget: return 4;
      case ErrorClass::kInternal: return 1;
    }
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace arc::cli

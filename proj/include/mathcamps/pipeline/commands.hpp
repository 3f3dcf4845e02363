#pragma once

#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mathcamps/eval/mock_endpoints.hpp"
#include "mathcamps/eval/run.hpp"
#include "mathcamps/grammar/config.hpp"
#include "mathcamps/io/json.hpp"
#include "mathcamps/pipeline/dataset.hpp"
#include "mathcamps/realization/http_backend.hpp"
#include "mathcamps/realization/mock_backend.hpp"
#include "mathcamps/realization/themes.hpp"
#include "mathcamps/report/render.hpp"

#ifndef MATHCAMPS_VERSION
#define MATHCAMPS_VERSION "0.0.0"
#endif

namespace mathcamps {

/// Bad arguments, unreadable files or a run that cannot proceed as asked.
class UsageError : public Error {
 public:
  using Error::Error;
};

namespace exit_code {
constexpr int ok = 0;
constexpr int config = 1;
constexpr int backend = 2;
constexpr int partial = 3;
}  // namespace exit_code

inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return hex64(h);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path.string());
  out << text;
}

// ---- backends ---------------------------------------------------------------

struct BackendConfig {
  std::string kind = "mock_faithful";  // mock_faithful | mock_perturbing | http
  HttpBackendOptions http;

  /// Everything that can change outputs; the API key itself is excluded.
  Json to_json() const {
    Json j{{"kind", kind}};
    if (kind == "http") {
      j["base_url"] = http.base_url;
      j["model"] = http.model;
      j["temperature"] = http.temperature;
      j["max_tokens"] = http.max_tokens;
    }
    return j;
  }
  std::string hash() const { return fnv1a_hex(to_json().dump()); }
};

inline std::unique_ptr<ChatBackend> make_backend(const BackendConfig& c) {
  if (c.kind == "mock_faithful") return std::make_unique<MockRealizationBackend>(false);
  if (c.kind == "mock_perturbing") return std::make_unique<MockRealizationBackend>(true);
  if (c.kind == "http") {
    if (c.http.base_url.empty() || c.http.model.empty()) throw UsageError("http backend needs --base-url and --model");
    return std::make_unique<HttpChatBackend>(c.http);
  }
  throw UsageError("unknown backend '" + c.kind + "'");
}

/// `http:MODEL@URL` becomes an HTTP backend config; anything else is returned
/// with only `kind` set.
inline BackendConfig parse_endpoint(const std::string& text, const std::string& api_key_env) {
  BackendConfig c;
  if (text.rfind("http:", 0) == 0) {
    auto at = text.find('@', 5);
    if (at == std::string::npos || at == 5 || at + 1 == text.size())
      throw UsageError("endpoint '" + text + "' should look like http:MODEL@URL");
    c.kind = "http";
    c.http.model = text.substr(5, at - 5);
    c.http.base_url = text.substr(at + 1);
    c.http.api_key_env = api_key_env;
  } else {
    c.kind = text;
  }
  return c;
}

// ---- standards selection ------------------------------------------------------

/// Comma-separated ids; an entry ending in `*` matches by prefix. Empty
/// selects everything. Config order is kept.
inline std::vector<StandardSpec> select_standards(const std::vector<StandardSpec>& all, const std::string& filter) {
  if (filter.empty()) return all;
  std::vector<std::string> items;
  std::stringstream ss(filter);
  for (std::string item; std::getline(ss, item, ',');) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) items.push_back(item);
  }
  std::set<std::string> used;
  std::vector<StandardSpec> out;
  for (const auto& s : all) {
    for (const auto& item : items) {
      bool prefix = item.back() == '*';
      bool hit = prefix ? s.id.rfind(item.substr(0, item.size() - 1), 0) == 0 : s.id == item;
      if (hit) {
        used.insert(item);
        out.push_back(s);
        break;
      }
    }
  }
  for (const auto& item : items)
    if (!used.count(item)) throw UsageError("no standard matches '" + item + "'");
  return out;
}

// ---- generate -----------------------------------------------------------------

struct GenerateRequest {
  std::string config_path;
  std::string themes_path;
  std::string standards;
  std::size_t count = 5;
  std::uint64_t seed = 0;
  BackendConfig backend;
  std::string out;
  bool resume = false;
  std::size_t max_attempts = 1000;
  std::size_t max_cycle_attempts = 5;
  bool followups = true;
  std::size_t jobs = 1;
  std::string timestamp;  // empty: SOURCE_DATE_EPOCH, else the epoch
};

inline std::string iso_utc(std::time_t t) {
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string resolve_timestamp(const std::string& requested) {
  if (!requested.empty()) return requested;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    try {
      return iso_utc(static_cast<std::time_t>(std::stoll(env)));
    } catch (const std::exception&) {
      throw UsageError(std::string("SOURCE_DATE_EPOCH is not a number: ") + env);
    }
  }
  return PipelineMetadata{}.timestamp;
}

struct GenerateResult {
  int exit_code = exit_code::ok;
  DatasetSummary summary;
  std::size_t records_on_disk = 0;
};

inline Json run_manifest(const GenerateRequest& req, const std::vector<StandardSpec>& specs,
                         const std::string& config_text, const std::string& themes_text, const std::string& timestamp) {
  Json ids = Json::array();
  Json counts = Json::object();
  for (const auto& s : specs) {
    ids.push_back(s.id);
    counts[s.id] = req.count;
  }
  return Json{{"version", MATHCAMPS_VERSION},
              {"seed", req.seed},
              {"standards_filter", req.standards},
              {"standards", ids},
              {"counts", counts},
              {"backend", req.backend.to_json()},
              {"backend_hash", req.backend.hash()},
              {"config_hash", fnv1a_hex(config_text)},
              {"themes_hash", fnv1a_hex(themes_text)},
              {"max_attempts", req.max_attempts},
              {"max_cycle_attempts", req.max_cycle_attempts},
              {"followups", req.followups},
              {"timestamp", timestamp}};
}

inline Json stats_to_json(const DatasetSummary& s) {
  const auto& st = s.stats;
  Json per_standard = Json::object();
  for (const auto& [id, n] : s.requested) {
    auto it = s.emitted.find(id);
    per_standard[id] = {{"requested", n}, {"emitted", it == s.emitted.end() ? 0 : it->second}};
  }
  const double tokens = static_cast<double>(st.prompt_tokens + st.completion_tokens);
  return Json{{"attempts", st.attempts},
              {"accepted", st.accepted},
              {"filter_rejected", st.filter_rejected},
              {"cycle_rejected", st.cycle_rejected},
              {"errored", st.errored},
              {"exhausted", st.exhausted},
              {"rejections", st.rejections},
              {"cycle_verdicts", st.cycle_verdicts},
              {"prompt_tokens", st.prompt_tokens},
              {"completion_tokens", st.completion_tokens},
              {"tokens_per_problem", st.accepted ? tokens / static_cast<double>(st.accepted) : 0.0},
              {"followups_emitted", st.followups_emitted},
              {"followups_dropped", st.followups_dropped},
              {"skipped", s.skipped},
              {"per_standard", per_standard},
              {"failures", s.failures},
              {"backend_errors", s.backend_errors}};
}

/// Real errors verbatim; tasks skipped after a failure only as a count.
inline void log_backend_errors(std::ostream& log, const std::string& prefix, const std::vector<std::string>& errors) {
  static const std::string kSkipped = "not attempted after backend failure";
  std::size_t skipped = 0;
  for (const auto& e : errors) {
    if (e.size() >= kSkipped.size() && e.compare(e.size() - kSkipped.size(), kSkipped.size(), kSkipped) == 0) ++skipped;
    else log << prefix << "backend error: " << e << "\n";
  }
  if (skipped) log << prefix << skipped << " more not attempted after the backend failed\n";
}

inline std::string manifest_path(const std::string& out) { return out + ".manifest.json"; }
inline std::string stats_path(const std::string& out) { return out + ".stats.json"; }

/// Ids of complete lines already in `path`; a torn final line is cut off.
inline std::set<std::string> recover_ids(const std::string& path, const char* key) {
  std::set<std::string> ids;
  if (!std::filesystem::exists(path)) return ids;
  std::size_t valid = 0;
  for (const auto& j : read_jsonl(path, &valid)) ids.insert(j.at(key).get<std::string>());
  std::filesystem::resize_file(path, valid);
  return ids;
}

/// Writes the manifest first, then streams cycle-consistent records to `out`
/// and finishes with the statistics file.
inline GenerateResult run_generate(const GenerateRequest& req, std::ostream& log) {
  if (req.out.empty()) throw UsageError("--out is required");
  if (req.count == 0) throw UsageError("--count must be positive");
  if (req.max_attempts == 0 || req.max_cycle_attempts == 0) throw UsageError("attempt budgets must be positive");
  const std::string config_text = read_file(req.config_path);
  const auto specs = select_standards(load_standards(config_text), req.standards);
  const std::string themes_text = read_file(req.themes_path);
  const auto themes = parse_themes(themes_text);
  if (themes.empty()) throw UsageError("theme list is empty: " + req.themes_path);
  auto backend = make_backend(req.backend);

  if (auto parent = std::filesystem::path(req.out).parent_path(); !parent.empty())
    std::filesystem::create_directories(parent);
  const PipelineMetadata meta{resolve_timestamp(req.timestamp)};
  const std::string started_at = iso_utc(std::time(nullptr));
  const Json manifest = run_manifest(req, specs, config_text, themes_text, meta.timestamp);
  std::set<std::string> done;
  if (req.resume && std::filesystem::exists(req.out)) {
    if (!std::filesystem::exists(manifest_path(req.out))) throw UsageError("cannot resume: no manifest for " + req.out);
    if (Json::parse(read_file(manifest_path(req.out))) != manifest)
      throw UsageError("cannot resume: manifest differs from the requested run");
    done = recover_ids(req.out, "id");
  } else {
    write_file(req.out, "");
  }
  write_file(manifest_path(req.out), manifest.dump(2) + "\n");

  std::ofstream out(req.out, std::ios::binary | std::ios::app);
  if (!out) throw UsageError("cannot write " + req.out);
  DatasetOptions opt;
  opt.seed = req.seed;
  opt.count = req.count;
  opt.realization.max_attempts = req.max_attempts;
  opt.realization.max_cycle_attempts = req.max_cycle_attempts;
  opt.realization.themes = &themes;
  opt.followups = req.followups;
  opt.jobs = req.jobs;
  opt.skip = done;

  GenerateResult result;
  result.summary = generate_dataset(specs, *backend, opt, [&](const WordProblemRecord& r) {
    out << record_to_json(r, meta).dump() << '\n';
    out.flush();
  });
  out.close();
  Json stats = stats_to_json(result.summary);
  stats["started_at"] = started_at;
  stats["finished_at"] = iso_utc(std::time(nullptr));
  write_file(stats_path(req.out), stats.dump(2) + "\n");

  std::size_t emitted = 0;
  for (const auto& [id, n] : result.summary.emitted) emitted += n;
  result.records_on_disk = done.size() + emitted;
  log_backend_errors(log, "", result.summary.backend_errors);
  for (const auto& f : result.summary.failures) log << "gave up: " << f << "\n";
  log << "wrote " << result.records_on_disk << " problems to " << req.out << " (" << emitted << " new, "
      << result.summary.skipped << " already present)\n";
  if (!result.summary.backend_errors.empty())
    result.exit_code = emitted == 0 ? exit_code::backend : exit_code::partial;
  else if (!result.summary.failures.empty())
    result.exit_code = exit_code::partial;
  return result;
}

// ---- eval ---------------------------------------------------------------------

struct EvalRequest {
  std::string dataset;
  std::vector<std::string> endpoints;
  std::string extractor;  // empty, "mock", or http:MODEL@URL
  bool re_extract = false;
  std::string out_dir;
  bool resume = false;
  std::size_t jobs = 1;
  std::string api_key_env = "MATHCAMPS_API_KEY";
};

inline std::string file_stem_for(const std::string& model) {
  std::string s = model;
  for (char& c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  return s;
}

inline std::unique_ptr<ChatBackend> make_eval_endpoint(const std::string& text, const std::string& api_key_env,
                                                       const std::vector<WordProblemRecord>& dataset) {
  for (auto mode : {MockEvalMode::oracle, MockEvalMode::wrong, MockEvalMode::main_only})
    if (text == to_string(mode)) return std::make_unique<MockEvalEndpoint>(mode, dataset);
  auto c = parse_endpoint(text, api_key_env);
  if (c.kind != "http") throw UsageError("unknown endpoint '" + text + "'");
  return make_backend(c);
}

/// One record file per endpoint under `out_dir`. Returns the worst exit code.
inline int run_eval(const EvalRequest& req, std::ostream& log) {
  if (req.endpoints.empty()) throw UsageError("at least one --endpoint is required");
  if (req.out_dir.empty()) throw UsageError("--out is required");
  std::vector<WordProblemRecord> dataset;
  try {
    dataset = load_dataset(req.dataset);
  } catch (const FormatError& e) {
    throw UsageError(e.what());
  }
  std::unique_ptr<ChatBackend> extractor;
  if (req.re_extract) {
    if (req.extractor.empty() || req.extractor == "mock") extractor = std::make_unique<MockExtractorBackend>();
    else extractor = make_backend(parse_endpoint(req.extractor, req.api_key_env));
  }
  std::vector<std::unique_ptr<ChatBackend>> models;
  std::set<std::string> stems;
  for (const auto& e : req.endpoints) {
    models.push_back(make_eval_endpoint(e, req.api_key_env, dataset));
    if (!stems.insert(file_stem_for(models.back()->id())).second)
      throw UsageError("two endpoints share the model name " + models.back()->id());
  }
  std::filesystem::create_directories(req.out_dir);

  int worst = exit_code::ok;
  for (auto& model : models) {
    const auto path = (std::filesystem::path(req.out_dir) / (file_stem_for(model->id()) + ".jsonl")).string();
    EvalOptions opt;
    opt.protocol.re_extraction = req.re_extract;
    opt.extractor = extractor.get();
    opt.jobs = req.jobs;
    opt.halt_on_backend_error = true;
    if (req.resume) opt.skip = recover_ids(path, "problem_id");
    else write_file(path, "");
    std::ofstream out(path, std::ios::binary | std::ios::app);
    auto summary = run_evaluation(dataset, *model, opt, [&](const EvalRecord& r) {
      out << eval_record_to_json(r).dump() << '\n';
      out.flush();
    });
    log_backend_errors(log, model->id() + ": ", summary.errors);
    log << model->id() << ": evaluated " << summary.evaluated << ", skipped " << summary.skipped << ", errors "
        << summary.errored << " -> " << path << "\n";
    if (summary.errored) worst = std::max(worst, summary.evaluated == 0 ? exit_code::backend : exit_code::partial);
  }
  return worst;
}

// ---- report -------------------------------------------------------------------

struct ReportRequest {
  std::vector<std::string> record_files;
  std::string scores;
  std::string dataset;
  std::string out_dir;
};

/// Writes the report bundle and returns the plain-text rendering.
inline std::string run_report(const ReportRequest& req) {
  if (req.record_files.empty()) throw UsageError("no record files given");
  std::vector<EvalRecord> records;
  try {
    for (const auto& f : req.record_files) {
      auto part = load_eval_records(f);
      records.insert(records.end(), part.begin(), part.end());
    }
  } catch (const FormatError& e) {
    throw UsageError(e.what());
  }
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& r : records)
    if (!seen.insert({r.model, r.problem_id}).second)
      throw UsageError("duplicate record for " + r.model + " / " + r.problem_id);
  if (!req.dataset.empty()) {
    std::set<std::string> ids;
    for (const auto& p : load_dataset(req.dataset)) ids.insert(p.id);
    for (const auto& r : records)
      if (!ids.count(r.problem_id)) throw UsageError("record " + r.problem_id + " is not in " + req.dataset);
  }
  std::optional<std::vector<std::pair<std::string, double>>> scores;
  if (!req.scores.empty()) {
    try {
      scores = parse_scores(read_file(req.scores));
    } catch (const std::invalid_argument& e) {
      throw UsageError(req.scores + ": " + e.what());
    }
  }
  const Report report = build_report(records, scores);
  const std::string text = report_text(report);
  if (!req.out_dir.empty()) {
    std::filesystem::path dir(req.out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "report.json", report_json(report).dump(2) + "\n");
    write_file(dir / "accuracy.tsv", accuracy_tsv(report));
    write_file(dir / "standards.tsv", standards_tsv(report));
    write_file(dir / "followups.tsv", followups_tsv(report));
    write_file(dir / "rank_changes.tsv", rank_changes_tsv(report));
    if (report.correlation) write_file(dir / "correlation.tsv", correlation_tsv(*report.correlation));
    write_file(dir / "report.txt", text);
  }
  return text;
}

// ---- validate-config / inspect ------------------------------------------------------

/// Loads the config and draws one valid problem per standard.
inline int run_validate_config(const std::string& config_path, const std::string& themes_path, std::size_t max_attempts,
                               std::ostream& log) {
  const auto specs = load_standards_file(config_path);
  int status = exit_code::ok;
  for (const auto& s : specs) {
    try {
      generate_valid(s, 0, max_attempts);
    } catch (const ExhaustedError&) {
      log << s.id << ": no valid problem within " << max_attempts << " attempts\n";
      status = exit_code::config;
    }
  }
  auto themes = load_themes_file(themes_path);
  log << specs.size() << " standards, " << themes.size() << " themes: " << (status ? "FAILED" : "ok") << "\n";
  return status;
}

inline std::string describe_record(const WordProblemRecord& r) {
  std::ostringstream o;
  o << r.id << "  (" << r.standard << ", grade " << grade_label(r.grade) << ", seed " << r.seed << ")\n";
  if (r.theme) o << "theme: " << *r.theme << "\n";
  o << "\n" << r.symbolic_text << "\n\n" << r.word_text << "\n\nanswer: " << render_answer(r.answer)
    << "\ncycle: " << to_string(r.cycle) << "\n";
  for (const auto& f : r.followups)
    o << "\n[" << to_string(f.kind) << "]\n" << print_problem(f.problem) << "\n" << f.word_text
      << "\nanswer: " << render_answer(f.answer) << "\n";
  return o.str();
}

inline std::string describe_standard(const StandardSpec& s) {
  std::ostringstream o;
  o << s.id << "  (grade " << grade_label(s.grade) << ")\n" << s.description << "\n";
  for (const auto& sample : s.samples) o << "\n" << sample.symbolic << "\n" << sample.word << "\n";
  return o.str();
}

}  // namespace mathcamps

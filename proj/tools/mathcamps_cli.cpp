#include <iostream>

#include <CLI11.hpp>

#include "mathcamps/mathcamps.hpp"

using namespace mathcamps;

namespace {

const std::string kDataDir = MATHCAMPS_DATA_DIR;

struct Shared {
  std::string config = kDataDir + "/standards.yaml";
  std::string themes = kDataDir + "/themes.txt";
};

void add_shared(CLI::App* cmd, Shared& s) {
  cmd->add_option("--config", s.config, "Standards configuration (YAML)")->capture_default_str();
  cmd->add_option("--themes", s.themes, "Theme list, one per line")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic math word problems from grade-school standards"};
  app.set_version_flag("--version", MATHCAMPS_VERSION);
  app.require_subcommand(1);
  Shared shared;

  GenerateRequest gen;
  std::string api_key_env = "MATHCAMPS_API_KEY";
  bool no_followups = false;
  auto* generate = app.add_subcommand("generate", "Generate a dataset");
  add_shared(generate, shared);
  generate->add_option("--standards", gen.standards, "Comma-separated ids; trailing * matches a prefix");
  generate->add_option("--count", gen.count, "Problems per standard")->capture_default_str();
  generate->add_option("--seed", gen.seed, "Master seed")->capture_default_str();
  generate->add_option("--backend", gen.backend.kind, "mock_faithful, mock_perturbing or http")
      ->capture_default_str();
  generate->add_option("--base-url", gen.backend.http.base_url, "Chat-completions base URL (http backend)");
  generate->add_option("--model", gen.backend.http.model, "Model name (http backend)");
  generate->add_option("--api-key-env", api_key_env, "Environment variable holding the API key")
      ->capture_default_str();
  generate->add_option("--out", gen.out, "Dataset file (JSONL)")->required();
  generate->add_flag("--resume", gen.resume, "Continue an interrupted run with the same manifest");
  generate->add_option("--max-attempts", gen.max_attempts, "Rejection-sampling budget per problem")
      ->capture_default_str();
  generate->add_option("--max-cycle-attempts", gen.max_cycle_attempts, "Realization rounds per problem")
      ->capture_default_str();
  generate->add_flag("--no-followups", no_followups, "Skip follow-up questions");
  generate->add_option("--jobs", gen.jobs, "Parallel tasks")->capture_default_str();
  generate->add_option("--timestamp", gen.timestamp, "Timestamp stamped on every record (default: SOURCE_DATE_EPOCH or epoch)");

  EvalRequest ev;
  auto* eval = app.add_subcommand("eval", "Evaluate endpoints on a dataset");
  eval->add_option("--dataset", ev.dataset, "Dataset file")->required();
  eval->add_option("--endpoint", ev.endpoints,
                   "mock_oracle, mock_wrong, mock_main_only or http:MODEL@URL (repeatable)")
      ->required();
  eval->add_option("--extractor", ev.extractor, "Re-extraction model: mock or http:MODEL@URL");
  eval->add_flag("--re-extract", ev.re_extract, "Retry extraction of incorrect replies with a model");
  eval->add_option("--out", ev.out_dir, "Directory for per-model record files")->required();
  eval->add_flag("--resume", ev.resume, "Skip problems already in the record files");
  eval->add_option("--jobs", ev.jobs, "Parallel tasks")->capture_default_str();
  eval->add_option("--api-key-env", ev.api_key_env, "Environment variable holding the API key")
      ->capture_default_str();

  ReportRequest rep;
  auto* report = app.add_subcommand("report", "Aggregate evaluation records");
  report->add_option("records", rep.record_files, "Evaluation record files")->required();
  report->add_option("--scores", rep.scores, "External scores: model and score per line");
  report->add_option("--dataset", rep.dataset, "Check that every record id is in this dataset");
  report->add_option("--out", rep.out_dir, "Directory for the report bundle");

  std::size_t validate_attempts = 1000;
  auto* validate = app.add_subcommand("validate-config", "Check the standards configuration");
  add_shared(validate, shared);
  validate->add_option("--max-attempts", validate_attempts, "Sampling budget per standard")->capture_default_str();

  std::string inspect_id, inspect_dataset;
  auto* inspect = app.add_subcommand("inspect", "Show a problem or a standard");
  inspect->add_option("id", inspect_id, "Problem id or standard id")->required();
  inspect->add_option("--dataset", inspect_dataset, "Dataset file to search");
  inspect->add_option("--config", shared.config, "Standards configuration (YAML)")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) {
      gen.config_path = shared.config;
      gen.themes_path = shared.themes;
      gen.followups = !no_followups;
      gen.backend.http.api_key_env = api_key_env;
      return run_generate(gen, std::cerr).exit_code;
    }
    if (*eval) return run_eval(ev, std::cerr);
    if (*report) {
      std::cout << run_report(rep);
      return exit_code::ok;
    }
    if (*validate) return run_validate_config(shared.config, shared.themes, validate_attempts, std::cout);
    if (*inspect) {
      if (!inspect_dataset.empty())
        for (const auto& r : load_dataset(inspect_dataset))
          if (r.id == inspect_id) {
            std::cout << describe_record(r);
            return exit_code::ok;
          }
      for (const auto& s : load_standards_file(shared.config))
        if (s.id == inspect_id) {
          std::cout << describe_standard(s);
          return exit_code::ok;
        }
      std::cerr << "not found: " << inspect_id << "\n";
      return exit_code::config;
    }
  } catch (const BackendError& e) {
    std::cerr << "backend error: " << e.what() << "\n";
    return exit_code::backend;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code::config;
  }
  return exit_code::ok;
}

#pragma once

#include <atomic>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "mathcamps/followups/realize.hpp"
#include "mathcamps/pipeline/ordered.hpp"
#include "mathcamps/realization/generate_problem.hpp"

namespace mathcamps {

struct DatasetOptions {
  std::uint64_t seed = 0;
  std::size_t count = 5;  // problems per standard
  RealizationOptions realization;
  bool followups = true;
  std::size_t jobs = 1;
  std::set<std::string> skip;  // problem ids already on disk (resume)
  bool halt_on_backend_error = true;
};

struct DatasetSummary {
  RealizationStats stats;
  std::map<std::string, std::size_t> requested;
  std::map<std::string, std::size_t> emitted;
  std::vector<std::string> failures;        // exhausted problems
  std::vector<std::string> backend_errors;  // problems lost to the backend
  std::size_t skipped = 0;

  bool complete() const { return failures.empty() && backend_errors.empty(); }
};

inline std::uint64_t problem_seed(std::uint64_t master, const std::string& standard, std::size_t index) {
  return mix_seed(mix_seed(master, standard), index);
}

/// Every (standard, index) task in emission order.
inline std::vector<std::pair<const StandardSpec*, std::size_t>> dataset_tasks(const std::vector<StandardSpec>& specs,
                                                                               std::size_t count) {
  std::vector<std::pair<const StandardSpec*, std::size_t>> tasks;
  for (const auto& s : specs)
    for (std::size_t i = 0; i < count; ++i) tasks.emplace_back(&s, i);
  return tasks;
}

/// Generates `count` problems per standard and passes the cycle-consistent
/// ones to `sink` in a fixed order, independent of `jobs`.
inline DatasetSummary generate_dataset(const std::vector<StandardSpec>& specs, ChatBackend& backend,
                                       const DatasetOptions& opt,
                                       const std::function<void(const WordProblemRecord&)>& sink) {
  DatasetSummary summary;
  auto tasks = dataset_tasks(specs, opt.count);
  for (const auto& s : specs) summary.requested[s.id] = opt.count;
  std::erase_if(tasks, [&](const auto& t) {
    return opt.skip.count(problem_id(t.first->id, problem_seed(opt.seed, t.first->id, t.second))) > 0;
  });
  summary.skipped = opt.count * specs.size() - tasks.size();

  struct Outcome {
    std::variant<WordProblemRecord, GenerationFailure, std::string> result;
    RealizationStats stats;
  };
  std::atomic<bool> halted{false};
  run_ordered<Outcome>(
      tasks.size(), opt.jobs,
      [&](std::size_t k) {
        const auto& [spec, index] = tasks[k];
        Outcome out;
        const auto seed = problem_seed(opt.seed, spec->id, index);
        if (halted) {
          out.result = problem_id(spec->id, seed) + ": not attempted after backend failure";
          return out;
        }
        try {
          auto r = generate_problem(*spec, seed, backend, opt.realization, &out.stats);
          if (auto* rec = std::get_if<WordProblemRecord>(&r)) {
            if (opt.followups) attach_followups(*spec, *rec, backend, &out.stats);
            out.result = std::move(*rec);
          } else {
            out.result = std::get<GenerationFailure>(std::move(r));
          }
        } catch (const BackendError& e) {
          if (opt.halt_on_backend_error) halted = true;
          out.result = problem_id(spec->id, seed) + ": " + e.what();
        }
        return out;
      },
      [&](std::size_t k, Outcome& o) {
        summary.stats.merge(o.stats);
        const auto& spec = *tasks[k].first;
        if (auto* rec = std::get_if<WordProblemRecord>(&o.result)) {
          sink(*rec);
          ++summary.emitted[spec.id];
        } else if (auto* f = std::get_if<GenerationFailure>(&o.result)) {
          summary.failures.push_back(problem_id(spec.id, problem_seed(opt.seed, spec.id, tasks[k].second)) + ": " +
                                     f->reason);
        } else {
          summary.backend_errors.push_back(std::get<std::string>(o.result));
        }
      });
  return summary;
}

}  // namespace mathcamps

// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

#include "mathcamps/mathcamps.hpp"

using namespace mathcamps;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
  if (!ok) ++failures;
}

const std::vector<StandardSpec>& shipped() {
  static const auto specs = load_standards_file(std::string(MATHCAMPS_DATA_DIR) + "/standards.yaml");
  return specs;
}

std::size_t family_count() {
  std::set<std::string> ids;
  for (const auto& s : shipped()) ids.insert(s.id.substr(0, s.id.find('-')));
  return ids.size();
}

std::string fmt(double x, int places = 2) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(places);
  o << x;
  return o.str();
}

// ---- DSL round-trip -------------------------------------------------------------

void dsl_round_trip() {
  auto t0 = Clock::now();
  std::size_t n = 0, ok = 0;
  std::set<std::string> covered;
  for (std::uint64_t seed = 0; n < 1000; ++seed)
    for (const auto& s : shipped()) {
      auto p = sample_symbolic(s, mix_seed(seed, "acceptance"));
      ok += problem_equal(parse_problem(print_problem(p)), p);
      covered.insert(s.id.substr(0, s.id.find('-')));
      if (++n == 1000) break;
    }
  double secs = seconds_since(t0);
  report("dsl-round-trip", ok == n && covered.size() == family_count() && secs < 10,
         std::to_string(ok) + "/" + std::to_string(n) + " problems over " + std::to_string(covered.size()) +
             " standards in " + fmt(secs) + " s");
}

// ---- solver oracle -----------------------------------------------------------------

void solver_oracle() {
  auto t0 = Clock::now();
  constexpr long kSmall = 9;
  std::size_t systems = 0, mismatches = 0;
  for (long a = -9; a <= 9; ++a)
    for (long b = -9; b <= 9; ++b)
      for (long c = -9; c <= 9; ++c)
        for (long d = -9; d <= 9; ++d) {
          if (a * d - b * c == 0) continue;
          LinearSystem sys{{'x', 'y'}, {{a, b}, {c, d}}, {0, 0}};
          for (long x = -kSmall; x <= kSmall; ++x)
            for (long y = -kSmall; y <= kSmall; ++y) {
              long e = a * x + b * y, f = c * x + d * y;
              if (e < -9 || e > 9 || f < -9 || f > 9) continue;
              ++systems;
              // Independent oracle: scan the whole small grid for solutions.
              long hits = 0, gx = 0, gy = 0;
              for (long u = -kSmall; u <= kSmall; ++u)
                for (long v = -kSmall; v <= kSmall; ++v)
                  if (a * u + b * v == e && c * u + d * v == f) {
                    ++hits;
                    gx = u;
                    gy = v;
                  }
              sys.constants = {e, f};
              auto sol = gauss_solve(sys);
              if (hits != 1 || sol.at('x').value() != gx || sol.at('y').value() != gy) ++mismatches;
            }
        }
  // Arbitrary systems, singular ones included: a grid point exists iff the
  // exact solve yields a small integral solution.
  std::mt19937_64 rng(2024);
  std::size_t random_checked = 0;
  for (int i = 0; i < 200000; ++i) {
    long v[6];
    for (auto& x : v) x = static_cast<long>(rng() % 19) - 9;
    long hits = 0;
    for (long u = -kSmall; u <= kSmall; ++u)
      for (long w = -kSmall; w <= kSmall; ++w) hits += v[0] * u + v[1] * w == v[4] && v[2] * u + v[3] * w == v[5];
    LinearSystem sys{{'x', 'y'}, {{v[0], v[1]}, {v[2], v[3]}}, {v[4], v[5]}};
    bool small_integral = false, solved = false;
    try {
      auto sol = gauss_solve(sys);
      solved = true;
      small_integral = sol.at('x').is_integer() && sol.at('y').is_integer() && abs(sol.at('x').value()) <= kSmall &&
                       abs(sol.at('y').value()) <= kSmall;
    } catch (const SolveError&) {
    }
    if (solved ? (hits == 1) != small_integral : hits == 1) ++mismatches;
    ++random_checked;
  }
  std::size_t factor_bad = 0;
  for (std::int64_t n = 1; n <= 100; ++n) {
    std::vector<std::int64_t> expect;
    for (std::int64_t k = 1; k <= n; ++k)
      if (n % k == 0) expect.push_back(k);
    factor_bad += factor_pairs(n).factors != expect;
  }
  double secs = seconds_since(t0);
  report("solver-oracle", mismatches == 0 && factor_bad == 0 && secs < 60,
         std::to_string(systems) + " unique-solution systems + " + std::to_string(random_checked) +
             " random systems, " + std::to_string(mismatches) + " mismatches; factor_pairs 1..100 " +
             std::to_string(100 - factor_bad) + "/100; " + fmt(secs) + " s");
}

// ---- transforms ----------------------------------------------------------------------

void transforms() {
  std::size_t checked = 0, changed = 0, dead = 0, short_standards = 0;
  for (const auto& s : shipped()) {
    std::size_t here = 0;
    for (std::uint64_t seed = 0; here < 200 && seed < 20000; ++seed) {
      auto p = sample_symbolic(s, mix_seed(seed, "transforms"));
      Answer a;
      try {
        a = classify_and_solve(p, s.question_kind);
      } catch (const SolveError&) {
        continue;
      }
      ++here;
      auto pruned = transform_no_useless_variables(p);
      auto simple = transform_simplify(p);
      changed += !answers_equal(classify_and_solve(pruned, s.question_kind), a);
      changed += !answers_equal(classify_and_solve(simple, s.question_kind), a);
      auto g = build_dependency_graph(pruned);
      dead += g.question_roots.size() != pruned.statements.size();
    }
    checked += here;
    short_standards += here < 200;
  }
  report("transform-preservation", changed == 0 && dead == 0 && short_standards == 0,
         std::to_string(checked) + " problems (" + std::to_string(shipped().size()) + " entries x 200), " +
             std::to_string(changed) + " answer changes, " + std::to_string(dead) + " with unreachable statements");
}

// ---- filters ----------------------------------------------------------------------------

void filters() {
  const auto& within20 = *find_standard(shipped(), "1.OA.A.1");
  std::size_t violations = 0;
  mpq_class max_seen = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto v = generate_valid(within20, seed, 1000);
    for (const auto& x : intermediate_values(v.problem, v.answer)) {
      if (x.value() > max_seen) max_seen = x.value();
      violations += x.value() > 20 || x.value() < 0;
    }
  }
  const auto& ten = *find_standard(shipped(), "K.OA.A.4");
  std::size_t missing_pair = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto v = generate_valid(ten, seed, 1000);
    auto consts = enumerate_constants(v.problem);
    bool pair = false;
    for (std::size_t i = 0; i < consts.size(); ++i)
      for (std::size_t j = i + 1; j < consts.size(); ++j)
        pair |= consts[i].second.value() + consts[j].second.value() == 10;
    missing_pair += !pair;
  }
  report("filter-compliance", violations == 0 && missing_pair == 0,
         "1.OA.A.1: 200 problems, max intermediate " + max_seen.get_str() + ", " + std::to_string(violations) +
             " violations; K.OA.A.4: " + std::to_string(200 - missing_pair) + "/200 with a pair summing to 10");
}

// ---- cycle consistency --------------------------------------------------------------------

bool constant_sensitive(const StandardSpec& s, const ValidProblem& v) {
  try {
    auto bumped = parse_problem(MockRealizationBackend::perturbed(print_problem(v.problem)));
    return !answers_equal(v.answer, classify_and_solve(bumped, s.question_kind));
  } catch (const Error&) {
    return true;
  }
}

void cycle_discrimination() {
  MockRealizationBackend faithful(false), perturbing(true);
  const auto themes = load_themes_file(std::string(MATHCAMPS_DATA_DIR) + "/themes.txt");
  std::size_t f_total = 0, f_ok = 0, p_total = 0, p_ok = 0;
  for (std::uint64_t seed = 0; f_total < 500 || p_total < 500; ++seed)
    for (const auto& s : shipped()) {
      auto v = generate_valid(s, mix_seed(seed, "cycle"), 5000);
      std::optional<std::string> theme;
      if (s.uses_theme) theme = sample_theme(themes, seed);
      if (f_total < 500) {
        ++f_total;
        f_ok += realize_and_check(s, v.problem, v.answer, theme, faithful).verdict == CycleVerdict::consistent;
      }
      if (p_total < 500 && constant_sensitive(s, v)) {
        ++p_total;
        p_ok += realize_and_check(s, v.problem, v.answer, theme, perturbing).verdict == CycleVerdict::consistent;
      }
    }
  report("cycle-discrimination", f_ok == f_total && p_ok == 0,
         "mock_faithful accepted " + std::to_string(f_ok) + "/" + std::to_string(f_total) +
             ", mock_perturbing accepted " + std::to_string(p_ok) + "/" + std::to_string(p_total) +
             " constant-sensitive problems");
}

// ---- follow-ups ------------------------------------------------------------------------------

const std::vector<WordProblemRecord>& corpus() {
  static const auto data = [] {
    std::vector<WordProblemRecord> out;
    MockRealizationBackend backend(false);
    const auto themes = load_themes_file(std::string(MATHCAMPS_DATA_DIR) + "/themes.txt");
    DatasetOptions opt;
    opt.seed = 11;
    opt.count = 20;
    opt.realization.themes = &themes;
    opt.jobs = 4;
    generate_dataset(shipped(), backend, opt, [&](const WordProblemRecord& r) { out.push_back(r); });
    return out;
  }();
  return data;
}

void followup_sensitivity() {
  std::size_t total = 0, differs = 0, resolved = 0;
  for (const auto& r : corpus()) {
    const auto& s = *find_standard(shipped(), r.standard);
    for (const auto& f : r.followups) {
      if (f.kind != FollowupKind::counterfactual) continue;
      ++total;
      differs += !answers_equal(f.answer, r.answer);
      resolved += answers_equal(classify_and_solve(f.problem, s.question_kind), f.answer);
    }
  }
  report("followup-sensitivity", total > 0 && differs == total && resolved == total,
         std::to_string(differs) + "/" + std::to_string(total) +
             " counterfactual follow-ups change the parent's answer");
}

// ---- harness ------------------------------------------------------------------------------------

class Counting : public ChatBackend {
 public:
  explicit Counting(ChatBackend& inner) : inner_(inner) {}
  ChatResponse complete(const ChatTranscript& t) override {
    ++(t.size() > 4 ? followups : mains);
    return inner_.complete(t);
  }
  std::string id() const override { return inner_.id(); }
  std::atomic<std::size_t> mains{0}, followups{0};

 private:
  ChatBackend& inner_;
};

class Fixed : public ChatBackend {
 public:
  explicit Fixed(std::string reply) : reply_(std::move(reply)) {}
  ChatResponse complete(const ChatTranscript&) override { return {reply_, 0, 0}; }
  std::string id() const override { return "fixed"; }

 private:
  std::string reply_;
};

const char* kWords[] = {"zero",     "one",     "two",     "three",    "four",     "five",    "six",
                        "seven",    "eight",   "nine",    "ten",      "eleven",   "twelve",  "thirteen",
                        "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen", "twenty"};

void harness_protocol() {
  const auto& data = corpus();
  std::size_t available = 0;
  for (const auto& r : data) available += r.followups.size();

  MockEvalEndpoint oracle_ep(MockEvalMode::oracle, data);
  Counting oracle(oracle_ep);
  std::size_t correct = 0, fu_correct = 0;
  run_evaluation(data, oracle, {}, [&](const EvalRecord& r) {
    correct += r.correct();
    for (const auto& f : r.followup_results) fu_correct += f.reply.correct;
  });
  bool oracle_ok = correct == data.size() && oracle.followups == available && fu_correct == available;

  MockEvalEndpoint wrong_ep(MockEvalMode::wrong, data);
  Counting wrong(wrong_ep);
  std::size_t wrong_correct = 0;
  run_evaluation(data, wrong, {}, [&](const EvalRecord& r) { wrong_correct += r.correct(); });
  bool gating_ok = wrong.followups == 0 && wrong_correct == 0 && wrong.mains == data.size();

  // 100 adversarial replies graded with and without re-extraction, under a
  // helpful, a hostile and a gold-echoing extractor.
  std::vector<std::pair<std::string, Answer>> fixture;
  for (int i = 0; i < 100; ++i) {
    long gold = 1 + i % 17;
    std::string reply;
    switch (i % 5) {
      case 0: reply = "Reasoning: done.\nAnswer: " + std::to_string(gold); break;
      case 1: reply = "Answer: " + std::to_string(gold + 1); break;
      case 2: reply = "So the total is " + std::to_string(gold) + " apples, not " + std::to_string(gold + 3) + "."; break;
      case 3: reply = std::string("In the end she has ") + kWords[gold] + " dolls."; break;
      case 4: reply = "Answer: " + std::to_string(gold) + "\nSome would say " + std::to_string(gold + 2) + "."; break;
    }
    fixture.emplace_back(reply, ScalarAnswer{ExactNumber(gold)});
  }
  MockExtractorBackend helpful;
  Fixed hostile("Answer: -999");
  std::size_t flips = 0;
  std::vector<std::string> tallies;
  EvalOptions plain;
  for (ChatBackend* ex : std::initializer_list<ChatBackend*>{&helpful, &hostile}) {
    EvalOptions with;
    with.protocol.re_extraction = true;
    with.extractor = ex;
    std::size_t before = 0, after = 0;
    for (const auto& [reply, gold] : fixture) {
      bool a = grade_reply(reply, gold, {}, plain).correct;
      bool b = grade_reply(reply, gold, {}, with).correct;
      before += a;
      after += b;
      flips += a && !b;
    }
    tallies.push_back(std::to_string(before) + "->" + std::to_string(after));
    if (after < before) ++flips;
  }
  report("harness-protocol", oracle_ok && gating_ok && flips == 0,
         "oracle " + std::to_string(correct) + "/" + std::to_string(data.size()) + " main, " +
             std::to_string(oracle.followups.load()) + "/" + std::to_string(available) +
             " follow-ups asked; always-wrong issued " + std::to_string(wrong.followups.load()) +
             " follow-up queries; regrading 100-record fixture " + tallies[0] + " (helpful), " + tallies[1] +
             " (hostile), " + std::to_string(flips) + " regressions");
}

// ---- reporting math ----------------------------------------------------------------------------

ModelRow row(const std::string& model, std::vector<std::pair<std::size_t, std::size_t>> cells) {
  ModelRow r;
  r.model = model;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    Cell c{cells[i].first, cells[i].second};
    r.per_standard["S" + std::to_string(i + 1)] = c;
    r.overall.correct += c.correct;
    r.overall.total += c.total;
  }
  return r;
}

void reporting_math() {
  AccuracyTable t;
  t.rows = {row("A", {{9, 10}, {8, 10}}), row("B", {{5, 10}, {4, 10}}), row("C", {{10, 10}, {1, 10}})};
  auto pareto = pareto_pair_fraction(t);
  bool pareto_ok = pareto && *pareto == mpq_class(1, 3);

  std::vector<double> xs, ys;
  for (int i = 0; i < 20; ++i) {
    xs.push_back(0.05 * i);
    ys.push_back(3.0 * xs.back() - 1.5);
  }
  double r = pearson(xs, ys);
  bool pearson_ok = std::abs(r - 1.0) <= 1e-12;

  std::mt19937_64 rng(99);
  auto chance = [&](double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; };
  std::size_t violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<EvalRecord> rs;
    int n = 1 + static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) {
      EvalRecord e;
      e.problem_id = "p" + std::to_string(i);
      e.model = "m" + std::to_string(rng() % 3);
      e.standard = "S" + std::to_string(rng() % 4);
      e.main.correct = chance(0.6);
      if (chance(0.7)) {
        e.followups_available = {FollowupKind::incremental, FollowupKind::counterfactual};
        if (e.main.correct)
          for (auto k : e.followups_available)
            if (chance(0.8)) e.followup_results.push_back({k, GradedReply{"", std::nullopt, ExtractionStage::rule, chance(0.5)}});
      }
      rs.push_back(e);
    }
    auto with = accuracy_with_followups(rs);
    auto main = main_accuracy_on_followup_standards(rs);
    for (const auto& [m, a] : with)
      if (a && (!main.at(m) || *a > *main.at(m))) ++violations;
  }
  report("reporting-math", pareto_ok && pearson_ok && violations == 0,
         "Pareto fixture " + (pareto ? pareto->get_str() : std::string("undefined")) + ", linear pearson " +
             fmt(r, 15) + ", " + std::to_string(violations) + " follow-up violations in 1000 trials");
}

// ---- end-to-end ---------------------------------------------------------------------------------

void end_to_end() {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / ("mathcamps-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  GenerateRequest req;
  req.config_path = std::string(MATHCAMPS_DATA_DIR) + "/standards.yaml";
  req.themes_path = std::string(MATHCAMPS_DATA_DIR) + "/themes.txt";
  req.count = 5;
  req.seed = 7;
  std::ostringstream log;
  double worst = 0;
  std::vector<std::string> bodies;
  std::size_t lines = 0;
  int exit_status = 0;
  for (int run = 0; run < 2; ++run) {
    req.out = (dir / ("run" + std::to_string(run) + ".jsonl")).string();
    req.jobs = run == 0 ? 1 : 4;
    auto t0 = Clock::now();
    auto result = run_generate(req, log);
    worst = std::max(worst, seconds_since(t0));
    exit_status |= result.exit_code;
    lines = result.records_on_disk;
    bodies.push_back(read_file(req.out));
  }
  fs::remove_all(dir);
  bool same = bodies[0] == bodies[1];
  report("end-to-end-determinism", same && exit_status == 0 && lines == 5 * shipped().size() && worst < 60,
         std::to_string(lines) + " problems (" + std::to_string(family_count()) + " standards, " +
             std::to_string(shipped().size()) + " config entries x 5), digests " +
             (same ? "identical" : "differ") + " (" + fnv1a_hex(bodies[0]) + "), slowest run " + fmt(worst) + " s");
}

}  // namespace

int main() {
  dsl_round_trip();
  solver_oracle();
  transforms();
  filters();
  cycle_discrimination();
  followup_sensitivity();
  harness_protocol();
  reporting_math();
  end_to_end();
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}

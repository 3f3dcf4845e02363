#include <gtest/gtest.h>

#include <map>

#include "mathcamps/dsl/printer.hpp"
#include "mathcamps/grammar/config.hpp"
#include "mathcamps/grammar/generate.hpp"

using namespace mathcamps;

namespace {

const std::vector<StandardSpec>& shipped() {
  static const auto specs = load_standards_file(std::string(MATHCAMPS_DATA_DIR) + "/standards.yaml");
  return specs;
}

const StandardSpec& spec(const std::string& id) {
  auto* s = find_standard(shipped(), id);
  if (!s) throw std::runtime_error("missing standard " + id);
  return *s;
}

const char* kMinimal = R"(
standards:
  1.OA.A.1:
    description: "Add within 20 in word problems"
    question_kind: value
    expression_ops: [+, -]
    number_domain: whole
    min_number: 0
    max_number: 20
    min_value: 0
    max_value: 20
    max_depth: 2
    filters:
      - name: FILTER
    samples:
      - symbolic: "[[var a = (1 + 2)]]\n[[question h = a]]"
        word: "What is 1 + 2?"
      - symbolic: "[[var b = (5 - 2)]]\n[[question h = b]]"
        word: "What is 5 - 2?"
)";

std::string minimal_with_filter(const std::string& name) {
  std::string text = kMinimal;
  text.replace(text.find("FILTER"), 6, name);
  return text;
}

}  // namespace

TEST(LoadStandards, ShippedConfigCoversAllStandards) {
  const auto& specs = shipped();
  EXPECT_EQ(specs.size(), 49u);
  std::set<std::string> families;
  std::map<int, std::set<std::string>> by_grade;
  for (const auto& s : specs) {
    families.insert(s.family());
    by_grade[s.grade].insert(s.id);
  }
  EXPECT_EQ(families.size(), 44u);
  std::map<int, std::set<std::string>> expected = {
      {0, {"K.CC.C.7", "K.OA.A.4", "K.OA.A.5", "K.NBT.A.1"}},
      {1, {"1.OA.A.1", "1.OA.A.2", "1.OA.D.8"}},
      {2, {"2.OA.A.1", "2.NBT.B.5", "2.NBT.B.6", "2.NBT.B.7", "2.MD.B.5", "2.MD.C.8"}},
      {3, {"3.OA.A.3", "3.OA.A.4", "3.OA.C.7", "3.OA.D.8", "3.MD.D.8-triangle", "3.MD.D.8-quadrilateral",
           "3.MD.D.8-polygon", "3.NBT.A.2"}},
      {4, {"4.OA.A.3", "4.OA.B.4", "4.NBT.B.4", "4.NBT.B.5", "4.NBT.B.6", "4.NF.A.2", "4.MD.A.2-decimal",
           "4.MD.A.2-fraction", "4.MD.A.3"}},
      {5, {"5.OA.A.1", "5.NBT.B.5", "5.NBT.B.6", "5.NBT.B.7", "5.NF.A.1", "5.NF.A.2", "5.NF.B.4"}},
      {6, {"6.NS.B.2", "6.NS.B.3", "6.EE.A.1", "6.EE.B.7"}},
      {7, {"7.NS.A.1-fraction", "7.NS.A.1-decimal", "7.NS.A.2", "7.NS.A.3-fraction", "7.NS.A.3-decimal"}},
      {8, {"8.EE.A.2", "8.EE.C.7", "8.EE.C.8"}},
  };
  EXPECT_EQ(by_grade, expected);
}

TEST(LoadStandards, SpecificEntries) {
  const auto& k = spec("K.CC.C.7");
  EXPECT_EQ(k.question_kind, QuestionKind::comparison);
  EXPECT_EQ(k.min_number, 1);
  EXPECT_EQ(k.max_number, 10);
  EXPECT_EQ(k.grade, 0);

  const auto& sys = spec("8.EE.C.8");
  EXPECT_EQ(sys.question_kind, QuestionKind::multi_value);
  for (auto op : {ExprOp::add, ExprOp::sub, ExprOp::mul}) EXPECT_TRUE(sys.allows(op));

  EXPECT_EQ(spec("4.NBT.B.6").question_kind, QuestionKind::quotient_remainder);
  EXPECT_EQ(spec("4.OA.A.3").question_kind, QuestionKind::quotient_remainder);
  EXPECT_EQ(spec("4.OA.B.4").question_kind, QuestionKind::factor_list);
}

TEST(LoadStandards, ThemesOnlyForWordProblemStandards) {
  EXPECT_TRUE(spec("1.OA.A.1").uses_theme);
  EXPECT_TRUE(spec("2.MD.C.8").uses_theme);
  EXPECT_FALSE(spec("4.NBT.B.4").uses_theme);
  EXPECT_FALSE(spec("8.EE.C.8").uses_theme);
}

TEST(LoadStandards, SamplesAreCanonical) {
  for (const auto& s : shipped()) {
    ASSERT_GE(s.samples.size(), 2u) << s.id;
    for (const auto& sample : s.samples)
      EXPECT_EQ(print_problem(parse_problem(sample.symbolic)), sample.symbolic) << s.id;
  }
}

TEST(LoadStandards, SamplesAreSolvable) {
  for (const auto& s : shipped())
    for (const auto& sample : s.samples)
      EXPECT_NO_THROW(classify_and_solve(parse_problem(sample.symbolic), s.question_kind)) << s.id << "\n"
                                                                                         << sample.symbolic;
}

TEST(LoadStandards, Errors) {
  EXPECT_NO_THROW(load_standards(minimal_with_filter("ChainsOfVariables")));
  try {
    load_standards(minimal_with_filter("Bogus"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.kind(), ConfigErrorKind::unknown_filter);
    EXPECT_EQ(e.where(), "Bogus");
  }

  std::string transform = minimal_with_filter("ChainsOfVariables") + "    transforms: [Inline]\n";
  try {
    load_standards(transform);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.kind(), ConfigErrorKind::unknown_transform);
  }

  std::string bad_sample = minimal_with_filter("ChainsOfVariables");
  bad_sample.replace(bad_sample.find("(1 + 2)"), 7, "(1 +)");
  try {
    load_standards(bad_sample);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.kind(), ConfigErrorKind::bad_sample);
    EXPECT_EQ(e.where(), "1.OA.A.1");
  }

  std::string bad_bounds = minimal_with_filter("ChainsOfVariables");
  bad_bounds.replace(bad_bounds.find("max_number: 20"), 14, "max_number: -1");
  try {
    load_standards(bad_bounds);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.kind(), ConfigErrorKind::schema);
  }

  std::string unknown_field = minimal_with_filter("ChainsOfVariables") + "    colour: blue\n";
  EXPECT_THROW(load_standards(unknown_field), ConfigError);
  EXPECT_THROW(load_standards("standards: [1, 2]"), ConfigError);
  EXPECT_THROW(load_standards("{{{"), ConfigError);
}

TEST(Sampler, Deterministic) {
  for (const auto& s : shipped())
    for (std::uint64_t seed : {1ull, 42ull, 987654321ull})
      EXPECT_TRUE(problem_equal(sample_symbolic(s, seed), sample_symbolic(s, seed))) << s.id;
}

TEST(Sampler, AdditionSubtractionOnly) {
  const auto& s = spec("1.OA.A.1");
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto p = sample_symbolic(s, seed);
    auto use = operators_used(p);
    for (auto op : use.binary) EXPECT_TRUE(op == BinaryOp::add || op == BinaryOp::sub);
    EXPECT_TRUE(use.root_degrees.empty());
    for (const auto& [path, v] : enumerate_constants(p)) {
      EXPECT_GE(v.value(), 0);
      EXPECT_LE(v.value(), 20);
    }
  }
}

TEST(Sampler, ExponentsAppear) {
  const auto& s = spec("6.EE.A.1");
  bool seen = false;
  for (std::uint64_t seed = 0; seed < 100 && !seen; ++seed) {
    auto p = sample_symbolic(s, seed);
    for (const auto& st : p.statements)
      visit_preorder(st.rhs, [&](const ExprPtr& e) {
        if (auto* b = std::get_if<BinOp>(&e->node); b && b->op == BinaryOp::pow) {
          seen = true;
          auto* c = std::get_if<Const>(&b->right->node);
          ASSERT_NE(c, nullptr);
          EXPECT_TRUE(c->value.is_integer());
          EXPECT_FALSE(c->value.is_negative());
        }
      });
  }
  EXPECT_TRUE(seen);
}

TEST(Sampler, PrintParseRoundTrip) {
  std::size_t n = 0;
  for (std::uint64_t seed = 0; n < 1000; ++seed)
    for (const auto& s : shipped()) {
      auto p = sample_symbolic(s, seed);
      auto text = print_problem(p);
      auto back = parse_problem(text);
      EXPECT_TRUE(problem_equal(back, p)) << text;
      EXPECT_EQ(print_problem(back), text);
      if (++n == 1000) break;
    }
}

TEST(GenerateValid, Within20) {
  const auto& s = spec("1.OA.A.1");
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto v = generate_valid(s, seed, 100);
    for (const auto& x : intermediate_values(v.problem, v.answer)) {
      EXPECT_GE(x.value(), 0);
      EXPECT_LE(x.value(), 20);
    }
  }
}

TEST(GenerateValid, ContainsTen) {
  const auto& s = spec("K.OA.A.4");
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto v = generate_valid(s, seed, 1000);
    auto consts = enumerate_constants(v.problem);
    bool pair = false;
    for (std::size_t i = 0; i < consts.size(); ++i)
      for (std::size_t j = i + 1; j < consts.size(); ++j)
        pair |= consts[i].second.value() + consts[j].second.value() == 10;
    EXPECT_TRUE(pair) << print_problem(v.problem);
  }
}

TEST(GenerateValid, ExhaustedWhenInfeasible) {
  StandardSpec s = spec("1.OA.A.1");
  s.filters = {FilterSpec{FilterName::check_intermediate_values,
                          IntermediateValueParams{ExactNumber(1000), ExactNumber(2000)}}};
  GenerationStats stats;
  try {
    generate_valid(s, 7, 50, &stats);
    FAIL();
  } catch (const ExhaustedError& e) {
    EXPECT_EQ(e.attempts(), 50u);
  }
  EXPECT_EQ(stats.attempts, 50u);
  EXPECT_EQ(stats.accepted, 0u);
  std::size_t rejected = 0;
  for (auto& [k, v] : stats.rejections) rejected += v;
  EXPECT_EQ(rejected, 50u);
}

TEST(GenerateValid, Deterministic) {
  for (const auto& s : shipped()) {
    auto a = generate_valid(s, 123, 2000);
    auto b = generate_valid(s, 123, 2000);
    EXPECT_TRUE(problem_equal(a.problem, b.problem)) << s.id;
    EXPECT_EQ(a.attempts, b.attempts);
  }
}

// Every standard yields solvable, in-spec problems.
TEST(GenerateValid, CoverageAcrossStandards) {
  for (const auto& s : shipped()) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      ValidProblem v;
      ASSERT_NO_THROW(v = generate_valid(s, seed, 5000)) << s.id << " seed " << seed;
      auto use = operators_used(v.problem);
      for (auto op : use.binary) EXPECT_TRUE(s.allows(*expr_op_of(op))) << s.id;
      for (auto d : use.root_degrees) EXPECT_TRUE(s.allows(d == 2 ? ExprOp::root2 : ExprOp::root3)) << s.id;
      for (const auto& [path, c] : enumerate_constants(v.problem)) {
        EXPECT_GE(c.value(), s.min_number) << s.id;
        EXPECT_LE(c.value(), s.max_number) << s.id;
      }
      EXPECT_TRUE(answers_equal(classify_and_solve(v.problem, s.question_kind), v.answer)) << s.id;
    }
  }
}

TEST(Transforms, PreserveAnswersOnSampledProblems) {
  for (const auto& s : shipped()) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      auto p = sample_symbolic(s, seed);
      Answer a;
      try {
        a = classify_and_solve(p, s.question_kind);
      } catch (const SolveError&) {
        continue;
      }
      auto pruned = transform_no_useless_variables(p);
      EXPECT_TRUE(answers_equal(classify_and_solve(pruned, s.question_kind), a)) << s.id;
      EXPECT_TRUE(problem_equal(transform_no_useless_variables(pruned), pruned));
      auto simple = transform_simplify(p);
      EXPECT_LE(simple.statements.size(), p.statements.size());
      EXPECT_TRUE(answers_equal(classify_and_solve(simple, s.question_kind), a)) << s.id << "\n" << print_problem(p);
    }
  }
}

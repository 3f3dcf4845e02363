#include <gtest/gtest.h>

#include "mathcamps/dsl/parser.hpp"
#include "mathcamps/followups/realize.hpp"
#include "mathcamps/realization/mock_backend.hpp"
#include "support.hpp"

using namespace mathcamps;
using testing_support::shipped;
using testing_support::spec;

namespace {

const SymbolicProblem& four_plus_three() {
  static const auto p = parse_problem("[[var a = (4 + 3)]]\n[[question h = a]]");
  return p;
}

mpq_class scalar(const Answer& a) { return std::get<ScalarAnswer>(a).value.value(); }

}  // namespace

TEST(ProposeDiff, CounterfactualChangesOneConstant) {
  const auto& s = spec("1.OA.A.1");
  const auto& p = four_plus_three();
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto d = propose_diff(s, p, FollowupKind::counterfactual, seed);
    const auto& cf = std::get<CounterfactualChange>(d);
    EXPECT_FALSE(same_value(cf.old_value, cf.new_value));
    EXPECT_GE(cf.new_value.value(), s.min_number);
    EXPECT_LE(cf.new_value.value(), s.max_number);
    auto q = apply_diff(p, d);
    auto consts = enumerate_constants(q);
    ASSERT_EQ(consts.size(), 2u);
    auto ans = scalar(classify_and_solve(q, s.question_kind));
    EXPECT_EQ(ans, consts[0].second.value() + consts[1].second.value());
    EXPECT_NE(ans, 7);
  }
}

TEST(ProposeDiff, IncrementalAppendsAndRetargets) {
  const auto& s = spec("1.OA.A.1");
  const auto& p = four_plus_three();
  auto d = propose_diff(s, p, FollowupKind::incremental, 3);
  const auto& inc = std::get<IncrementalExtension>(d);
  auto q = apply_diff(p, d);
  ASSERT_EQ(q.statements.size(), p.statements.size() + inc.appended.size());
  EXPECT_TRUE(statement_equal(q.statements[0], p.statements[0]));
  ASSERT_EQ(q.question.targets.size(), 1u);
  EXPECT_NE(q.question.targets[0], 'a');
  EXPECT_TRUE(q.defined_var(q.statements.size() - 1) == q.question.targets[0]);
  EXPECT_EQ(statement_vars(inc.appended[0]).count('a'), 1u);
}

TEST(ProposeDiff, DeterministicAndGated) {
  const auto& s = spec("1.OA.A.1");
  const auto& p = four_plus_three();
  auto a = apply_diff(p, propose_diff(s, p, FollowupKind::counterfactual, 9));
  auto b = apply_diff(p, propose_diff(s, p, FollowupKind::counterfactual, 9));
  EXPECT_TRUE(problem_equal(a, b));
  StandardSpec none = s;
  none.followups.clear();
  EXPECT_THROW(propose_diff(none, p, FollowupKind::counterfactual, 1), NotApplicableError);
  EXPECT_THROW(propose_diff(spec("K.OA.A.4"), p, FollowupKind::incremental, 1), NotApplicableError);
}

TEST(ApplyDiff, SingleNodeRewriteAndInverse) {
  const auto& p = four_plus_three();
  CounterfactualChange cf{ConstantPath{0, Side::rhs, {0}}, ExactNumber(4L), ExactNumber(9L)};
  auto q = apply_diff(p, cf);
  EXPECT_EQ(print_problem(q), "[[var a = (9 + 3)]]\n[[question h = a]]");
  EXPECT_EQ(print_problem(p), "[[var a = (4 + 3)]]\n[[question h = a]]");
  EXPECT_TRUE(problem_equal(apply_diff(q, invert(cf)), p));
}

TEST(ApplyDiff, PathInvalid) {
  auto p = parse_problem("[[var a = 4]]\n[[var b = (a + 3)]]\n[[question h = b]]");
  EXPECT_THROW(apply_diff(p, CounterfactualChange{ConstantPath{1, Side::rhs, {0}}, 4L, 5L}), PathInvalidError);
  EXPECT_THROW(apply_diff(p, CounterfactualChange{ConstantPath{7, Side::rhs, {}}, 4L, 5L}), PathInvalidError);
  EXPECT_THROW(apply_diff(p, CounterfactualChange{ConstantPath{1, Side::rhs, {0, 1}}, 4L, 5L}), PathInvalidError);
  IncrementalExtension bad{{Statement{make_var('c'), make_binop(BinaryOp::add, make_var('z'), make_const(1))}},
                           Question{'h', {'c'}}};
  EXPECT_THROW(apply_diff(p, bad), PathInvalidError);
}

TEST(Followups, InvariantsAcrossStandards) {
  std::size_t cf_count = 0, inc_count = 0;
  for (const auto& s : shipped()) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      auto vp = generate_valid(s, seed, 2000);
      for (auto kind : s.followups) {
        ProblemDiff d;
        try {
          d = propose_diff(s, vp.problem, kind, seed);
        } catch (const ExhaustedError&) {
          continue;
        }
        auto q = apply_diff(vp.problem, d);
        auto v = validate_followup(s, q);
        ASSERT_TRUE(std::holds_alternative<Answer>(v)) << s.id << ": " << std::get<std::string>(v);
        if (auto* cf = std::get_if<CounterfactualChange>(&d)) {
          ++cf_count;
          EXPECT_FALSE(answers_equal(std::get<Answer>(v), vp.answer)) << s.id;
          EXPECT_TRUE(problem_equal(apply_diff(q, invert(*cf)), vp.problem)) << s.id;
        } else {
          ++inc_count;
          for (std::size_t i = 0; i < vp.problem.statements.size(); ++i)
            EXPECT_TRUE(statement_equal(q.statements[i], vp.problem.statements[i])) << s.id;
        }
      }
    }
  }
  EXPECT_GT(cf_count, 1000u);
  EXPECT_GT(inc_count, 500u);
}

TEST(RealizeFollowup, FaithfulAcceptedPerturbingRejected) {
  const auto& s = spec("1.OA.A.1");
  MockRealizationBackend faithful(false), perturbing(true);
  RealizationOptions opt;
  auto rec = std::get<WordProblemRecord>(generate_problem(s, 5, faithful, opt));
  auto d = propose_diff(s, rec.problem, FollowupKind::counterfactual, 5);
  auto ok = realize_followup(s, rec, d, faithful);
  ASSERT_TRUE(std::holds_alternative<FollowUpRecord>(ok));
  const auto& fu = std::get<FollowUpRecord>(ok);
  EXPECT_TRUE(answers_equal(fu.answer, classify_and_solve(apply_diff(rec.problem, d), s.question_kind)));
  EXPECT_EQ(fu.word_text.find("[["), std::string::npos);

  // Perturbing doubles bump the first constant of the recovered follow-up.
  auto recovered = MockRealizationBackend::perturbed(print_problem(fu.problem));
  bool sensitive = !answers_equal(fu.answer, classify_and_solve(parse_problem(recovered), s.question_kind));
  ASSERT_TRUE(sensitive);
  EXPECT_TRUE(std::holds_alternative<GenerationFailure>(realize_followup(s, rec, d, perturbing)));
}

TEST(RealizeFollowup, AttachOnePerKind) {
  const auto& s = spec("2.OA.A.1");
  MockRealizationBackend backend(false);
  RealizationStats stats;
  auto rec = std::get<WordProblemRecord>(generate_problem(s, 1, backend, {}));
  attach_followups(s, rec, backend, &stats);
  ASSERT_EQ(rec.followups.size(), 2u);
  EXPECT_EQ(rec.followups[0].kind, FollowupKind::incremental);
  EXPECT_EQ(rec.followups[1].kind, FollowupKind::counterfactual);
  EXPECT_EQ(stats.followups_emitted["incremental"], 1u);
}

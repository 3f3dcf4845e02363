#include <gtest/gtest.h>

#include "mathcamps/constraints/filters.hpp"
#include "mathcamps/constraints/transforms.hpp"
#include "mathcamps/dsl/parser.hpp"
#include "mathcamps/dsl/printer.hpp"

using namespace mathcamps;

namespace {

SymbolicProblem P(const std::string& text) { return parse_problem(text); }

FilterVerdict run(const FilterSpec& f, const SymbolicProblem& p, QuestionKind kind = QuestionKind::value) {
  return run_filter(f, p, classify_and_solve(p, kind));
}

FilterSpec civ(long lo, long hi) {
  return {FilterName::check_intermediate_values, IntermediateValueParams{ExactNumber(lo), ExactNumber(hi)}};
}

}  // namespace

TEST(NoUselessVariables, RemovesUnreachable) {
  auto out = transform_no_useless_variables(P("[[var a = 2 + 3]]\n[[var c = 7]]\n[[question h = a]]"));
  EXPECT_EQ(print_problem(out), "[[var a = (2 + 3)]]\n[[question h = a]]");
}

TEST(NoUselessVariables, FixedPoint) {
  auto p = P("[[var a = 2 + 3]]\n[[var b = a + 1]]\n[[question h = b]]");
  EXPECT_TRUE(problem_equal(transform_no_useless_variables(p), p));
}

TEST(NoUselessVariables, ChainKeepsAnswer) {
  auto p = P("[[var a = 1 + 1]]\n[[var b = a + 2]]\n[[var c = 9]]\n[[question h = b]]");
  auto out = transform_no_useless_variables(p);
  EXPECT_EQ(print_problem(out), "[[var a = (1 + 1)]]\n[[var b = (a + 2)]]\n[[question h = b]]");
  EXPECT_TRUE(answers_equal(classify_and_solve(p, QuestionKind::value), ScalarAnswer{ExactNumber(4)}));
  EXPECT_TRUE(answers_equal(classify_and_solve(out, QuestionKind::value), ScalarAnswer{ExactNumber(4)}));
}

TEST(NoUselessVariables, KeepsConstraintsThatDetermineUnknowns) {
  auto p = P("[[var x + y = 5]]\n[[var x - y = 1]]\n[[var z = 4]]\n[[question h = x]]");
  auto out = transform_no_useless_variables(p);
  EXPECT_EQ(out.statements.size(), 2u);
}

TEST(Simplify, InlinesSingleUse) {
  auto out = transform_simplify(P("[[var a = 5]]\n[[var b = a + 3]]\n[[question h = b]]"));
  EXPECT_EQ(print_problem(out), "[[var b = (5 + 3)]]\n[[question h = b]]");
}

TEST(Simplify, KeepsMultiUse) {
  auto p = P("[[var a = 5]]\n[[var b = a + a]]\n[[question h = b]]");
  EXPECT_TRUE(problem_equal(transform_simplify(p), p));
}

TEST(Simplify, ProtectsTargets) {
  auto p = P("[[var a = 5]]\n[[question h = a]]");
  EXPECT_TRUE(problem_equal(transform_simplify(p), p));
}

TEST(Simplify, PreservesPrecedence) {
  auto out = transform_simplify(P("[[var a = 2 + 3]]\n[[var b = a * 4]]\n[[question h = b]]"));
  EXPECT_EQ(print_problem(out), "[[var b = ((2 + 3) * 4)]]\n[[question h = b]]");
  EXPECT_TRUE(answers_equal(classify_and_solve(out, QuestionKind::value), ScalarAnswer{ExactNumber(20)}));
}

TEST(Filters, CheckIntermediateValuesBoundary) {
  auto f = civ(0, 20);
  EXPECT_TRUE(run(f, P("[[var a = 15 + 5]]\n[[question h = a]]")).pass);
  auto v = run(f, P("[[var a = 20 + 1/1]]\n[[question h = a]]"));
  EXPECT_FALSE(v.pass);
  EXPECT_EQ(v.reason, "CheckIntermediateValues:above_max:21");
  // A sub-expression of 21 is rejected even though the answer is in range.
  EXPECT_FALSE(run(f, P("[[var a = 14 + 7 - 5]]\n[[question h = a]]")).pass);
  EXPECT_FALSE(run(f, P("[[var a = 3 - 5 + 4]]\n[[question h = a]]")).pass);
}

TEST(Filters, ChainsOfVariables) {
  FilterSpec f{FilterName::chains_of_variables, NoParams{}};
  EXPECT_FALSE(run(f, P("[[var a = 3]]\n[[var b = a]]\n[[question h = b]]")).pass);
  EXPECT_TRUE(run(f, P("[[var a = 3]]\n[[var b = a + 1]]\n[[question h = b]]")).pass);
}

TEST(Filters, ContainsTen) {
  FilterSpec sum{FilterName::contains_ten, ContainsTenParams{TenMode::sum_to_ten}};
  EXPECT_TRUE(run(sum, P("[[var a = 4 + 6]]\n[[question h = a]]")).pass);
  EXPECT_FALSE(run(sum, P("[[var a = 3 + 4]]\n[[question h = a]]")).pass);
  FilterSpec lit{FilterName::contains_ten, ContainsTenParams{TenMode::literal_ten}};
  EXPECT_TRUE(run(lit, P("[[var a = 10 + 4]]\n[[question h = a]]")).pass);
  EXPECT_FALSE(run(lit, P("[[var a = 4 + 6]]\n[[question h = a]]")).pass);
}

TEST(Filters, ProblemLength) {
  FilterSpec f{FilterName::problem_length, ProblemLengthParams{1, 2}};
  EXPECT_TRUE(run(f, P("[[var a = 1]]\n[[var b = a + 2]]\n[[question h = b]]")).pass);
  EXPECT_FALSE(run(f, P("[[var a = 1]]\n[[var b = a + 2]]\n[[var c = b + 1]]\n[[question h = c]]")).pass);
}

TEST(Filters, AnswerFormAndOperatorCount) {
  FilterSpec whole{FilterName::answer_form, AnswerFormParams{AnswerFormKind::integer}};
  EXPECT_TRUE(run(whole, P("[[var a = 6 / 3]]\n[[question h = a]]")).pass);
  EXPECT_FALSE(run(whole, P("[[var a = 7 / 3]]\n[[question h = a]]")).pass);
  FilterSpec ops{FilterName::operator_count, OperatorCountParams{1}};
  EXPECT_TRUE(run(ops, P("[[var a = 1 + 2 + 3]]\n[[question h = a]]")).pass);
  EXPECT_FALSE(run(ops, P("[[var a = 1 + 2 * 3]]\n[[question h = a]]")).pass);
}

TEST(Filters, Pure) {
  auto p = P("[[var a = 9 + 8]]\n[[question h = a]]");
  auto f = civ(0, 10);
  auto v1 = run(f, p), v2 = run(f, p);
  EXPECT_EQ(v1.pass, v2.pass);
  EXPECT_EQ(v1.reason, v2.reason);
}

TEST(Filters, NameRoundTrip) {
  for (auto n : {FilterName::problem_length, FilterName::check_intermediate_values, FilterName::chains_of_variables,
                 FilterName::contains_ten, FilterName::answer_form, FilterName::operator_count})
    EXPECT_EQ(filter_from_string(to_string(n)), n);
  EXPECT_FALSE(filter_from_string("Bogus"));
}

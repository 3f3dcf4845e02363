#include <gtest/gtest.h>

#include "mathcamps/grammar/rng.hpp"
#include "mathcamps/report/render.hpp"

using namespace mathcamps;

namespace {

EvalRecord rec(const std::string& model, const std::string& standard, int grade, bool ok,
               std::vector<std::pair<FollowupKind, bool>> fus = {}, bool available = false) {
  EvalRecord r;
  static int n = 0;
  r.problem_id = "p" + std::to_string(n++);
  r.model = model;
  r.standard = standard;
  r.grade = grade;
  r.main.correct = ok;
  if (available || !fus.empty()) r.followups_available = {FollowupKind::incremental, FollowupKind::counterfactual};
  for (auto [k, c] : fus) r.followup_results.push_back({k, GradedReply{"", std::nullopt, ExtractionStage::rule, c}});
  return r;
}

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

}  // namespace

TEST(Aggregate, Counts) {
  std::vector<EvalRecord> rs{rec("m", "1.OA.A.1", 1, true), rec("m", "1.OA.A.1", 1, true),
                             rec("m", "2.OA.A.1", 2, true), rec("m", "2.OA.A.1", 2, false)};
  auto t = aggregate(rs);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(*t.rows[0].overall.accuracy(), mpq_class(3, 4));
  EXPECT_EQ(*t.rows[0].per_grade.at(2).accuracy(), mpq_class(1, 2));
  EXPECT_TRUE(aggregate({}).rows.empty());
}

TEST(Aggregate, OverallIsProblemWeightedMean) {
  Rng rng(1);
  std::vector<EvalRecord> rs;
  for (int i = 0; i < 500; ++i)
    rs.push_back(rec("m" + std::to_string(rng.uniform(0, 2)), "S" + std::to_string(rng.uniform(0, 6)),
                     static_cast<int>(rng.uniform(0, 8)), rng.chance(0.6)));
  for (const auto& r : aggregate(rs).rows) {
    mpq_class weighted = 0;
    for (const auto& [s, c] : r.per_standard) weighted += *c.accuracy() * c.total;
    weighted /= r.overall.total;
    EXPECT_EQ(weighted, *r.overall.accuracy());
  }
}

TEST(Render, HalfUpRounding) {
  EXPECT_EQ(format_accuracy(mpq_class(23, 25)), "0.92");
  EXPECT_EQ(format_accuracy(mpq_class(16, 25)), "0.64");
  EXPECT_EQ(format_accuracy(mpq_class(1, 8)), "0.13");
  EXPECT_EQ(format_accuracy(mpq_class(1, 1)), "1.00");
  EXPECT_EQ(format_accuracy(mpq_class(2, 3)), "0.67");
  EXPECT_EQ(format_accuracy(std::optional<mpq_class>{}), "-");
}

TEST(Render, TableRowShape) {
  std::vector<EvalRecord> rs;
  for (int i = 0; i < 25; ++i) rs.push_back(rec("GPT-4o", "8.EE.C.8", 8, i < 12));
  for (int i = 0; i < 75; ++i) rs.push_back(rec("GPT-4o", "1.OA.A.1", 1, i < 71));
  auto r = build_report(rs);
  EXPECT_EQ(format_accuracy(r.table.rows[0].overall.accuracy()), "0.83");
  EXPECT_EQ(format_accuracy(r.table.rows[0].per_grade.at(8).accuracy()), "0.48");
  EXPECT_NE(accuracy_tsv(r).find("GPT-4o\t0.83\t"), std::string::npos) << accuracy_tsv(r);
}

TEST(Pareto, HandEnumeratedFixture) {
  AccuracyTable t;
  t.rows = {row("A", {{9, 10}, {8, 10}}), row("B", {{5, 10}, {4, 10}}), row("C", {{10, 10}, {1, 10}})};
  // A>B everywhere; A vs C: C wins S1, A wins S2; B vs C: C wins S1, B wins S2.
  EXPECT_EQ(*pareto_pair_fraction(t), mpq_class(1, 3));
}

TEST(Pareto, Cases) {
  AccuracyTable t;
  t.rows = {row("A", {{9, 10}, {9, 10}}), row("B", {{5, 10}, {5, 10}})};
  EXPECT_EQ(*pareto_pair_fraction(t), 1);
  t.rows = {row("A", {{9, 10}, {1, 10}}), row("B", {{5, 10}, {5, 10}})};
  EXPECT_EQ(*pareto_pair_fraction(t), 0);
  t.rows = {row("A", {{9, 10}, {5, 10}}), row("B", {{5, 10}, {5, 10}})};
  EXPECT_EQ(*pareto_pair_fraction(t), 1);  // weak everywhere, strict once
  t.rows = {row("A", {{9, 10}})};
  EXPECT_FALSE(pareto_pair_fraction(t).has_value());
}

TEST(Pareto, InvariantUnderRelabelingAndMonotoneRescaling) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    AccuracyTable t;
    for (int m = 0; m < 4; ++m) {
      std::vector<std::pair<std::size_t, std::size_t>> cells;
      for (int s = 0; s < 3; ++s) cells.push_back({static_cast<std::size_t>(rng.uniform(0, 4)), 4});
      t.rows.push_back(row("m" + std::to_string(m), cells));
    }
    auto base = *pareto_pair_fraction(t);
    AccuracyTable shuffled = t;
    rng.shuffle(shuffled.rows);
    for (std::size_t i = 0; i < shuffled.rows.size(); ++i) shuffled.rows[i].model = "x" + std::to_string(i);
    EXPECT_EQ(*pareto_pair_fraction(shuffled), base);
    AccuracyTable squared = t;  // k/4 -> k^2/16 keeps every ordering
    for (auto& r : squared.rows)
      for (auto& [s, c] : r.per_standard) c = Cell{c.correct * c.correct, 16};
    EXPECT_EQ(*pareto_pair_fraction(squared), base);
  }
}

TEST(RankChanges, ConstructedExtreme) {
  AccuracyTable t;
  // M is best overall but last on S3.
  t.rows = {row("M", {{10, 10}, {10, 10}, {0, 10}}), row("N", {{6, 10}, {6, 10}, {5, 10}}),
            row("O", {{5, 10}, {5, 10}, {4, 10}})};
  sort_rows(t);
  auto changes = rank_changes(t);
  ASSERT_FALSE(changes.empty());
  EXPECT_EQ(changes[0].model, "M");
  EXPECT_EQ(changes[0].standard, "S3");
  EXPECT_EQ(changes[0].global_rank, 1);
  EXPECT_EQ(changes[0].standard_rank, 3);
  EXPECT_EQ(changes[0].direction, RankDirection::down);
  EXPECT_EQ(render_rank_change(changes[0]), "S3 (1st \xE2\x86\x93 3rd)");
}

TEST(RankChanges, IdenticalModelsNoChanges) {
  AccuracyTable t;
  t.rows = {row("A", {{5, 10}, {7, 10}}), row("B", {{5, 10}, {7, 10}})};
  EXPECT_TRUE(rank_changes(t).empty());
}

TEST(RankChanges, RenderAndOrdinals) {
  RankChange c{"GPT-4o", "8.EE.C.8", 1, 22, RankDirection::down};
  EXPECT_EQ(render_rank_change(c), "8.EE.C.8 (1st \xE2\x86\x93 22nd)");
  EXPECT_EQ(ordinal(11), "11th");
  EXPECT_EQ(ordinal(13), "13th");
  EXPECT_EQ(ordinal(23), "23rd");
  EXPECT_EQ(ordinal(101), "101st");
}

TEST(RankChanges, DenseRanking) {
  auto r = dense_rank({{"a", 5}, {"b", 5}, {"c", 3}, {"d", 1}});
  EXPECT_EQ(r["a"], 1);
  EXPECT_EQ(r["b"], 1);
  EXPECT_EQ(r["c"], 2);
  EXPECT_EQ(r["d"], 3);
}

TEST(Followups, AccuracyWithFollowups) {
  using K = FollowupKind;
  std::vector<EvalRecord> rs{rec("m", "A", 1, true, {{K::incremental, true}, {K::counterfactual, true}}),
                             rec("m", "A", 1, true, {{K::incremental, false}, {K::counterfactual, true}}),
                             rec("m", "B", 1, true)};
  auto awf = accuracy_with_followups(rs);
  EXPECT_EQ(*awf.at("m"), mpq_class(1, 2));  // standard B excluded
  std::vector<EvalRecord> wrong{rec("w", "A", 1, false, {}, true), rec("w", "A", 1, false, {}, true)};
  EXPECT_EQ(*accuracy_with_followups(wrong).at("w"), 0);
}

TEST(Followups, KindAccuracy) {
  std::vector<EvalRecord> rs;
  for (int i = 0; i < 10; ++i) rs.push_back(rec("m", "A", 1, true, {{FollowupKind::incremental, i < 9}}));
  auto k = followup_kind_accuracy(rs).at("m");
  EXPECT_EQ(*k.incremental.accuracy(), mpq_class(9, 10));
  EXPECT_FALSE(k.counterfactual.accuracy().has_value());
  EXPECT_EQ(k.followups_seen(), 10u);
}

TEST(Followups, NeverAboveMainAccuracy) {
  Rng rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<EvalRecord> rs;
    int n = static_cast<int>(rng.uniform(1, 30));
    for (int i = 0; i < n; ++i) {
      bool ok = rng.chance(0.6);
      std::vector<std::pair<FollowupKind, bool>> fus;
      bool avail = rng.chance(0.7);
      if (ok && avail) {
        if (rng.chance(0.5)) fus.push_back({FollowupKind::incremental, rng.chance(0.5)});
        if (rng.chance(0.5)) fus.push_back({FollowupKind::counterfactual, rng.chance(0.5)});
      }
      rs.push_back(rec("m" + std::to_string(rng.uniform(0, 1)), "S" + std::to_string(rng.uniform(0, 3)), 1, ok, fus, avail));
    }
    auto awf = accuracy_with_followups(rs);
    auto main = main_accuracy_on_followup_standards(rs);
    for (const auto& [m, a] : awf) {
      ASSERT_EQ(a.has_value(), main.at(m).has_value());
      if (a) EXPECT_LE(*a, *main.at(m));
    }
  }
}

TEST(Pearson, Fixtures) {
  std::vector<double> xs{1, 2, 3, 4, 5};
  std::vector<double> lin, neg;
  for (double x : xs) {
    lin.push_back(2 * x + 1);
    neg.push_back(-x);
  }
  EXPECT_NEAR(pearson(xs, lin), 1.0, 1e-12);
  EXPECT_NEAR(pearson(xs, neg), -1.0, 1e-12);
  // (0,0),(1,1),(2,1),(3,2): means 1.5 and 1; sxy = 3, sxx = 5, syy = 2.
  EXPECT_NEAR(pearson({0, 1, 2, 3}, {0, 1, 1, 2}), 3 / std::sqrt(10.0), 1e-12);
  EXPECT_THROW(pearson({1, 2, 3}, {4, 4, 4}), std::invalid_argument);
  EXPECT_THROW(pearson({1, 2}, {1, 2}), std::invalid_argument);
  EXPECT_LT(permutation_p_value(xs, lin, 2000), 0.05);
}

TEST(Correlation, ScoresFile) {
  auto scores = parse_scores("# model score\nA 0.9\nB\t0.5\n\nC 0.1\n");
  ASSERT_EQ(scores.size(), 3u);
  EXPECT_EQ(scores[1].first, "B");
  EXPECT_THROW(parse_scores("A x\n"), std::invalid_argument);
  AccuracyTable t;
  t.rows = {row("A", {{9, 10}}), row("B", {{5, 10}}), row("C", {{2, 10}})};
  auto c = correlate(t, scores, 100);
  ASSERT_TRUE(c.r.has_value());
  EXPECT_GT(*c.r, 0.9);
  auto flat = correlate(t, parse_scores("A 1\nB 1\nC 1\n"), 100);
  EXPECT_FALSE(flat.r.has_value());
  EXPECT_EQ(flat.error, "pearson: zero variance");
}

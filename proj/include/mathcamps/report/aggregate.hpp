#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "mathcamps/eval/run.hpp"
#include "mathcamps/grammar/rng.hpp"

namespace mathcamps {

struct Cell {
  std::size_t correct = 0;
  std::size_t total = 0;

  void add(bool ok) {
    ++total;
    if (ok) ++correct;
  }
  std::optional<mpq_class> accuracy() const {
    if (total == 0) return std::nullopt;
    mpq_class q(static_cast<unsigned long>(correct), static_cast<unsigned long>(total));
    q.canonicalize();
    return q;
  }
};

struct ModelRow {
  std::string model;
  Cell overall;
  std::map<int, Cell> per_grade;
  std::map<std::string, Cell> per_standard;
};

struct AccuracyTable {
  std::vector<ModelRow> rows;  // overall accuracy descending, then model id
};

inline void sort_rows(AccuracyTable& t) {
  std::stable_sort(t.rows.begin(), t.rows.end(), [](const ModelRow& a, const ModelRow& b) {
    auto x = a.overall.accuracy().value_or(-1), y = b.overall.accuracy().value_or(-1);
    if (x != y) return x > y;
    return a.model < b.model;
  });
}

inline AccuracyTable aggregate(const std::vector<EvalRecord>& records) {
  std::map<std::string, ModelRow> rows;
  for (const auto& r : records) {
    auto& row = rows[r.model];
    row.model = r.model;
    row.overall.add(r.correct());
    row.per_grade[r.grade].add(r.correct());
    row.per_standard[r.standard].add(r.correct());
  }
  AccuracyTable t;
  for (auto& [_, row] : rows) t.rows.push_back(std::move(row));
  sort_rows(t);
  return t;
}

/// Standards that appear for every model in the table.
inline std::vector<std::string> shared_standards(const AccuracyTable& t) {
  std::vector<std::string> out;
  if (t.rows.empty()) return out;
  for (const auto& [s, cell] : t.rows.front().per_standard) {
    bool everywhere = std::all_of(t.rows.begin(), t.rows.end(), [&](const ModelRow& r) {
      auto it = r.per_standard.find(s);
      return it != r.per_standard.end() && it->second.total > 0;
    });
    if (everywhere) out.push_back(s);
  }
  return out;
}

/// Weakly better everywhere and strictly better somewhere.
inline bool dominates(const ModelRow& a, const ModelRow& b, const std::vector<std::string>& standards) {
  bool strict = false;
  for (const auto& s : standards) {
    auto x = *a.per_standard.at(s).accuracy(), y = *b.per_standard.at(s).accuracy();
    if (x < y) return false;
    if (x > y) strict = true;
  }
  return strict;
}

/// Fraction of unordered model pairs with a Pareto winner; undefined for
/// fewer than two models.
inline std::optional<mpq_class> pareto_pair_fraction(const AccuracyTable& t) {
  const std::size_t n = t.rows.size();
  if (n < 2) return std::nullopt;
  auto standards = shared_standards(t);
  unsigned long pairs = 0, winners = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      ++pairs;
      if (dominates(t.rows[i], t.rows[j], standards) || dominates(t.rows[j], t.rows[i], standards)) ++winners;
    }
  mpq_class q(winners, pairs);
  q.canonicalize();
  return q;
}

/// Dense ranking, best (largest) = 1, ties share a rank.
inline std::map<std::string, int> dense_rank(const std::map<std::string, mpq_class>& scores) {
  std::set<mpq_class, std::greater<>> distinct;
  for (const auto& [_, v] : scores) distinct.insert(v);
  std::map<std::string, int> out;
  for (const auto& [k, v] : scores) out[k] = static_cast<int>(std::distance(distinct.begin(), distinct.find(v))) + 1;
  return out;
}

enum class RankDirection { up, down };

struct RankChange {
  std::string model;
  std::string standard;
  int global_rank = 0;
  int standard_rank = 0;
  RankDirection direction = RankDirection::down;
};

/// Per model, the shared standard with the largest rank difference (ties by
/// standard id); models whose ranks never move are omitted.
inline std::vector<RankChange> rank_changes(const AccuracyTable& t) {
  std::vector<RankChange> out;
  auto standards = shared_standards(t);
  std::map<std::string, mpq_class> overall;
  for (const auto& r : t.rows)
    if (auto a = r.overall.accuracy()) overall[r.model] = *a;
  auto global = dense_rank(overall);
  std::map<std::string, std::map<std::string, int>> per_standard;
  for (const auto& s : standards) {
    std::map<std::string, mpq_class> scores;
    for (const auto& r : t.rows) scores[r.model] = *r.per_standard.at(s).accuracy();
    per_standard[s] = dense_rank(scores);
  }
  for (const auto& r : t.rows) {
    if (!global.count(r.model)) continue;
    int g = global[r.model];
    std::optional<RankChange> best;
    for (const auto& s : standards) {
      int sr = per_standard[s][r.model];
      if (sr == g) continue;
      if (!best || std::abs(sr - g) > std::abs(best->standard_rank - g))
        best = RankChange{r.model, s, g, sr, sr > g ? RankDirection::down : RankDirection::up};
    }
    if (best) out.push_back(*best);
  }
  return out;
}

// ---- follow-ups ---------------------------------------------------------------

inline std::set<std::string> followup_standards(const std::vector<EvalRecord>& records) {
  std::set<std::string> out;
  for (const auto& r : records)
    if (!r.followups_available.empty()) out.insert(r.standard);
  return out;
}

/// Per model: main answer and every asked follow-up correct, over problems of
/// standards that have follow-ups.
inline std::map<std::string, std::optional<mpq_class>> accuracy_with_followups(const std::vector<EvalRecord>& records) {
  auto standards = followup_standards(records);
  std::map<std::string, Cell> cells;
  for (const auto& r : records) {
    auto& cell = cells[r.model];
    if (!standards.count(r.standard)) continue;
    bool ok = r.correct() && std::all_of(r.followup_results.begin(), r.followup_results.end(),
                                         [](const FollowupResult& f) { return f.reply.correct; });
    cell.add(ok);
  }
  std::map<std::string, std::optional<mpq_class>> out;
  for (const auto& [m, c] : cells) out[m] = c.accuracy();
  return out;
}

/// Main accuracy over the same problems `accuracy_with_followups` counts.
inline std::map<std::string, std::optional<mpq_class>> main_accuracy_on_followup_standards(
    const std::vector<EvalRecord>& records) {
  auto standards = followup_standards(records);
  std::map<std::string, Cell> cells;
  for (const auto& r : records) {
    auto& cell = cells[r.model];
    if (standards.count(r.standard)) cell.add(r.correct());
  }
  std::map<std::string, std::optional<mpq_class>> out;
  for (const auto& [m, c] : cells) out[m] = c.accuracy();
  return out;
}

struct FollowupKindAccuracy {
  Cell main;
  Cell incremental;
  Cell counterfactual;
  std::size_t followups_seen() const { return incremental.total + counterfactual.total; }
};

inline std::map<std::string, FollowupKindAccuracy> followup_kind_accuracy(const std::vector<EvalRecord>& records) {
  std::map<std::string, FollowupKindAccuracy> out;
  for (const auto& r : records) {
    auto& row = out[r.model];
    row.main.add(r.correct());
    for (const auto& f : r.followup_results)
      (f.kind == FollowupKind::incremental ? row.incremental : row.counterfactual).add(f.reply.correct);
  }
  return out;
}

// ---- correlation ----------------------------------------------------------------

/// Sample Pearson correlation. Throws std::invalid_argument on unequal
/// lengths, fewer than three points or zero variance.
inline double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("pearson: length mismatch");
  if (xs.size() < 3) throw std::invalid_argument("pearson: need at least 3 points");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0 || syy == 0) throw std::invalid_argument("pearson: zero variance");
  return sxy / std::sqrt(sxx * syy);
}

/// Two-sided permutation p-value with add-one smoothing.
inline double permutation_p_value(const std::vector<double>& xs, std::vector<double> ys, std::size_t permutations = 10000,
                                  std::uint64_t seed = 0) {
  const double observed = std::abs(pearson(xs, ys));
  Rng rng(seed);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < permutations; ++i) {
    rng.shuffle(ys);
    if (std::abs(pearson(xs, ys)) >= observed - 1e-12) ++hits;
  }
  return static_cast<double>(hits + 1) / static_cast<double>(permutations + 1);
}

}  // namespace mathcamps

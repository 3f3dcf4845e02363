#pragma once

#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mathcamps/report/aggregate.hpp"

namespace mathcamps {

/// Half-up rounding to two decimals: 23/25 -> "0.92", 1/8 -> "0.13".
inline std::string format_accuracy(const mpq_class& q) {
  mpz_class hundredths = q.get_num() * 200 + q.get_den();
  mpz_class den = q.get_den() * 2;
  mpz_fdiv_q(hundredths.get_mpz_t(), hundredths.get_mpz_t(), den.get_mpz_t());
  bool neg = hundredths < 0;
  mpz_class a = abs(hundredths);
  mpz_class whole = a / 100, frac = a % 100;
  std::string f = frac.get_str();
  if (f.size() < 2) f = "0" + f;
  return (neg ? "-" : "") + whole.get_str() + "." + f;
}

inline std::string format_accuracy(const std::optional<mpq_class>& q) { return q ? format_accuracy(*q) : "-"; }

inline std::string ordinal(int n) {
  int mod100 = n % 100, mod10 = n % 10;
  const char* suffix = "th";
  if (mod100 < 11 || mod100 > 13) {
    if (mod10 == 1) suffix = "st";
    else if (mod10 == 2) suffix = "nd";
    else if (mod10 == 3) suffix = "rd";
  }
  return std::to_string(n) + suffix;
}

inline std::string grade_label(int g) { return g == 0 ? "K" : std::to_string(g); }

/// "8.EE.C.8 (1st ↓ 22nd)"
inline std::string render_rank_change(const RankChange& c) {
  return c.standard + " (" + ordinal(c.global_rank) + (c.direction == RankDirection::down ? " \xE2\x86\x93 " : " \xE2\x86\x91 ") +
         ordinal(c.standard_rank) + ")";
}

// ---- external scores and correlation -------------------------------------------

/// Two columns per line: model id and score, separated by whitespace or a
/// tab. Blank lines and `#` comments are skipped.
inline std::vector<std::pair<std::string, double>> parse_scores(const std::string& text) {
  std::vector<std::pair<std::string, double>> out;
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    auto s = line.find_first_not_of(" \t\r");
    if (s == std::string::npos || line[s] == '#') continue;
    auto cut = line.find_last_of(" \t");
    if (cut == std::string::npos || cut < s) throw std::invalid_argument("scores line " + std::to_string(n) + ": expected two columns");
    std::string model = line.substr(s, cut - s);
    while (!model.empty() && (model.back() == ' ' || model.back() == '\t')) model.pop_back();
    try {
      out.emplace_back(model, std::stod(line.substr(cut + 1)));
    } catch (const std::exception&) {
      throw std::invalid_argument("scores line " + std::to_string(n) + ": score is not a number");
    }
  }
  return out;
}

struct Correlation {
  std::vector<std::string> models;
  std::vector<double> external;
  std::vector<double> mathcamps;
  std::optional<double> r;
  std::optional<double> p_value;
  std::string error;
};

inline Correlation correlate(const AccuracyTable& t, const std::vector<std::pair<std::string, double>>& scores,
                             std::size_t permutations = 10000) {
  Correlation c;
  std::map<std::string, double> ext(scores.begin(), scores.end());
  for (const auto& row : t.rows) {
    auto it = ext.find(row.model);
    auto acc = row.overall.accuracy();
    if (it == ext.end() || !acc) continue;
    c.models.push_back(row.model);
    c.external.push_back(it->second);
    c.mathcamps.push_back(acc->get_d());
  }
  try {
    c.r = pearson(c.external, c.mathcamps);
    c.p_value = permutation_p_value(c.external, c.mathcamps, permutations);
  } catch (const std::invalid_argument& e) {
    c.error = e.what();
  }
  return c;
}

// ---- report bundle ---------------------------------------------------------------

struct Report {
  AccuracyTable table;
  std::map<std::string, std::optional<mpq_class>> with_followups;
  std::map<std::string, std::optional<mpq_class>> main_on_followup_standards;
  std::map<std::string, FollowupKindAccuracy> by_kind;
  std::optional<mpq_class> pareto;
  std::vector<RankChange> changes;
  std::optional<Correlation> correlation;
};

inline Report build_report(const std::vector<EvalRecord>& records,
                           const std::optional<std::vector<std::pair<std::string, double>>>& scores = std::nullopt) {
  Report r;
  r.table = aggregate(records);
  r.with_followups = accuracy_with_followups(records);
  r.main_on_followup_standards = main_accuracy_on_followup_standards(records);
  r.by_kind = followup_kind_accuracy(records);
  r.pareto = pareto_pair_fraction(r.table);
  r.changes = rank_changes(r.table);
  if (scores) r.correlation = correlate(r.table, *scores);
  return r;
}

inline std::set<int> grades_in(const AccuracyTable& t) {
  std::set<int> g;
  for (const auto& row : t.rows)
    for (const auto& [grade, _] : row.per_grade) g.insert(grade);
  return g;
}

inline std::string accuracy_tsv(const Report& r) {
  auto grades = grades_in(r.table);
  std::string out = "model\toverall\tn";
  for (int g : grades) out += "\t" + grade_label(g);
  out += "\n";
  for (const auto& row : r.table.rows) {
    out += row.model + "\t" + format_accuracy(row.overall.accuracy()) + "\t" + std::to_string(row.overall.total);
    for (int g : grades) {
      auto it = row.per_grade.find(g);
      out += "\t" + (it == row.per_grade.end() ? std::string("-") : format_accuracy(it->second.accuracy()));
    }
    out += "\n";
  }
  return out;
}

inline std::string standards_tsv(const Report& r) {
  std::string out = "model\tstandard\tcorrect\ttotal\taccuracy\n";
  for (const auto& row : r.table.rows)
    for (const auto& [s, c] : row.per_standard)
      out += row.model + "\t" + s + "\t" + std::to_string(c.correct) + "\t" + std::to_string(c.total) + "\t" +
             format_accuracy(c.accuracy()) + "\n";
  return out;
}

inline std::string followups_tsv(const Report& r) {
  std::string out = "model\tmain\tmain_followup_standards\twith_followups\tincremental\tcounterfactual\tfollowups_seen\n";
  for (const auto& row : r.table.rows) {
    const auto& k = r.by_kind.at(row.model);
    auto get = [&](const auto& m) { auto it = m.find(row.model); return it == m.end() ? std::optional<mpq_class>{} : it->second; };
    out += row.model + "\t" + format_accuracy(k.main.accuracy()) + "\t" + format_accuracy(get(r.main_on_followup_standards)) +
           "\t" + format_accuracy(get(r.with_followups)) + "\t" + format_accuracy(k.incremental.accuracy()) + "\t" +
           format_accuracy(k.counterfactual.accuracy()) + "\t" + std::to_string(k.followups_seen()) + "\n";
  }
  return out;
}

inline std::string rank_changes_tsv(const Report& r) {
  std::string out = "model\tstandard\tglobal_rank\tstandard_rank\tdirection\n";
  for (const auto& c : r.changes)
    out += c.model + "\t" + c.standard + "\t" + std::to_string(c.global_rank) + "\t" + std::to_string(c.standard_rank) +
           "\t" + (c.direction == RankDirection::down ? "down" : "up") + "\n";
  return out;
}

inline std::string correlation_tsv(const Correlation& c) {
  std::string out = "model\texternal\tmathcamps\n";
  char buf[64];
  for (std::size_t i = 0; i < c.models.size(); ++i) {
    std::snprintf(buf, sizeof buf, "\t%.6f\t%.6f\n", c.external[i], c.mathcamps[i]);
    out += c.models[i] + buf;
  }
  return out;
}

inline nlohmann::ordered_json report_json(const Report& r) {
  using J = nlohmann::ordered_json;
  auto acc = [](const std::optional<mpq_class>& q) -> J {
    if (!q) return nullptr;
    return J{{"exact", q->get_str()}, {"value", q->get_d()}};
  };
  auto cell = [&](const Cell& c) { return J{{"correct", c.correct}, {"total", c.total}, {"accuracy", acc(c.accuracy())}}; };
  J models = J::array();
  for (const auto& row : r.table.rows) {
    J grades = J::object(), standards = J::object();
    for (const auto& [g, c] : row.per_grade) grades[grade_label(g)] = cell(c);
    for (const auto& [s, c] : row.per_standard) standards[s] = cell(c);
    const auto& k = r.by_kind.at(row.model);
    auto find = [&](const auto& m) { auto it = m.find(row.model); return it == m.end() ? std::optional<mpq_class>{} : it->second; };
    models.push_back({{"model", row.model},
                      {"overall", cell(row.overall)},
                      {"grades", grades},
                      {"standards", standards},
                      {"with_followups", acc(find(r.with_followups))},
                      {"main_on_followup_standards", acc(find(r.main_on_followup_standards))},
                      {"incremental", cell(k.incremental)},
                      {"counterfactual", cell(k.counterfactual)},
                      {"followups_seen", k.followups_seen()}});
  }
  J changes = J::array();
  for (const auto& c : r.changes)
    changes.push_back({{"model", c.model},
                       {"standard", c.standard},
                       {"global_rank", c.global_rank},
                       {"standard_rank", c.standard_rank},
                       {"direction", c.direction == RankDirection::down ? "down" : "up"}});
  J out{{"models", models}, {"pareto_pair_fraction", acc(r.pareto)}, {"rank_changes", changes}};
  if (r.correlation) {
    const auto& c = *r.correlation;
    J series = J::array();
    for (std::size_t i = 0; i < c.models.size(); ++i)
      series.push_back({{"model", c.models[i]}, {"external", c.external[i]}, {"mathcamps", c.mathcamps[i]}});
    out["correlation"] = {{"pearson_r", c.r ? J(*c.r) : J(nullptr)},
                          {"p_value", c.p_value ? J(*c.p_value) : J(nullptr)},
                          {"error", c.error.empty() ? J(nullptr) : J(c.error)},
                          {"series", series}};
  }
  return out;
}

inline std::string report_text(const Report& r) {
  std::ostringstream o;
  auto grades = grades_in(r.table);
  o << "Final answer accuracy\n";
  o << "model\tall";
  for (int g : grades) o << "\t" << grade_label(g);
  o << "\n";
  for (const auto& row : r.table.rows) {
    o << row.model << "\t" << format_accuracy(row.overall.accuracy());
    for (int g : grades) {
      auto it = row.per_grade.find(g);
      o << "\t" << (it == row.per_grade.end() ? "-" : format_accuracy(it->second.accuracy()));
    }
    o << "\n";
  }
  o << "\nLargest rank changes on a single standard\n";
  if (r.changes.empty()) o << "(none)\n";
  for (const auto& c : r.changes) o << c.model << "\t" << render_rank_change(c) << "\n";
  o << "\nFollow-ups (standards with follow-ups only)\n";
  o << "model\tmain\tacc. with follow-ups\tincremental\tcounterfactual\tseen\n";
  for (const auto& row : r.table.rows) {
    const auto& k = r.by_kind.at(row.model);
    auto find = [&](const auto& m) { auto it = m.find(row.model); return it == m.end() ? std::optional<mpq_class>{} : it->second; };
    o << row.model << "\t" << format_accuracy(find(r.main_on_followup_standards)) << "\t"
      << format_accuracy(find(r.with_followups)) << "\t" << format_accuracy(k.incremental.accuracy()) << "\t"
      << format_accuracy(k.counterfactual.accuracy()) << "\t" << k.followups_seen() << "\n";
  }
  o << "\nPareto pairs: " << (r.pareto ? format_accuracy(*r.pareto) + " (" + r.pareto->get_str() + ")" : "-") << "\n";
  if (r.correlation) {
    const auto& c = *r.correlation;
    if (c.r) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "Pearson r = %.3f (permutation p = %.2g, n = %zu)\n", *c.r, *c.p_value,
                    c.models.size());
      o << buf;
    } else {
      o << "Pearson r: " << c.error << "\n";
    }
  }
  return o.str();
}

}  // namespace mathcamps

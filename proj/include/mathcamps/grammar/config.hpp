#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "mathcamps/dsl/parser.hpp"
#include "mathcamps/error.hpp"
#include "mathcamps/grammar/standard.hpp"

namespace mathcamps {

namespace detail {

[[noreturn]] inline void schema_error(const std::string& path, const std::string& detail) {
  throw ConfigError(ConfigErrorKind::schema, path, detail);
}

inline void check_keys(const YAML::Node& node, const std::string& path, const std::set<std::string>& allowed) {
  if (!node.IsMap()) schema_error(path, "expected a mapping");
  for (const auto& kv : node) {
    auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) schema_error(path + "." + key, "unknown field");
  }
}

template <typename T>
T read_scalar(const YAML::Node& node, const std::string& path) {
  if (!node.IsScalar()) schema_error(path, "expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception& e) {
    schema_error(path, e.what());
  }
}

inline ExactNumber read_rational(const YAML::Node& node, const std::string& path) {
  auto text = read_scalar<std::string>(node, path);
  auto v = ExactNumber::parse(text);
  if (!v) schema_error(path, "not a number: " + text);
  return *v;
}

inline std::vector<std::string> read_string_list(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) schema_error(path, "expected a list");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < node.size(); ++i)
    out.push_back(read_scalar<std::string>(node[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

template <typename T>
std::pair<T, T> read_pair(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence() || node.size() != 2) schema_error(path, "expected [lo, hi]");
  std::pair<T, T> out{read_scalar<T>(node[0], path + "[0]"), read_scalar<T>(node[1], path + "[1]")};
  if (out.first > out.second) schema_error(path, "empty range");
  return out;
}

inline FilterSpec read_filter(const YAML::Node& node, const std::string& path, const StandardSpec& spec) {
  YAML::Node name_node = node.IsScalar() ? node : node["name"];
  if (!name_node) schema_error(path, "filter needs a name");
  auto name = read_scalar<std::string>(name_node, path + ".name");
  auto kind = filter_from_string(name);
  if (!kind) throw ConfigError(ConfigErrorKind::unknown_filter, name, "in " + path);
  if (node.IsScalar()) {
    // Bare names take defaults.
    YAML::Node wrapped;
    wrapped["name"] = name;
    return read_filter(wrapped, path, spec);
  }
  FilterSpec f{*kind, NoParams{}};
  switch (*kind) {
    case FilterName::problem_length: {
      check_keys(node, path, {"name", "min_statements", "max_statements"});
      ProblemLengthParams p;
      if (node["min_statements"]) p.min_statements = read_scalar<std::size_t>(node["min_statements"], path + ".min_statements");
      if (node["max_statements"]) p.max_statements = read_scalar<std::size_t>(node["max_statements"], path + ".max_statements");
      if (p.min_statements > p.max_statements) schema_error(path, "min_statements > max_statements");
      f.params = p;
      break;
    }
    case FilterName::check_intermediate_values: {
      check_keys(node, path, {"name", "min_value", "max_value"});
      IntermediateValueParams p{spec.min_value, spec.max_value};
      if (node["min_value"]) p.min_value = read_rational(node["min_value"], path + ".min_value");
      if (node["max_value"]) p.max_value = read_rational(node["max_value"], path + ".max_value");
      f.params = p;
      break;
    }
    case FilterName::chains_of_variables:
      check_keys(node, path, {"name"});
      break;
    case FilterName::contains_ten: {
      check_keys(node, path, {"name", "mode"});
      ContainsTenParams p;
      if (node["mode"]) {
        auto mode = read_scalar<std::string>(node["mode"], path + ".mode");
        if (mode == "sum_to_ten")
          p.mode = TenMode::sum_to_ten;
        else if (mode == "literal_ten")
          p.mode = TenMode::literal_ten;
        else
          schema_error(path + ".mode", "expected sum_to_ten or literal_ten");
      }
      f.params = p;
      break;
    }
    case FilterName::answer_form: {
      check_keys(node, path, {"name", "form"});
      AnswerFormParams p;
      if (node["form"]) {
        auto form = read_scalar<std::string>(node["form"], path + ".form");
        static const std::pair<const char*, AnswerFormKind> forms[] = {
            {"scalar", AnswerFormKind::scalar},
            {"integer", AnswerFormKind::integer},
            {"comparison", AnswerFormKind::comparison},
            {"factor_list", AnswerFormKind::factor_list},
            {"quotient_remainder", AnswerFormKind::quotient_remainder},
            {"assignment", AnswerFormKind::assignment}};
        bool found = false;
        for (auto& [n, k] : forms)
          if (form == n) {
            p.form = k;
            found = true;
          }
        if (!found) schema_error(path + ".form", "unknown answer form " + form);
      }
      f.params = p;
      break;
    }
    case FilterName::operator_count: {
      check_keys(node, path, {"name", "max_distinct"});
      OperatorCountParams p;
      if (node["max_distinct"]) p.max_distinct = read_scalar<std::size_t>(node["max_distinct"], path + ".max_distinct");
      f.params = p;
      break;
    }
  }
  return f;
}

inline const std::set<std::string> kStandardFields = {
    "description", "short_description", "grade", "problem", "question_kind", "expression_ops",
    "number_domain", "min_number", "max_number", "min_value", "max_value", "max_depth",
    "statement_count", "filters", "transforms", "followups", "uses_theme", "samples",
    "decimal_places", "max_denominator", "max_exponent", "operand_range", "sides"};

inline StandardSpec read_standard(const std::string& id, const YAML::Node& node) {
  const std::string path = "standards." + id;
  check_keys(node, path, kStandardFields);
  StandardSpec s;
  s.id = id;
  auto grade = grade_from_id(id);
  if (!grade) schema_error(path, "id does not start with K or a grade digit 1-8");
  s.grade = *grade;
  if (node["grade"]) {
    auto g = read_scalar<std::string>(node["grade"], path + ".grade");
    if (g != s.grade_label()) schema_error(path + ".grade", "grade " + g + " does not match id");
  }

  auto required = [&](const char* key) {
    if (!node[key]) schema_error(path + "." + key, "missing field");
    return node[key];
  };
  s.description = read_scalar<std::string>(required("description"), path + ".description");
  s.short_description = node["short_description"]
                            ? read_scalar<std::string>(node["short_description"], path + ".short_description")
                            : s.description;

  if (node["problem"]) {
    auto v = read_scalar<std::string>(node["problem"], path + ".problem");
    auto shape = shape_from_string(v);
    if (!shape) schema_error(path + ".problem", "unknown problem shape " + v);
    s.problem = *shape;
  }
  {
    auto v = read_scalar<std::string>(required("question_kind"), path + ".question_kind");
    auto k = question_kind_from_string(v);
    if (!k) schema_error(path + ".question_kind", "unknown question kind " + v);
    s.question_kind = *k;
    if (s.question_kind == QuestionKind::value && s.description.find("remainder") != std::string::npos &&
        (s.problem == ProblemShape::division_remainder || s.problem == ProblemShape::multistep_remainder))
      s.question_kind = QuestionKind::quotient_remainder;
  }
  if (node["expression_ops"]) {
    auto ops = read_string_list(node["expression_ops"], path + ".expression_ops");
    for (std::size_t i = 0; i < ops.size(); ++i) {
      auto op = expr_op_from_string(ops[i]);
      if (!op) schema_error(path + ".expression_ops[" + std::to_string(i) + "]", "unknown operator " + ops[i]);
      s.expression_ops.insert(*op);
    }
  }
  {
    auto v = read_scalar<std::string>(required("number_domain"), path + ".number_domain");
    auto d = domain_from_string(v);
    if (!d) schema_error(path + ".number_domain", "unknown number domain " + v);
    s.number_domain = *d;
  }
  s.min_number = read_scalar<long>(required("min_number"), path + ".min_number");
  s.max_number = read_scalar<long>(required("max_number"), path + ".max_number");
  if (s.min_number > s.max_number) schema_error(path, "min_number > max_number");
  s.min_value = read_rational(required("min_value"), path + ".min_value");
  s.max_value = read_rational(required("max_value"), path + ".max_value");
  if (cmp(s.min_value.value(), s.max_value.value()) > 0) schema_error(path, "min_value > max_value");
  s.max_depth = read_scalar<int>(required("max_depth"), path + ".max_depth");
  if (s.max_depth < 1) schema_error(path + ".max_depth", "must be >= 1");
  if (node["statement_count"]) s.statement_count = read_pair<int>(node["statement_count"], path + ".statement_count");
  if (s.statement_count.first < 1) schema_error(path + ".statement_count", "must be >= 1");

  if (node["decimal_places"]) s.decimal_places = read_scalar<int>(node["decimal_places"], path + ".decimal_places");
  if (node["max_denominator"]) s.max_denominator = read_scalar<int>(node["max_denominator"], path + ".max_denominator");
  if (node["max_exponent"]) s.max_exponent = read_scalar<int>(node["max_exponent"], path + ".max_exponent");
  s.operand_range = {std::max(1L, s.min_number), s.max_number};
  if (node["operand_range"]) s.operand_range = read_pair<long>(node["operand_range"], path + ".operand_range");
  if (node["sides"]) s.sides = read_pair<int>(node["sides"], path + ".sides");
  if (s.decimal_places < 1 || s.decimal_places > 6) schema_error(path + ".decimal_places", "must be in 1..6");
  if (s.max_denominator < 2) schema_error(path + ".max_denominator", "must be >= 2");
  if (s.sides.first < 3) schema_error(path + ".sides", "a polygon has at least 3 sides");

  if (node["filters"]) {
    const auto& fl = node["filters"];
    if (!fl.IsSequence()) schema_error(path + ".filters", "expected a list");
    for (std::size_t i = 0; i < fl.size(); ++i)
      s.filters.push_back(read_filter(fl[i], path + ".filters[" + std::to_string(i) + "]", s));
  }
  if (node["transforms"]) {
    for (const auto& name : read_string_list(node["transforms"], path + ".transforms")) {
      auto t = transform_from_string(name);
      if (!t) throw ConfigError(ConfigErrorKind::unknown_transform, name, "in " + path + ".transforms");
      s.transforms.push_back(*t);
    }
  }
  if (node["followups"]) {
    for (const auto& name : read_string_list(node["followups"], path + ".followups")) {
      auto k = followup_from_string(name);
      if (!k) schema_error(path + ".followups", "unknown follow-up kind " + name);
      s.followups.insert(*k);
    }
  }
  s.uses_theme = s.description.find("word problems") != std::string::npos;
  if (node["uses_theme"]) s.uses_theme = read_scalar<bool>(node["uses_theme"], path + ".uses_theme");

  const auto& samples = required("samples");
  if (!samples.IsSequence() || samples.size() < 2) schema_error(path + ".samples", "need at least two samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::string sp = path + ".samples[" + std::to_string(i) + "]";
    check_keys(samples[i], sp, {"symbolic", "word"});
    if (!samples[i]["symbolic"] || !samples[i]["word"]) schema_error(sp, "needs symbolic and word");
    SamplePair pair{read_scalar<std::string>(samples[i]["symbolic"], sp + ".symbolic"),
                    read_scalar<std::string>(samples[i]["word"], sp + ".word")};
    while (!pair.symbolic.empty() && (pair.symbolic.back() == '\n' || pair.symbolic.back() == ' '))
      pair.symbolic.pop_back();
    while (!pair.word.empty() && (pair.word.back() == '\n' || pair.word.back() == ' ')) pair.word.pop_back();
    try {
      (void)parse_problem(pair.symbolic);
    } catch (const ParseError& e) {
      throw ConfigError(ConfigErrorKind::bad_sample, id, "sample " + std::to_string(i) + ": " + e.what());
    }
    s.samples.push_back(std::move(pair));
  }
  return s;
}

}  // namespace detail

/// Parses a standards config document. Entries keep document order.
inline std::vector<StandardSpec> load_standards(const std::string& config_text) {
  YAML::Node root;
  try {
    root = YAML::Load(config_text);
  } catch (const YAML::Exception& e) {
    detail::schema_error("<document>", e.what());
  }
  if (!root.IsMap()) detail::schema_error("<document>", "expected a mapping with a 'standards' key");
  detail::check_keys(root, "<document>", {"standards"});
  const auto& standards = root["standards"];
  if (!standards || !standards.IsMap()) detail::schema_error("standards", "expected a mapping of standard ids");
  std::vector<StandardSpec> out;
  std::set<std::string> seen;
  for (const auto& kv : standards) {
    auto id = kv.first.as<std::string>();
    if (!seen.insert(id).second) detail::schema_error("standards." + id, "duplicate id");
    out.push_back(detail::read_standard(id, kv.second));
  }
  return out;
}

inline std::vector<StandardSpec> load_standards_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(ConfigErrorKind::schema, path, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_standards(buf.str());
}

inline const StandardSpec* find_standard(const std::vector<StandardSpec>& specs, const std::string& id) {
  for (const auto& s : specs)
    if (s.id == id) return &s;
  return nullptr;
}

}  // namespace mathcamps

#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mathcamps/error.hpp"
#include "mathcamps/grammar/rng.hpp"

namespace mathcamps {

/// One theme per line; blank lines and `#` comments are skipped.
inline std::vector<std::string> parse_themes(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto s = line.find_first_not_of(" \t");
    if (s == std::string::npos || line[s] == '#') continue;
    auto e = line.find_last_not_of(" \t");
    out.push_back(line.substr(s, e - s + 1));
  }
  return out;
}

inline std::vector<std::string> load_themes_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(ConfigErrorKind::schema, path, "cannot open theme file");
  std::stringstream ss;
  ss << in.rdbuf();
  auto themes = parse_themes(ss.str());
  if (themes.empty()) throw ConfigError(ConfigErrorKind::schema, path, "theme file is empty");
  return themes;
}

/// Seeded from the problem seed so regeneration picks the same theme.
inline const std::string& sample_theme(const std::vector<std::string>& themes, std::uint64_t seed) {
  if (themes.empty()) throw std::invalid_argument("sample_theme: empty theme list");
  Rng rng(mix_seed(seed, "theme"));
  return themes[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(themes.size()) - 1))];
}

}  // namespace mathcamps

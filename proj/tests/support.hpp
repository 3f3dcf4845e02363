#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mathcamps/grammar/config.hpp"

namespace testing_support {

inline const std::vector<mathcamps::StandardSpec>& shipped() {
  static const auto specs = mathcamps::load_standards_file(std::string(MATHCAMPS_DATA_DIR) + "/standards.yaml");
  return specs;
}

inline const mathcamps::StandardSpec& spec(const std::string& id) {
  auto* s = mathcamps::find_standard(shipped(), id);
  if (!s) throw std::runtime_error("missing standard " + id);
  return *s;
}

inline std::string data_path(const std::string& name) { return std::string(MATHCAMPS_DATA_DIR) + "/" + name; }

}  // namespace testing_support

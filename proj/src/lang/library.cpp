#include "kickoff/lang/library.hpp"

#include <algorithm>

namespace kickoff::lang {

std::optional<Builtin> builtin_from_name(std::string_view name) {
  for (const auto& b : kBuiltins) {
    if (b.name == name) return b.id;
  }
  return std::nullopt;
}

std::string_view builtin_name(Builtin b) { return kBuiltins[static_cast<std::size_t>(b)].name; }

const HelperSpec* find_helper(std::string_view name) {
  for (const auto& h : kHelpers) {
    if (h.name == name) return &h;
  }
  return nullptr;
}

std::optional<Constant> constant_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kConstantNames.size(); ++i) {
    if (kConstantNames[i] == name) return static_cast<Constant>(i);
  }
  return std::nullopt;
}

bool is_attribute(std::string_view name) {
  return std::find(kAttributes.begin(), kAttributes.end(), name) != kAttributes.end();
}

}  // namespace kickoff::lang

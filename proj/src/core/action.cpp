#include "kickoff/core/action.hpp"

namespace kickoff {

namespace {

constexpr std::array<std::string_view, kActionCount> kBareNames = {
    "Idle", "", "", "", "", "", "", "", "", "ShortPass", "LongPass", "HighPass", "Shoot", "Slide", "Dribble", "Sprint"};

}  // namespace

std::optional<Action> action_from_code(int code) {
  if (code < 0 || code >= kActionCount) return std::nullopt;
  return static_cast<Action>(code);
}

Action move_action(Compass c) { return static_cast<Action>(1 + static_cast<int>(c)); }

Compass move_direction(Action a) { return static_cast<Compass>(static_cast<int>(a) - 1); }

std::string action_name(Action a) {
  if (is_move(a)) return "Move(" + std::string(compass_name(move_direction(a))) + ")";
  return std::string(kBareNames[static_cast<std::size_t>(a)]);
}

std::optional<Action> action_from_name(std::string_view name) {
  if (name.empty()) return std::nullopt;
  for (int i = 0; i < kActionCount; ++i) {
    if (kBareNames[static_cast<std::size_t>(i)] == name) return static_cast<Action>(i);
  }
  return std::nullopt;
}

}  // namespace kickoff

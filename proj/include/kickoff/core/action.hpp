#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "kickoff/core/geometry.hpp"

namespace kickoff {

/// The shared 16-action alphabet. Integer codes are stable and part of the
/// wire format.
enum class Action : std::uint8_t {
  Idle = 0,
  MoveN = 1,
  MoveNE = 2,
  MoveE = 3,
  MoveSE = 4,
  MoveS = 5,
  MoveSW = 6,
  MoveW = 7,
  MoveNW = 8,
  ShortPass = 9,
  LongPass = 10,
  HighPass = 11,
  Shoot = 12,
  Slide = 13,
  Dribble = 14,
  Sprint = 15,
};

inline constexpr int kActionCount = 16;

constexpr int action_code(Action a) { return static_cast<int>(a); }
std::optional<Action> action_from_code(int code);

constexpr bool is_move(Action a) { return a >= Action::MoveN && a <= Action::MoveNW; }
constexpr bool is_kick(Action a) { return a >= Action::ShortPass && a <= Action::Shoot; }

Action move_action(Compass c);
/// Compass of a Move action. Precondition: is_move(a).
Compass move_direction(Action a);

/// Display name used by the scenario language ("Idle", "Move(NE)", "Shoot").
std::string action_name(Action a);
/// Parses the bare action names of the language (everything but Move).
std::optional<Action> action_from_name(std::string_view name);

/// An action as issued to the simulator. Scripted players may attach an aim
/// point: for passes it replaces heading-based receiver selection, for shots
/// it replaces the goal-centre target. RL agents never set it.
struct Command {
  Action action = Action::Idle;
  std::optional<Vec2> aim;

  Command() = default;
  Command(Action a) : action(a) {}  // NOLINT(google-explicit-constructor)
  Command(Action a, Vec2 target) : action(a), aim(target) {}

  friend bool operator==(const Command&, const Command&) = default;
};

}  // namespace kickoff

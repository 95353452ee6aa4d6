#include "kickoff/lang/ast.hpp"

namespace kickoff::lang {

std::string class_name(const ObjectClass& c) {
  if (c.is_ball) return "Ball";
  return std::string(c.team == Team::Left ? "Left" : "Right") + std::string(role_name(c.role));
}

std::optional<ObjectClass> class_from_name(std::string_view word) {
  if (word == "Ball") return ObjectClass{true, Team::Left, Role::CM};
  Team team;
  if (word.starts_with("Left")) {
    team = Team::Left;
    word.remove_prefix(4);
  } else if (word.starts_with("Right")) {
    team = Team::Right;
    word.remove_prefix(5);
  } else {
    return std::nullopt;
  }
  auto role = role_from_name(word);
  if (!role) return std::nullopt;
  return ObjectClass{false, team, *role};
}

const WithProp* ObjectDecl::find_prop(std::string_view prop) const {
  for (const auto& p : with_props) {
    if (p.name == prop) return &p;
  }
  return nullptr;
}

std::optional<std::size_t> Program::ego() const { return find_object("ego"); }

const BehaviorDef* Program::find_behavior(std::string_view name) const {
  for (const auto& b : behaviors) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

std::optional<std::size_t> Program::find_object(std::string_view name) const {
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (objects[i].name && *objects[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Program::find_param(std::string_view name) const {
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].name == name) return i;
  }
  return std::nullopt;
}

}  // namespace kickoff::lang

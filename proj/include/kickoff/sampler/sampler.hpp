#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kickoff/core/errors.hpp"
#include "kickoff/core/geometry.hpp"
#include "kickoff/core/rng.hpp"
#include "kickoff/core/world.hpp"
#include "kickoff/lang/ast.hpp"
#include "kickoff/lang/eval.hpp"

namespace kickoff {

class Unsatisfiable : public Error {
 public:
  explicit Unsatisfiable(int attempts)
      : Error("no scene satisfied the requirements after " + std::to_string(attempts) + " attempts"),
        attempts_(attempts) {}
  int attempts() const { return attempts_; }

 private:
  int attempts_;
};

class ConflictingSpecifiers : public Error {
 public:
  using Error::Error;
};

inline constexpr int kDefaultMaxRejections = 1000;
/// Half-width of the box around a role's home spot used when a player has no
/// position specifier.
inline constexpr double kDefaultPlacementJitter = 0.05;

struct ScenePlayer {
  Team team = Team::Left;
  Role role = Role::CM;
  Vec2 pos;
  Vec2 heading{1.0, 0.0};
  Controller controller;
  /// Selected behavior, if the declaration carries one (the ego keeps its
  /// behavior for scripted-policy use even though the RL slot drives it).
  std::optional<lang::BehaviorCall> behavior;
  std::size_t object_index = 0;
};

/// One concrete draw from a program.
struct Scene {
  std::uint64_t seed = 0;
  int attempts = 0;  // rejection attempts consumed, including the accepted one
  std::vector<ScenePlayer> players;  // index = player id
  Vec2 ball;
  std::optional<PlayerId> ego;
  std::vector<lang::Value> params;   // sampled parameter values
  std::vector<lang::ObjRef> objects; // declaration index -> entity
};

/// Draws one value of a literal-parameterised distribution or literal.
lang::Value sample_distribution(const lang::Expr& e, RngStream& rng);

/// Rejection-samples a scene from a checked program. Throws Unsatisfiable
/// after max_rejections failed attempts.
Scene sample_scene(const lang::Program& program, const FieldSpec& field, RngStream& rng,
                   int max_rejections = kDefaultMaxRejections);

/// Initial world of a scene: tick 0, score 0-0, the ball owned by the
/// nearest player within control_radius (ties by smallest id).
WorldState scene_to_world(const Scene& scene, double control_radius);

/// Evaluation environment binding a scene's parameters and objects.
lang::EvalEnv scene_env(const Scene& scene, const lang::Program& program, const FieldSpec& field);

/// {"seed","players":[{"team","role","x","y","hx","hy","controller"}],"ball":{"x","y"}}
std::string scene_to_json(const Scene& scene);

}  // namespace kickoff

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kickoff/core/action.hpp"
#include "kickoff/core/errors.hpp"
#include "kickoff/core/geometry.hpp"
#include "kickoff/core/rng.hpp"
#include "kickoff/core/world.hpp"
#include "kickoff/lang/ast.hpp"

namespace kickoff::lang {

class EvalError : public Error {
 public:
  using Error::Error;
};

/// Invalid distribution parameters (empty interval, negative sigma, bad weights).
class BadParams : public Error {
 public:
  using Error::Error;
};

/// A scene-time expression read an object that is declared later.
class ForwardReference : public Error {
 public:
  explicit ForwardReference(const std::string& what) : Error("forward reference to " + what) {}
};

/// A player or the ball.
struct ObjRef {
  PlayerId player = -1;
  bool is_ball = false;
  static ObjRef ball() { return {-1, true}; }
  friend bool operator==(const ObjRef&, const ObjRef&) = default;
};

struct Value;

/// A behavior selected by `do` or `with behavior`, with evaluated arguments.
struct BehaviorCall {
  bool builtin = false;
  int index = 0;  // Builtin enumerator or program behavior index
  std::vector<Value> args;
  friend bool operator==(const BehaviorCall&, const BehaviorCall&);
};

using ValueNode =
    std::variant<std::monostate, double, bool, std::string, Vec2, Compass, Command, Region, ObjRef, BehaviorCall>;

struct Value {
  ValueNode v;

  Value() = default;
  template <class T>
  Value(T x) : v(std::move(x)) {}  // NOLINT(google-explicit-constructor)

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(v);
  }
  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&v);
  }
  bool is_none() const { return is<std::monostate>(); }
  friend bool operator==(const Value&, const Value&) = default;
};

std::string_view value_type_name(const Value& v);

/// Per-scene data shared by every evaluation in an episode.
struct EvalEnv {
  const Program* program = nullptr;
  const FieldSpec* field = nullptr;
  std::vector<Value> params;   // sampled, in declaration order
  std::vector<ObjRef> objects; // object declaration index -> entity
};

struct EvalContext {
  const EvalEnv* env = nullptr;
  const WorldState* world = nullptr;
  /// Scene time only: players[i] has been positioned. Null at run time.
  const std::vector<bool>* placed = nullptr;
  bool ball_placed = true;
  std::optional<PlayerId> self;
  const std::vector<Value>* locals = nullptr;
  /// Source of distribution draws; evaluation of a distribution without one
  /// is an error.
  RngStream* rng = nullptr;
};

Value evaluate(const Expr& e, const EvalContext& ctx);

double eval_number(const Expr& e, const EvalContext& ctx);
bool eval_bool(const Expr& e, const EvalContext& ctx);
/// A point: a pair or the position of an object.
Vec2 eval_point(const Expr& e, const EvalContext& ctx);
/// A `take` operand.
Command eval_command(const Expr& e, const EvalContext& ctx);
/// A `do` / `with behavior` operand.
BehaviorCall eval_behavior(const Expr& e, const EvalContext& ctx);

/// Coercions used by evaluator clients (builtins receive Values).
double as_number(const Value& v);
bool as_bool(const Value& v);
Vec2 as_point(const Value& v, const EvalContext& ctx);
/// Unit heading from a compass, a vector, or a number of degrees (0 = E).
Vec2 as_heading(const Value& v);

}  // namespace kickoff::lang

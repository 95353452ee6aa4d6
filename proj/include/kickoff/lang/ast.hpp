#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kickoff/core/errors.hpp"
#include "kickoff/core/geometry.hpp"
#include "kickoff/core/world.hpp"

namespace kickoff::lang {

/// Owning pointer with value semantics: copies deep-copy and == compares the
/// pointees. Lets recursive AST nodes default their comparisons.
template <class T>
class Box {
 public:
  Box() : p_(std::make_unique<T>()) {}
  Box(T value) : p_(std::make_unique<T>(std::move(value))) {}  // NOLINT(google-explicit-constructor)
  Box(const Box& o) : p_(std::make_unique<T>(*o.p_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& o) {
    if (this != &o) p_ = std::make_unique<T>(*o.p_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;
  ~Box() = default;

  T& operator*() { return *p_; }
  const T& operator*() const { return *p_; }
  T* operator->() { return p_.get(); }
  const T* operator->() const { return p_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a.p_ == *b.p_; }

 private:
  std::unique_ptr<T> p_;
};

/// Source location carried by nodes. Locations are reporting metadata and
/// compare equal regardless of value, so re-parsed text that only differs in
/// layout is structurally identical.
struct Loc {
  SourcePos pos;
  friend bool operator==(const Loc&, const Loc&) { return true; }
};

/// What a name or call resolves to. Filled in by validate(); never part of
/// structural comparison.
struct Binding {
  enum class Kind {
    Unresolved,
    Param,        // index into program params
    Object,       // index into program objects
    Region,       // name of a FieldSpec region (resolved by name at run time)
    Action,       // index = action code
    Local,        // index into the enclosing behavior's formals
    Self,
    BallObject,   // the ball (declared or implicit)
    Tick,
    Constant,     // index into the builtin constant table
    UserBehavior, // index into program behaviors
    BuiltinBehavior,
    Helper,
  };
  Kind kind = Kind::Unresolved;
  int index = -1;
  friend bool operator==(const Binding&, const Binding&) { return true; }
};

struct Expr;
using ExprBox = Box<Expr>;

struct NumberLit {
  double value = 0.0;
  friend bool operator==(const NumberLit&, const NumberLit&) = default;
};
struct BoolLit {
  bool value = false;
  friend bool operator==(const BoolLit&, const BoolLit&) = default;
};
struct StringLit {
  std::string value;
  friend bool operator==(const StringLit&, const StringLit&) = default;
};
/// `(x, y)`.
struct PairExpr {
  ExprBox x;
  ExprBox y;
  friend bool operator==(const PairExpr&, const PairExpr&) = default;
};
struct RangeExpr {
  ExprBox lo;
  ExprBox hi;
  friend bool operator==(const RangeExpr&, const RangeExpr&) = default;
};
struct NormalExpr {
  ExprBox mean;
  ExprBox stddev;
  friend bool operator==(const NormalExpr&, const NormalExpr&) = default;
};
struct UniformExpr {
  std::vector<Expr> options;
  friend bool operator==(const UniformExpr&, const UniformExpr&) = default;
};
struct DiscreteOption;
struct DiscreteExpr {
  std::vector<DiscreteOption> options;
  friend bool operator==(const DiscreteExpr&, const DiscreteExpr&) = default;
};
struct NameExpr {
  std::string name;
  Binding binding;
  friend bool operator==(const NameExpr&, const NameExpr&) = default;
};
struct CompassExpr {
  Compass dir = Compass::E;
  friend bool operator==(const CompassExpr&, const CompassExpr&) = default;
};
struct AttrExpr {
  ExprBox object;
  std::string attr;
  friend bool operator==(const AttrExpr&, const AttrExpr&) = default;
};

enum class UnaryOp { Neg, Not };
enum class BinaryOp { Or, And, Eq, Ne, Lt, Le, Gt, Ge, Add, Sub, Mul, Div };

struct UnaryExpr {
  UnaryOp op = UnaryOp::Neg;
  ExprBox operand;
  friend bool operator==(const UnaryExpr&, const UnaryExpr&) = default;
};
struct BinaryExpr {
  BinaryOp op = BinaryOp::Add;
  ExprBox lhs;
  ExprBox rhs;
  friend bool operator==(const BinaryExpr&, const BinaryExpr&) = default;
};
struct CallExpr {
  std::string callee;
  std::vector<Expr> args;
  Binding binding;
  friend bool operator==(const CallExpr&, const CallExpr&) = default;
};
/// `toward <ref>`: unit vector from the subject toward a point or object.
struct TowardExpr {
  ExprBox target;
  friend bool operator==(const TowardExpr&, const TowardExpr&) = default;
};

using ExprNode = std::variant<NumberLit, BoolLit, StringLit, PairExpr, RangeExpr, NormalExpr, UniformExpr,
                              DiscreteExpr, NameExpr, CompassExpr, AttrExpr, UnaryExpr, BinaryExpr, CallExpr,
                              TowardExpr>;

struct Expr {
  ExprNode node;
  Loc loc;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
  template <class T>
  T* as() {
    return std::get_if<T>(&node);
  }
  friend bool operator==(const Expr&, const Expr&) = default;
};

struct DiscreteOption {
  Expr value;
  Expr weight;
  friend bool operator==(const DiscreteOption&, const DiscreteOption&) = default;
};

// ---- behaviors -----------------------------------------------------------

struct Stmt;
using Block = std::vector<Stmt>;

struct TakeStmt {
  Expr action;
  friend bool operator==(const TakeStmt&, const TakeStmt&) = default;
};
struct WaitStmt {
  friend bool operator==(const WaitStmt&, const WaitStmt&) = default;
};
/// `do <call>` or `do <call> until <cond>`.
struct DoStmt {
  Expr call;
  std::optional<Expr> until;
  friend bool operator==(const DoStmt&, const DoStmt&) = default;
};
struct TerminateStmt {
  friend bool operator==(const TerminateStmt&, const TerminateStmt&) = default;
};
struct IfStmt {
  Expr cond;
  Block then_body;
  Block else_body;
  friend bool operator==(const IfStmt&, const IfStmt&) = default;
};
struct WhileStmt {
  Expr cond;
  Block body;
  friend bool operator==(const WhileStmt&, const WhileStmt&) = default;
};
struct InterruptClause {
  Expr cond;
  Block body;
  Loc loc;
  friend bool operator==(const InterruptClause&, const InterruptClause&) = default;
};
/// Clauses are stored in source order; later clauses have higher priority.
struct TryStmt {
  Block body;
  std::vector<InterruptClause> interrupts;
  friend bool operator==(const TryStmt&, const TryStmt&) = default;
};

using StmtNode = std::variant<TakeStmt, WaitStmt, DoStmt, TerminateStmt, IfStmt, WhileStmt, TryStmt>;

struct Stmt {
  StmtNode node;
  Loc loc;
  friend bool operator==(const Stmt&, const Stmt&) = default;
};

struct BehaviorDef {
  std::string name;
  std::vector<std::string> params;
  Block body;
  Loc loc;
  friend bool operator==(const BehaviorDef&, const BehaviorDef&) = default;
};

struct WhenClause {
  Expr cond;
  Expr reward;
  friend bool operator==(const WhenClause&, const WhenClause&) = default;
};
struct TerminateWhenClause {
  Expr cond;
  friend bool operator==(const TerminateWhenClause&, const TerminateWhenClause&) = default;
};
using MonitorClause = std::variant<WhenClause, TerminateWhenClause>;

struct MonitorDef {
  std::string name;
  std::vector<MonitorClause> clauses;
  Loc loc;
  friend bool operator==(const MonitorDef&, const MonitorDef&) = default;
};

// ---- scene declarations --------------------------------------------------

enum class SpecKind { At, In, AheadOf, Behind, LeftOf, RightOf, OffsetBy, Facing };

struct Specifier {
  SpecKind kind = SpecKind::At;
  Expr value;               // position, region, reference object, offset, or heading
  std::optional<Expr> by;   // distance for the relative specifiers
  Loc loc;
  friend bool operator==(const Specifier&, const Specifier&) = default;
};

struct WithProp {
  std::string name;
  Expr value;
  Loc loc;
  friend bool operator==(const WithProp&, const WithProp&) = default;
};

/// Team and role of a declared player, or the ball.
struct ObjectClass {
  bool is_ball = false;
  Team team = Team::Left;
  Role role = Role::CM;
  friend bool operator==(const ObjectClass&, const ObjectClass&) = default;
};

std::string class_name(const ObjectClass& c);
std::optional<ObjectClass> class_from_name(std::string_view word);

struct ObjectDecl {
  std::optional<std::string> name;
  ObjectClass cls;
  std::vector<Specifier> specifiers;
  std::vector<WithProp> with_props;
  Loc loc;

  const WithProp* find_prop(std::string_view prop) const;
  friend bool operator==(const ObjectDecl&, const ObjectDecl&) = default;
};

struct ParamDecl {
  std::string name;
  Expr value;
  Loc loc;
  friend bool operator==(const ParamDecl&, const ParamDecl&) = default;
};

/// A parsed scenario program.
struct Program {
  std::vector<ParamDecl> params;
  std::vector<ObjectDecl> objects;  // declaration order
  std::vector<BehaviorDef> behaviors;
  std::vector<MonitorDef> monitors;
  std::vector<Expr> requirements;
  std::vector<Expr> terminate_when;

  /// Index of the object named `ego`, if any.
  std::optional<std::size_t> ego() const;
  const BehaviorDef* find_behavior(std::string_view name) const;
  std::optional<std::size_t> find_object(std::string_view name) const;
  std::optional<std::size_t> find_param(std::string_view name) const;

  friend bool operator==(const Program&, const Program&) = default;
};

/// Default distance of `ahead of` / `behind` / `left of` / `right of`.
inline constexpr double kDefaultRelativeDistance = 0.05;

}  // namespace kickoff::lang

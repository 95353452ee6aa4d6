#include "kickoff/lang/validate.hpp"

#include <set>

#include "kickoff/core/action.hpp"
#include "kickoff/lang/library.hpp"
#include "kickoff/lang/parser.hpp"

namespace kickoff::lang {

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& ds) {
  std::string out = "validation failed:";
  for (const auto& d : ds) {
    out += "\n  " + std::to_string(d.pos.line) + ":" + std::to_string(d.pos.col) + ": " + d.message;
  }
  return out;
}

bool is_distribution(const Expr& e) {
  return e.as<RangeExpr>() || e.as<NormalExpr>() || e.as<UniformExpr>() || e.as<DiscreteExpr>();
}

enum class Scope {
  Param,     // parameter initialisers: earlier params only
  Scene,     // object specifiers and properties
  Global,    // requirements, monitors, termination conditions
  Behavior,  // behavior bodies
};

class Checker {
 public:
  Checker(Program& p, const FieldSpec& f) : prog_(p), field_(f) {}

  std::vector<Diagnostic> run() {
    check_declarations();
    for (std::size_t i = 0; i < prog_.params.size(); ++i) {
      visible_params_ = i;
      expr(prog_.params[i].value, Scope::Param);
      check_reserved_param(prog_.params[i]);
    }
    visible_params_ = prog_.params.size();
    for (auto& o : prog_.objects) object(o);
    for (auto& r : prog_.requirements) expr(r, Scope::Global);
    for (auto& t : prog_.terminate_when) expr(t, Scope::Global);
    for (auto& m : prog_.monitors) {
      for (auto& c : m.clauses) {
        if (auto* w = std::get_if<WhenClause>(&c)) {
          expr(w->cond, Scope::Global);
          expr(w->reward, Scope::Global);
        } else {
          expr(std::get<TerminateWhenClause>(c).cond, Scope::Global);
        }
      }
    }
    for (auto& b : prog_.behaviors) {
      behavior_ = &b;
      block(b.body);
    }
    behavior_ = nullptr;
    return std::move(diags_);
  }

 private:
  void report(const Loc& loc, std::string msg) { diags_.push_back({loc.pos, std::move(msg)}); }

  void check_declarations() {
    std::set<std::string, std::less<>> seen;
    for (const auto& p : prog_.params) {
      if (!seen.insert(p.name).second) report(p.loc, "duplicate parameter '" + p.name + "'");
    }
    seen.clear();
    bool gk[2] = {false, false};
    bool ball = false;
    for (const auto& o : prog_.objects) {
      if (o.name && !seen.insert(*o.name).second) report(o.loc, "duplicate object name '" + *o.name + "'");
      if (o.cls.is_ball) {
        if (ball) report(o.loc, "duplicate ball");
        ball = true;
        if (o.name && *o.name == "ego") report(o.loc, "ego must be a player");
        continue;
      }
      if (o.cls.role == Role::GK) {
        bool& flag = gk[o.cls.team == Team::Left ? 0 : 1];
        if (flag) report(o.loc, "duplicate goalkeeper");
        flag = true;
      }
    }
    seen.clear();
    for (const auto& b : prog_.behaviors) {
      if (builtin_from_name(b.name)) {
        report(b.loc, "behavior '" + b.name + "' shadows a builtin");
      } else if (!seen.insert(b.name).second) {
        report(b.loc, "duplicate behavior '" + b.name + "'");
      }
      std::set<std::string, std::less<>> formals;
      for (const auto& f : b.params) {
        if (!formals.insert(f).second) report(b.loc, "duplicate formal '" + f + "'");
      }
    }
    seen.clear();
    for (const auto& m : prog_.monitors) {
      if (!seen.insert(m.name).second) report(m.loc, "duplicate monitor '" + m.name + "'");
    }
  }

  void check_reserved_param(const ParamDecl& p) {
    if (p.name == kParamPossessionTermination && !p.value.as<BoolLit>()) {
      report(p.loc, "parameter '" + p.name + "' must be true or false");
    }
    if (p.name == kParamMaxTicks) {
      const auto* n = p.value.as<NumberLit>();
      if (!n || n->value < 1) report(p.loc, "parameter '" + p.name + "' must be a positive number");
    }
  }

  void object(ObjectDecl& o) {
    for (auto& s : o.specifiers) {
      if (s.kind == SpecKind::In) {
        if (auto* n = s.value.as<NameExpr>(); n && !resolve_name(*n, Scope::Scene)) {
          report(s.value.loc, "unresolved region '" + n->name + "'");
        } else if (!n) {
          expr(s.value, Scope::Scene);
        }
      } else {
        expr(s.value, Scope::Scene);
      }
      if (s.by) expr(*s.by, Scope::Scene);
    }
    std::set<std::string, std::less<>> props;
    for (auto& w : o.with_props) {
      if (!props.insert(w.name).second) {
        report(w.loc, "duplicate property '" + w.name + "'");
      } else if (w.name == "behavior") {
        behavior_ref(w.value, Scope::Scene);
      } else {
        report(w.loc, "unknown property '" + w.name + "'");
      }
    }
  }

  // ---- names -----------------------------------------------------------

  bool resolve_name(NameExpr& n, Scope scope) {
    using K = Binding::Kind;
    const std::string& s = n.name;
    if (scope == Scope::Behavior && behavior_) {
      for (std::size_t i = 0; i < behavior_->params.size(); ++i) {
        if (behavior_->params[i] == s) {
          n.binding = {K::Local, static_cast<int>(i)};
          return true;
        }
      }
    }
    if (s == "self") {
      if (scope == Scope::Behavior || scope == Scope::Scene) {
        n.binding = {K::Self, -1};
        return true;
      }
      return false;
    }
    if (s == "ball" && scope != Scope::Param) {
      n.binding = {K::BallObject, -1};
      return true;
    }
    if (s == "tick" && scope != Scope::Param) {
      n.binding = {K::Tick, -1};
      return true;
    }
    for (std::size_t i = 0; i < visible_params_; ++i) {
      if (prog_.params[i].name == s) {
        n.binding = {K::Param, static_cast<int>(i)};
        return true;
      }
    }
    if (scope != Scope::Param) {
      if (auto idx = prog_.find_object(s)) {
        n.binding = {K::Object, static_cast<int>(*idx)};
        return true;
      }
    }
    if (auto a = action_from_name(s)) {
      n.binding = {K::Action, action_code(*a)};
      return true;
    }
    if (field_.find_region(s)) {
      n.binding = {K::Region, 0};
      return true;
    }
    if (auto c = constant_from_name(s)) {
      n.binding = {K::Constant, static_cast<int>(*c)};
      return true;
    }
    return false;
  }

  // ---- expressions -----------------------------------------------------

  void expr(Expr& e, Scope scope, bool in_distribution = false) {
    if (in_distribution && is_distribution(e)) {
      report(e.loc, "nested sampling in distribution parameters");
      return;
    }
    std::visit(
        [&](auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, PairExpr>) {
            expr(*n.x, scope, in_distribution);
            expr(*n.y, scope, in_distribution);
          } else if constexpr (std::is_same_v<T, RangeExpr>) {
            expr(*n.lo, scope, true);
            expr(*n.hi, scope, true);
          } else if constexpr (std::is_same_v<T, NormalExpr>) {
            expr(*n.mean, scope, true);
            expr(*n.stddev, scope, true);
          } else if constexpr (std::is_same_v<T, UniformExpr>) {
            for (auto& o : n.options) expr(o, scope, true);
          } else if constexpr (std::is_same_v<T, DiscreteExpr>) {
            for (auto& o : n.options) {
              expr(o.value, scope, true);
              expr(o.weight, scope, true);
            }
          } else if constexpr (std::is_same_v<T, NameExpr>) {
            if (!resolve_name(n, scope)) report(e.loc, "unresolved name '" + n.name + "'");
          } else if constexpr (std::is_same_v<T, AttrExpr>) {
            expr(*n.object, scope, in_distribution);
            if (!is_attribute(n.attr)) report(e.loc, "unknown attribute '" + n.attr + "'");
          } else if constexpr (std::is_same_v<T, UnaryExpr>) {
            expr(*n.operand, scope, in_distribution);
          } else if constexpr (std::is_same_v<T, BinaryExpr>) {
            expr(*n.lhs, scope, in_distribution);
            expr(*n.rhs, scope, in_distribution);
          } else if constexpr (std::is_same_v<T, CallExpr>) {
            call(e, n, scope, in_distribution);
          } else if constexpr (std::is_same_v<T, TowardExpr>) {
            expr(*n.target, scope, in_distribution);
          }
        },
        e.node);
  }

  void call(const Expr& e, CallExpr& c, Scope scope, bool in_distribution) {
    const HelperSpec* h = find_helper(c.callee);
    if (!h) {
      if (builtin_from_name(c.callee) || prog_.find_behavior(c.callee)) {
        report(e.loc, "behavior '" + c.callee + "' used as a value");
      } else {
        report(e.loc, "unknown function '" + c.callee + "'");
      }
      return;
    }
    c.binding = {Binding::Kind::Helper, static_cast<int>(h->id)};
    const int n = static_cast<int>(c.args.size());
    if (n < h->min_args || n > h->max_args) {
      report(e.loc, "wrong number of arguments to '" + c.callee + "'");
      return;
    }
    for (auto& a : c.args) expr(a, scope, in_distribution);
  }

  /// Operand of `take`.
  void action_expr(Expr& e) {
    if (auto* n = e.as<NameExpr>()) {
      if (!resolve_name(*n, Scope::Behavior)) report(e.loc, "unknown action '" + n->name + "'");
      return;
    }
    if (auto* c = e.as<CallExpr>()) {
      const HelperSpec* h = find_helper(c->callee);
      if (!h || !h->yields_action) {
        report(e.loc, "unknown action '" + c->callee + "'");
        return;
      }
      expr(e, Scope::Behavior);
      return;
    }
    if (auto* u = e.as<UniformExpr>()) {
      for (auto& o : u->options) distribution_option(o, &Checker::action_expr);
      return;
    }
    if (auto* d = e.as<DiscreteExpr>()) {
      for (auto& o : d->options) {
        distribution_option(o.value, &Checker::action_expr);
        expr(o.weight, Scope::Behavior, true);
      }
      return;
    }
    report(e.loc, "take operand is not an action");
  }

  void distribution_option(Expr& e, void (Checker::*check)(Expr&)) {
    if (is_distribution(e)) {
      report(e.loc, "nested sampling in distribution parameters");
      return;
    }
    (this->*check)(e);
  }

  /// Operand of `do` or `with behavior`.
  void behavior_ref(Expr& e, Scope scope) {
    if (auto* u = e.as<UniformExpr>()) {
      for (auto& o : u->options) option_behavior(o, scope);
      return;
    }
    if (auto* d = e.as<DiscreteExpr>()) {
      for (auto& o : d->options) {
        option_behavior(o.value, scope);
        expr(o.weight, scope, true);
      }
      return;
    }
    auto* c = e.as<CallExpr>();
    if (!c) {
      report(e.loc, "expected a behavior call");
      return;
    }
    int arity = 0;
    if (auto b = builtin_from_name(c->callee)) {
      c->binding = {Binding::Kind::BuiltinBehavior, static_cast<int>(*b)};
      arity = kBuiltins[static_cast<std::size_t>(*b)].arity;
    } else if (const BehaviorDef* def = prog_.find_behavior(c->callee)) {
      c->binding = {Binding::Kind::UserBehavior, static_cast<int>(def - prog_.behaviors.data())};
      arity = static_cast<int>(def->params.size());
    } else {
      report(e.loc, "unresolved behavior '" + c->callee + "'");
      return;
    }
    if (static_cast<int>(c->args.size()) != arity) {
      report(e.loc, "wrong number of arguments to '" + c->callee + "'");
      return;
    }
    for (auto& a : c->args) expr(a, scope);
  }

  void option_behavior(Expr& e, Scope scope) {
    if (is_distribution(e)) {
      report(e.loc, "nested sampling in distribution parameters");
      return;
    }
    behavior_ref(e, scope);
  }

  // ---- statements ------------------------------------------------------

  void block(Block& b) {
    for (auto& s : b) stmt(s);
  }

  void stmt(Stmt& s) {
    std::visit(
        [&](auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, TakeStmt>) {
            action_expr(n.action);
          } else if constexpr (std::is_same_v<T, DoStmt>) {
            behavior_ref(n.call, Scope::Behavior);
            if (n.until) expr(*n.until, Scope::Behavior);
          } else if constexpr (std::is_same_v<T, IfStmt>) {
            expr(n.cond, Scope::Behavior);
            block(n.then_body);
            block(n.else_body);
          } else if constexpr (std::is_same_v<T, WhileStmt>) {
            expr(n.cond, Scope::Behavior);
            block(n.body);
          } else if constexpr (std::is_same_v<T, TryStmt>) {
            block(n.body);
            for (auto& c : n.interrupts) {
              expr(c.cond, Scope::Behavior);
              block(c.body);
            }
          }
        },
        s.node);
  }

  Program& prog_;
  const FieldSpec& field_;
  const BehaviorDef* behavior_ = nullptr;
  std::size_t visible_params_ = 0;
  std::vector<Diagnostic> diags_;
};

}  // namespace

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : Error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::vector<Diagnostic> check_program(Program& program, const FieldSpec& field) {
  return Checker(program, field).run();
}

Program validate(Program program, const FieldSpec& field) {
  auto diags = check_program(program, field);
  if (!diags.empty()) throw ValidationError(std::move(diags));
  return program;
}

Program load_program(std::string_view source, const FieldSpec& field) {
  return validate(parse_source(source), field);
}

}  // namespace kickoff::lang

#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "kickoff/behavior/builtins.hpp"
#include "kickoff/lang/ast.hpp"
#include "kickoff/lang/eval.hpp"

namespace kickoff::behavior {

/// Suspended execution of one behavior. Owned by a single episode.
class BehaviorInstance {
 public:
  BehaviorInstance(const lang::Program& program, const lang::BehaviorCall& root);
  BehaviorInstance(BehaviorInstance&&) noexcept;
  BehaviorInstance& operator=(BehaviorInstance&&) noexcept;
  ~BehaviorInstance();

  /// Advances until exactly one command is produced for this tick. `self` is
  /// the player the behavior drives on this tick.
  Command step(const BehaviorContext& ctx, PlayerId self);

  bool finished() const { return finished_; }
  /// A `terminate` statement ran.
  bool terminate_requested() const { return terminate_; }
  const std::string& name() const { return name_; }
  /// Current frame-stack depth (diagnostics and tests).
  std::size_t depth() const;

  struct Frame;

 private:
  std::optional<Command> run(const BehaviorContext& ctx, PlayerId self);
  void check_untils(const BehaviorContext& ctx, PlayerId self);
  bool check_interrupts(const BehaviorContext& ctx, PlayerId self);
  bool fire_if_eligible(std::size_t try_index, const BehaviorContext& ctx, PlayerId self);
  void push_call(const lang::BehaviorCall& call, const lang::Expr* until);
  const std::vector<lang::Value>* locals_below(std::size_t index) const;
  lang::EvalContext eval_context(const BehaviorContext& ctx, PlayerId self,
                                 const std::vector<lang::Value>* locals) const;

  const lang::Program* program_;
  std::string name_;
  std::vector<Frame> frames_;
  bool finished_ = false;
  bool terminate_ = false;
};

struct MonitorResult {
  double reward = 0.0;
  bool terminate = false;
};

/// Sum of the rewards of every `when` clause holding now, and whether any
/// `terminate when` holds.
MonitorResult step_monitor(const lang::MonitorDef& monitor, const lang::EvalContext& ctx);

/// Statement budget per tick; exceeding it means the behavior never yields.
inline constexpr int kMaxStatementsPerTick = 10000;

}  // namespace kickoff::behavior

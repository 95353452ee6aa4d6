#include "kickoff/behavior/engine.hpp"

#include <cmath>

namespace kickoff::behavior {

using lang::Block;
using lang::Expr;
using lang::Value;

namespace {

struct BlockFrame {
  const Block* stmts = nullptr;
  std::size_t cursor = 0;
};

struct CallFrame {
  int def = 0;
  std::vector<Value> locals;
  const Expr* until = nullptr;
};

struct WhileFrame {
  const lang::WhileStmt* stmt = nullptr;
};

struct BuiltinFrame {
  std::unique_ptr<BuiltinState> state;
  const Expr* until = nullptr;
};

}  // namespace

struct BehaviorInstance::Frame {
  /// Frames cut above a try statement when one of its clauses fired.
  struct Segment {
    int clause = -1;  // -1 = the try body
    std::vector<Frame> frames;
  };
  struct TryFrame {
    const lang::TryStmt* stmt = nullptr;
    int active = -1;  // running clause; -1 = the try body
    std::vector<Segment> saved;
  };

  std::variant<BlockFrame, CallFrame, WhileFrame, TryFrame, BuiltinFrame> v;
};

using Frame = BehaviorInstance::Frame;

BehaviorInstance::BehaviorInstance(const lang::Program& program, const lang::BehaviorCall& root)
    : program_(&program) {
  name_ = root.builtin ? std::string(lang::builtin_name(static_cast<lang::Builtin>(root.index)))
                       : program.behaviors.at(root.index).name;
  push_call(root, nullptr);
}

BehaviorInstance::BehaviorInstance(BehaviorInstance&&) noexcept = default;
BehaviorInstance& BehaviorInstance::operator=(BehaviorInstance&&) noexcept = default;
BehaviorInstance::~BehaviorInstance() = default;

std::size_t BehaviorInstance::depth() const { return frames_.size(); }

void BehaviorInstance::push_call(const lang::BehaviorCall& call, const Expr* until) {
  if (call.builtin) {
    frames_.push_back(Frame{BuiltinFrame{make_builtin(static_cast<lang::Builtin>(call.index), call.args), until}});
    return;
  }
  const lang::BehaviorDef& def = program_->behaviors.at(call.index);
  frames_.push_back(Frame{CallFrame{call.index, call.args, until}});
  frames_.push_back(Frame{BlockFrame{&def.body, 0}});
}

const std::vector<Value>* BehaviorInstance::locals_below(std::size_t index) const {
  for (std::size_t i = index; i-- > 0;) {
    if (const auto* c = std::get_if<CallFrame>(&frames_[i].v)) return &c->locals;
  }
  return nullptr;
}

lang::EvalContext BehaviorInstance::eval_context(const BehaviorContext& ctx, PlayerId self,
                                                 const std::vector<Value>* locals) const {
  lang::EvalContext e;
  e.env = ctx.env;
  e.world = ctx.world;
  e.self = self;
  e.locals = locals;
  e.rng = ctx.rng;
  return e;
}

void BehaviorInstance::check_untils(const BehaviorContext& ctx, PlayerId self) {
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    const Expr* until = nullptr;
    if (const auto* c = std::get_if<CallFrame>(&frames_[i].v)) until = c->until;
    if (const auto* b = std::get_if<BuiltinFrame>(&frames_[i].v)) until = b->until;
    if (!until) continue;
    if (lang::eval_bool(*until, eval_context(ctx, self, locals_below(i)))) {
      frames_.resize(i);
      return;
    }
  }
}

bool BehaviorInstance::fire_if_eligible(std::size_t try_index, const BehaviorContext& ctx, PlayerId self) {
  auto& t = std::get<Frame::TryFrame>(frames_[try_index].v);
  const auto locals = locals_below(try_index);
  const auto ectx = eval_context(ctx, self, locals);
  int chosen = -1;
  const int n = static_cast<int>(t.stmt->interrupts.size());
  // Later clauses outrank earlier ones; a running clause is preempted only
  // by a strictly later one.
  for (int j = n - 1; j > t.active; --j) {
    if (lang::eval_bool(t.stmt->interrupts[j].cond, ectx)) {
      chosen = j;
      break;
    }
  }
  if (chosen < 0) return false;
  Frame::Segment seg;
  seg.clause = t.active;
  seg.frames.assign(std::make_move_iterator(frames_.begin() + static_cast<std::ptrdiff_t>(try_index) + 1),
                    std::make_move_iterator(frames_.end()));
  frames_.resize(try_index + 1);
  auto& tt = std::get<Frame::TryFrame>(frames_[try_index].v);
  tt.saved.push_back(std::move(seg));
  tt.active = chosen;
  frames_.push_back(Frame{BlockFrame{&tt.stmt->interrupts[chosen].body, 0}});
  return true;
}

bool BehaviorInstance::check_interrupts(const BehaviorContext& ctx, PlayerId self) {
  for (std::size_t i = frames_.size(); i-- > 0;) {
    if (std::holds_alternative<Frame::TryFrame>(frames_[i].v) && fire_if_eligible(i, ctx, self)) return true;
  }
  return false;
}

Command BehaviorInstance::step(const BehaviorContext& ctx, PlayerId self) {
  if (finished_) return Command(Action::Idle);
  check_untils(ctx, self);
  check_interrupts(ctx, self);
  if (auto c = run(ctx, self)) return *c;
  finished_ = true;
  return Command(Action::Idle);
}

std::optional<Command> BehaviorInstance::run(const BehaviorContext& ctx, PlayerId self) {
  for (int budget = 0; budget < kMaxStatementsPerTick; ++budget) {
    if (frames_.empty()) return std::nullopt;
    const std::size_t top = frames_.size() - 1;
    Frame& f = frames_[top];

    if (auto* bf = std::get_if<BuiltinFrame>(&f.v)) {
      if (auto cmd = bf->state->step(ctx, self)) return cmd;
      frames_.pop_back();
      continue;
    }

    auto* blk = std::get_if<BlockFrame>(&f.v);
    if (!blk) throw lang::EvalError("behavior '" + name_ + "': corrupt frame stack");

    if (blk->cursor >= blk->stmts->size()) {
      frames_.pop_back();
      if (frames_.empty()) return std::nullopt;
      Frame& parent = frames_.back();
      if (std::holds_alternative<CallFrame>(parent.v)) {
        frames_.pop_back();
      } else if (auto* wf = std::get_if<WhileFrame>(&parent.v)) {
        const auto* ws = wf->stmt;
        if (lang::eval_bool(ws->cond, eval_context(ctx, self, locals_below(frames_.size())))) {
          frames_.push_back(Frame{BlockFrame{&ws->body, 0}});
        } else {
          frames_.pop_back();
        }
      } else if (auto* tf = std::get_if<Frame::TryFrame>(&parent.v)) {
        if (tf->active < 0) {
          frames_.pop_back();
        } else {
          Frame::Segment seg = std::move(tf->saved.back());
          tf->saved.pop_back();
          tf->active = seg.clause;
          for (auto& fr : seg.frames) frames_.push_back(std::move(fr));
        }
      }
      continue;
    }

    const std::size_t index = blk->cursor++;
    const lang::Stmt& s = (*blk->stmts)[index];
    const auto* locals = locals_below(frames_.size());
    const auto ectx = eval_context(ctx, self, locals);
    try {
      if (const auto* take = std::get_if<lang::TakeStmt>(&s.node)) {
        return lang::eval_command(take->action, ectx);
      }
      if (std::holds_alternative<lang::WaitStmt>(s.node)) return Command(Action::Idle);
      if (std::holds_alternative<lang::TerminateStmt>(s.node)) {
        terminate_ = true;
        frames_.clear();
        finished_ = true;
        return Command(Action::Idle);
      }
      if (const auto* d = std::get_if<lang::DoStmt>(&s.node)) {
        if (d->until && lang::eval_bool(*d->until, ectx)) continue;
        push_call(lang::eval_behavior(d->call, ectx), d->until ? &*d->until : nullptr);
        continue;
      }
      if (const auto* i = std::get_if<lang::IfStmt>(&s.node)) {
        const Block& b = lang::eval_bool(i->cond, ectx) ? i->then_body : i->else_body;
        if (!b.empty()) frames_.push_back(Frame{BlockFrame{&b, 0}});
        continue;
      }
      if (const auto* w = std::get_if<lang::WhileStmt>(&s.node)) {
        if (lang::eval_bool(w->cond, ectx)) {
          frames_.push_back(Frame{WhileFrame{w}});
          frames_.push_back(Frame{BlockFrame{&w->body, 0}});
        }
        continue;
      }
      if (const auto* t = std::get_if<lang::TryStmt>(&s.node)) {
        frames_.push_back(Frame{Frame::TryFrame{t, -1, {}}});
        frames_.push_back(Frame{BlockFrame{&t->body, 0}});
        fire_if_eligible(frames_.size() - 2, ctx, self);
        continue;
      }
    } catch (const lang::EvalError& e) {
      throw lang::EvalError("behavior '" + name_ + "' statement " + std::to_string(index) + " (line " +
                            std::to_string(s.loc.pos.line) + "): " + e.what());
    }
  }
  throw lang::EvalError("behavior '" + name_ + "' did not yield an action within the statement budget");
}

MonitorResult step_monitor(const lang::MonitorDef& monitor, const lang::EvalContext& ctx) {
  MonitorResult out;
  for (const auto& c : monitor.clauses) {
    if (const auto* w = std::get_if<lang::WhenClause>(&c)) {
      if (!lang::eval_bool(w->cond, ctx)) continue;
      const double r = lang::eval_number(w->reward, ctx);
      if (!std::isfinite(r)) throw lang::EvalError("monitor '" + monitor.name + "' reward is not finite");
      out.reward += r;
    } else if (lang::eval_bool(std::get<lang::TerminateWhenClause>(c).cond, ctx)) {
      out.terminate = true;
    }
  }
  return out;
}

}  // namespace kickoff::behavior

#include "kickoff/lang/parser.hpp"

#include <charconv>

namespace kickoff::lang {

ParseError::ParseError(SourcePos pos, std::string expected, std::string found)
    : Error(std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": expected " + expected + ", found " + found),
      pos_(pos),
      expected_(std::move(expected)) {}

namespace {

std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::Keyword:
    case TokenKind::Ident:
    case TokenKind::Number:
    case TokenKind::Operator:
      return "'" + t.text + "'";
    case TokenKind::String:
      return "string \"" + t.text + "\"";
    default:
      return std::string(token_kind_name(t.kind));
  }
}

template <class T>
Expr make(T node, SourcePos pos) {
  return Expr{ExprNode{std::move(node)}, Loc{pos}};
}

class Parser {
 public:
  explicit Parser(std::span<const Token> tokens) : t_(tokens) {
    if (t_.empty() || t_.back().kind != TokenKind::Eof) {
      throw ParseError({1, 1}, "token stream terminated by end of input", "truncated stream");
    }
  }

  Program program() {
    Program prog;
    while (!at(TokenKind::Eof)) {
      if (at(TokenKind::Newline)) {
        ++i_;
      } else if (at_kw("param")) {
        prog.params.push_back(param_decl());
      } else if (at_kw("behavior")) {
        prog.behaviors.push_back(behavior_def());
      } else if (at_kw("monitor")) {
        prog.monitors.push_back(monitor_def());
      } else if (at_kw("require")) {
        ++i_;
        prog.requirements.push_back(expression());
        end_of_line();
      } else if (at_kw("terminate")) {
        ++i_;
        expect_kw("when");
        prog.terminate_when.push_back(expression());
        end_of_line();
      } else if ((at(TokenKind::Ident) && peek(1).is_op("=")) || at_class()) {
        prog.objects.push_back(object_decl());
      } else {
        fail("declaration");
      }
    }
    return prog;
  }

  Expr lone_expression() {
    Expr e = expression();
    while (at(TokenKind::Newline)) ++i_;
    if (!at(TokenKind::Eof)) fail("end of expression");
    return e;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    const std::size_t j = std::min(i_ + k, t_.size() - 1);
    return t_[j];
  }
  bool at(TokenKind k) const { return peek().kind == k; }
  bool at_kw(std::string_view w) const { return peek().is_keyword(w); }
  bool at_op(std::string_view o) const { return peek().is_op(o); }
  bool at_class() const { return at(TokenKind::Keyword) && class_from_name(peek().text).has_value(); }

  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError(peek().pos, expected, describe(peek()));
  }

  const Token& take() { return t_[i_++]; }

  const Token& expect_kw(std::string_view w) {
    if (!at_kw(w)) fail("'" + std::string(w) + "'");
    return take();
  }
  const Token& expect_op(std::string_view o) {
    if (!at_op(o)) fail("'" + std::string(o) + "'");
    return take();
  }
  const Token& expect_ident(const char* what) {
    if (!at(TokenKind::Ident)) fail(what);
    return take();
  }
  void end_of_line() {
    if (at(TokenKind::Eof)) return;
    if (!at(TokenKind::Newline)) fail("end of line");
    ++i_;
  }

  ParamDecl param_decl() {
    const SourcePos pos = take().pos;
    std::string name = expect_ident("parameter name").text;
    expect_op("=");
    Expr value = expression();
    end_of_line();
    return ParamDecl{std::move(name), std::move(value), Loc{pos}};
  }

  ObjectDecl object_decl() {
    ObjectDecl decl;
    decl.loc.pos = peek().pos;
    if (at(TokenKind::Ident)) {
      decl.name = take().text;
      expect_op("=");
    }
    if (!at_class()) fail("object class");
    decl.cls = *class_from_name(take().text);
    bool need_spec = false;
    while (!at(TokenKind::Newline) && !at(TokenKind::Eof)) {
      if (at_op(",")) {
        if (need_spec) fail("specifier");
        ++i_;
        need_spec = true;
        continue;
      }
      specifier(decl);
      need_spec = false;
    }
    if (need_spec) fail("specifier");
    end_of_line();
    return decl;
  }

  void specifier(ObjectDecl& decl) {
    const SourcePos pos = peek().pos;
    auto relative = [&](SpecKind kind) {
      Specifier s{kind, expression(), std::nullopt, Loc{pos}};
      if (at_kw("by")) {
        ++i_;
        s.by = expression();
      }
      decl.specifiers.push_back(std::move(s));
    };
    if (at_kw("at")) {
      ++i_;
      decl.specifiers.push_back(Specifier{SpecKind::At, expression(), std::nullopt, Loc{pos}});
    } else if (at_kw("in")) {
      ++i_;
      decl.specifiers.push_back(Specifier{SpecKind::In, expression(), std::nullopt, Loc{pos}});
    } else if (at_kw("ahead")) {
      ++i_;
      expect_kw("of");
      relative(SpecKind::AheadOf);
    } else if (at_kw("behind")) {
      ++i_;
      relative(SpecKind::Behind);
    } else if (at_kw("left")) {
      ++i_;
      expect_kw("of");
      relative(SpecKind::LeftOf);
    } else if (at_kw("right")) {
      ++i_;
      expect_kw("of");
      relative(SpecKind::RightOf);
    } else if (at_kw("offset")) {
      ++i_;
      expect_kw("by");
      decl.specifiers.push_back(Specifier{SpecKind::OffsetBy, expression(), std::nullopt, Loc{pos}});
    } else if (at_kw("facing")) {
      ++i_;
      decl.specifiers.push_back(Specifier{SpecKind::Facing, expression(), std::nullopt, Loc{pos}});
    } else if (at_kw("with")) {
      ++i_;
      std::string name;
      if (at_kw("behavior")) {
        name = peek().text;
        ++i_;
      } else {
        name = expect_ident("property name").text;
      }
      decl.with_props.push_back(WithProp{std::move(name), expression(), Loc{pos}});
    } else {
      fail("specifier");
    }
  }

  BehaviorDef behavior_def() {
    BehaviorDef def;
    def.loc.pos = take().pos;
    def.name = expect_ident("behavior name").text;
    expect_op("(");
    if (!at_op(")")) {
      def.params.push_back(expect_ident("parameter name").text);
      while (at_op(",")) {
        ++i_;
        def.params.push_back(expect_ident("parameter name").text);
      }
    }
    expect_op(")");
    def.body = block();
    return def;
  }

  MonitorDef monitor_def() {
    MonitorDef def;
    def.loc.pos = take().pos;
    def.name = expect_ident("monitor name").text;
    open_block();
    do {
      if (at_kw("when")) {
        ++i_;
        Expr cond = expression();
        expect_op(":");
        expect_kw("reward");
        Expr reward = expression();
        end_of_line();
        def.clauses.emplace_back(WhenClause{std::move(cond), std::move(reward)});
      } else if (at_kw("terminate")) {
        ++i_;
        expect_kw("when");
        Expr cond = expression();
        end_of_line();
        def.clauses.emplace_back(TerminateWhenClause{std::move(cond)});
      } else {
        fail("'when' or 'terminate when'");
      }
    } while (!at(TokenKind::Dedent));
    ++i_;
    return def;
  }

  void open_block() {
    expect_op(":");
    if (!at(TokenKind::Newline)) fail("end of line");
    ++i_;
    if (!at(TokenKind::Indent)) fail("indented block");
    ++i_;
  }

  Block block() {
    open_block();
    Block body;
    do {
      body.push_back(statement());
    } while (!at(TokenKind::Dedent) && !at(TokenKind::Eof));
    if (at(TokenKind::Dedent)) ++i_;
    return body;
  }

  Stmt statement() {
    const SourcePos pos = peek().pos;
    auto stmt = [&](auto node) { return Stmt{StmtNode{std::move(node)}, Loc{pos}}; };
    if (at_kw("take")) {
      ++i_;
      Expr e = expression();
      end_of_line();
      return stmt(TakeStmt{std::move(e)});
    }
    if (at_kw("wait")) {
      ++i_;
      end_of_line();
      return stmt(WaitStmt{});
    }
    if (at_kw("terminate")) {
      ++i_;
      end_of_line();
      return stmt(TerminateStmt{});
    }
    if (at_kw("do")) {
      ++i_;
      DoStmt d{expression(), std::nullopt};
      if (at_kw("until")) {
        ++i_;
        d.until = expression();
      }
      end_of_line();
      return stmt(std::move(d));
    }
    if (at_kw("if")) {
      ++i_;
      IfStmt s{expression(), {}, {}};
      s.then_body = block();
      if (at_kw("else")) {
        ++i_;
        s.else_body = block();
      }
      return stmt(std::move(s));
    }
    if (at_kw("while")) {
      ++i_;
      WhileStmt s{expression(), {}};
      s.body = block();
      return stmt(std::move(s));
    }
    if (at_kw("try")) {
      ++i_;
      TryStmt s;
      s.body = block();
      if (!at_kw("interrupt")) fail("'interrupt when'");
      while (at_kw("interrupt")) {
        const SourcePos ipos = take().pos;
        expect_kw("when");
        InterruptClause clause{expression(), {}, Loc{ipos}};
        clause.body = block();
        s.interrupts.push_back(std::move(clause));
      }
      return stmt(std::move(s));
    }
    fail("statement");
  }

  // ---- expressions -------------------------------------------------------

  Expr expression() { return or_expr(); }

  Expr or_expr() {
    Expr lhs = and_expr();
    while (at_kw("or")) {
      const SourcePos pos = take().pos;
      lhs = make(BinaryExpr{BinaryOp::Or, std::move(lhs), and_expr()}, pos);
    }
    return lhs;
  }

  Expr and_expr() {
    Expr lhs = not_expr();
    while (at_kw("and")) {
      const SourcePos pos = take().pos;
      lhs = make(BinaryExpr{BinaryOp::And, std::move(lhs), not_expr()}, pos);
    }
    return lhs;
  }

  Expr not_expr() {
    if (at_kw("not")) {
      const SourcePos pos = take().pos;
      return make(UnaryExpr{UnaryOp::Not, not_expr()}, pos);
    }
    return comparison();
  }

  std::optional<BinaryOp> comparison_op() const {
    if (!at(TokenKind::Operator)) return std::nullopt;
    const std::string& s = peek().text;
    if (s == "==") return BinaryOp::Eq;
    if (s == "!=") return BinaryOp::Ne;
    if (s == "<") return BinaryOp::Lt;
    if (s == "<=") return BinaryOp::Le;
    if (s == ">") return BinaryOp::Gt;
    if (s == ">=") return BinaryOp::Ge;
    return std::nullopt;
  }

  Expr comparison() {
    Expr lhs = additive();
    if (auto op = comparison_op()) {
      const SourcePos pos = take().pos;
      lhs = make(BinaryExpr{*op, std::move(lhs), additive()}, pos);
      if (comparison_op()) fail("end of comparison (comparisons do not chain)");
    }
    return lhs;
  }

  Expr additive() {
    Expr lhs = multiplicative();
    while (at_op("+") || at_op("-")) {
      const Token& t = take();
      const BinaryOp op = t.text == "+" ? BinaryOp::Add : BinaryOp::Sub;
      lhs = make(BinaryExpr{op, std::move(lhs), multiplicative()}, t.pos);
    }
    return lhs;
  }

  Expr multiplicative() {
    Expr lhs = unary();
    while (at_op("*") || at_op("/")) {
      const Token& t = take();
      const BinaryOp op = t.text == "*" ? BinaryOp::Mul : BinaryOp::Div;
      lhs = make(BinaryExpr{op, std::move(lhs), unary()}, t.pos);
    }
    return lhs;
  }

  Expr unary() {
    if (at_op("-")) {
      const SourcePos pos = take().pos;
      return make(UnaryExpr{UnaryOp::Neg, unary()}, pos);
    }
    return postfix();
  }

  Expr postfix() {
    Expr e = primary();
    while (at_op(".")) {
      const SourcePos pos = take().pos;
      std::string attr = expect_ident("attribute name").text;
      e = make(AttrExpr{std::move(e), std::move(attr)}, pos);
    }
    return e;
  }

  std::vector<Expr> call_args() {
    expect_op("(");
    std::vector<Expr> args;
    if (!at_op(")")) {
      args.push_back(expression());
      while (at_op(",")) {
        ++i_;
        args.push_back(expression());
      }
    }
    expect_op(")");
    return args;
  }

  Expr primary() {
    const Token& t = peek();
    const SourcePos pos = t.pos;
    switch (t.kind) {
      case TokenKind::Number: {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size()) fail("number");
        ++i_;
        return make(NumberLit{v}, pos);
      }
      case TokenKind::String:
        ++i_;
        return make(StringLit{t.text}, pos);
      case TokenKind::Ident: {
        std::string name = take().text;
        if (at_op("(")) return make(CallExpr{std::move(name), call_args(), {}}, pos);
        if (auto c = compass_from_name(name)) return make(CompassExpr{*c}, pos);
        return make(NameExpr{std::move(name), {}}, pos);
      }
      case TokenKind::Operator:
        if (t.text == "(") {
          ++i_;
          Expr first = expression();
          if (at_op(",")) {
            ++i_;
            Expr second = expression();
            expect_op(")");
            return make(PairExpr{std::move(first), std::move(second)}, pos);
          }
          expect_op(")");
          return first;
        }
        break;
      case TokenKind::Keyword:
        if (t.text == "true" || t.text == "false") {
          ++i_;
          return make(BoolLit{t.text == "true"}, pos);
        }
        if (t.text == "toward") {
          ++i_;
          return make(TowardExpr{unary()}, pos);
        }
        if (t.text == "Range" || t.text == "Normal") {
          const bool range = t.text == "Range";
          ++i_;
          std::vector<Expr> args = call_args();
          if (args.size() != 2) throw ParseError(pos, "two arguments", std::to_string(args.size()) + " arguments");
          if (range) return make(RangeExpr{std::move(args[0]), std::move(args[1])}, pos);
          return make(NormalExpr{std::move(args[0]), std::move(args[1])}, pos);
        }
        if (t.text == "Uniform") {
          ++i_;
          std::vector<Expr> args = call_args();
          if (args.empty()) throw ParseError(pos, "at least one option", "none");
          return make(UniformExpr{std::move(args)}, pos);
        }
        if (t.text == "Discrete") {
          ++i_;
          expect_op("(");
          expect_op("{");
          DiscreteExpr d;
          do {
            if (!d.options.empty()) ++i_;
            Expr value = expression();
            expect_op(":");
            Expr weight = expression();
            d.options.push_back(DiscreteOption{std::move(value), std::move(weight)});
          } while (at_op(","));
          expect_op("}");
          expect_op(")");
          return make(std::move(d), pos);
        }
        break;
      default:
        break;
    }
    fail("expression");
  }

  std::span<const Token> t_;
  std::size_t i_ = 0;
};

}  // namespace

Program parse(std::span<const Token> tokens) { return Parser(tokens).program(); }

Program parse_source(std::string_view source) {
  const auto tokens = tokenize(source);
  return parse(tokens);
}

Expr parse_expression(std::string_view source) {
  const auto tokens = tokenize(source);
  return Parser(tokens).lone_expression();
}

}  // namespace kickoff::lang

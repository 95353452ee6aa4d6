#include "kickoff/lang/printer.hpp"

#include <charconv>
#include <sstream>

namespace kickoff::lang {

namespace {

// Binding strength, mirroring the parser's precedence ladder.
enum Prec : int { kOr = 1, kAnd, kNot, kCmp, kAdd, kMul, kUnary, kPrimary };

int binary_prec(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or:
      return kOr;
    case BinaryOp::And:
      return kAnd;
    case BinaryOp::Add:
    case BinaryOp::Sub:
      return kAdd;
    case BinaryOp::Mul:
    case BinaryOp::Div:
      return kMul;
    default:
      return kCmp;
  }
}

const char* binary_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or:
      return "or";
    case BinaryOp::And:
      return "and";
    case BinaryOp::Eq:
      return "==";
    case BinaryOp::Ne:
      return "!=";
    case BinaryOp::Lt:
      return "<";
    case BinaryOp::Le:
      return "<=";
    case BinaryOp::Gt:
      return ">";
    case BinaryOp::Ge:
      return ">=";
    case BinaryOp::Add:
      return "+";
    case BinaryOp::Sub:
      return "-";
    case BinaryOp::Mul:
      return "*";
    case BinaryOp::Div:
      return "/";
  }
  return "?";
}

std::string number_text(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out.push_back('\\');
      out.push_back(c);
    } else if (c == '\n') {
      out += "\\n";
    } else if (c == '\t') {
      out += "\\t";
    } else {
      out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

int expr_prec(const Expr& e) {
  if (const auto* b = e.as<BinaryExpr>()) return binary_prec(b->op);
  if (const auto* u = e.as<UnaryExpr>()) return u->op == UnaryOp::Not ? kNot : kUnary;
  return kPrimary;
}

void print(std::ostream& os, const Expr& e, int min_prec);

void print_list(std::ostream& os, const std::vector<Expr>& items) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) os << ", ";
    print(os, items[i], kOr);
  }
}

void print_node(std::ostream& os, const Expr& e) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, NumberLit>) {
          os << number_text(n.value);
        } else if constexpr (std::is_same_v<T, BoolLit>) {
          os << (n.value ? "true" : "false");
        } else if constexpr (std::is_same_v<T, StringLit>) {
          os << quoted(n.value);
        } else if constexpr (std::is_same_v<T, PairExpr>) {
          os << '(';
          print(os, *n.x, kOr);
          os << ", ";
          print(os, *n.y, kOr);
          os << ')';
        } else if constexpr (std::is_same_v<T, RangeExpr>) {
          os << "Range(";
          print(os, *n.lo, kOr);
          os << ", ";
          print(os, *n.hi, kOr);
          os << ')';
        } else if constexpr (std::is_same_v<T, NormalExpr>) {
          os << "Normal(";
          print(os, *n.mean, kOr);
          os << ", ";
          print(os, *n.stddev, kOr);
          os << ')';
        } else if constexpr (std::is_same_v<T, UniformExpr>) {
          os << "Uniform(";
          print_list(os, n.options);
          os << ')';
        } else if constexpr (std::is_same_v<T, DiscreteExpr>) {
          os << "Discrete({";
          for (std::size_t i = 0; i < n.options.size(); ++i) {
            if (i) os << ", ";
            print(os, n.options[i].value, kOr);
            os << ": ";
            print(os, n.options[i].weight, kOr);
          }
          os << "})";
        } else if constexpr (std::is_same_v<T, NameExpr>) {
          os << n.name;
        } else if constexpr (std::is_same_v<T, CompassExpr>) {
          os << compass_name(n.dir);
        } else if constexpr (std::is_same_v<T, AttrExpr>) {
          print(os, *n.object, kPrimary);
          os << '.' << n.attr;
        } else if constexpr (std::is_same_v<T, UnaryExpr>) {
          if (n.op == UnaryOp::Not) {
            os << "not ";
            print(os, *n.operand, kNot);
          } else {
            os << '-';
            print(os, *n.operand, kUnary);
          }
        } else if constexpr (std::is_same_v<T, BinaryExpr>) {
          const int p = binary_prec(n.op);
          // Comparisons do not chain, so both operands bind tighter.
          print(os, *n.lhs, p == kCmp ? p + 1 : p);
          os << ' ' << binary_text(n.op) << ' ';
          print(os, *n.rhs, p + 1);
        } else if constexpr (std::is_same_v<T, CallExpr>) {
          os << n.callee << '(';
          print_list(os, n.args);
          os << ')';
        } else if constexpr (std::is_same_v<T, TowardExpr>) {
          os << "toward ";
          print(os, *n.target, kUnary);
        }
      },
      e.node);
}

void print(std::ostream& os, const Expr& e, int min_prec) {
  const bool wrap = expr_prec(e) < min_prec;
  if (wrap) os << '(';
  print_node(os, e);
  if (wrap) os << ')';
}

std::string text(const Expr& e) {
  std::ostringstream os;
  print(os, e, kOr);
  return os.str();
}

void indent(std::ostream& os, int depth) {
  for (int i = 0; i < depth; ++i) os << "    ";
}

void print_block(std::ostream& os, const Block& block, int depth);

void print_stmt(std::ostream& os, const Stmt& s, int depth) {
  indent(os, depth);
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TakeStmt>) {
          os << "take " << text(n.action) << '\n';
        } else if constexpr (std::is_same_v<T, WaitStmt>) {
          os << "wait\n";
        } else if constexpr (std::is_same_v<T, TerminateStmt>) {
          os << "terminate\n";
        } else if constexpr (std::is_same_v<T, DoStmt>) {
          os << "do " << text(n.call);
          if (n.until) os << " until " << text(*n.until);
          os << '\n';
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          os << "if " << text(n.cond) << ":\n";
          print_block(os, n.then_body, depth + 1);
          if (!n.else_body.empty()) {
            indent(os, depth);
            os << "else:\n";
            print_block(os, n.else_body, depth + 1);
          }
        } else if constexpr (std::is_same_v<T, WhileStmt>) {
          os << "while " << text(n.cond) << ":\n";
          print_block(os, n.body, depth + 1);
        } else if constexpr (std::is_same_v<T, TryStmt>) {
          os << "try:\n";
          print_block(os, n.body, depth + 1);
          for (const auto& clause : n.interrupts) {
            indent(os, depth);
            os << "interrupt when " << text(clause.cond) << ":\n";
            print_block(os, clause.body, depth + 1);
          }
        }
      },
      s.node);
}

void print_block(std::ostream& os, const Block& block, int depth) {
  for (const auto& s : block) print_stmt(os, s, depth);
}

const char* spec_text(SpecKind k) {
  switch (k) {
    case SpecKind::At:
      return "at";
    case SpecKind::In:
      return "in";
    case SpecKind::AheadOf:
      return "ahead of";
    case SpecKind::Behind:
      return "behind";
    case SpecKind::LeftOf:
      return "left of";
    case SpecKind::RightOf:
      return "right of";
    case SpecKind::OffsetBy:
      return "offset by";
    case SpecKind::Facing:
      return "facing";
  }
  return "?";
}

}  // namespace

std::string print_expr(const Expr& e) { return text(e); }

std::string pretty_print(const Program& program) {
  std::ostringstream os;
  for (const auto& p : program.params) os << "param " << p.name << " = " << text(p.value) << '\n';
  for (const auto& o : program.objects) {
    if (o.name) os << *o.name << " = ";
    os << class_name(o.cls);
    for (const auto& s : o.specifiers) {
      os << ' ' << spec_text(s.kind) << ' ' << text(s.value);
      if (s.by) os << " by " << text(*s.by);
    }
    for (const auto& w : o.with_props) os << " with " << w.name << ' ' << text(w.value);
    os << '\n';
  }
  for (const auto& b : program.behaviors) {
    os << "behavior " << b.name << '(';
    for (std::size_t i = 0; i < b.params.size(); ++i) os << (i ? ", " : "") << b.params[i];
    os << "):\n";
    print_block(os, b.body, 1);
  }
  for (const auto& m : program.monitors) {
    os << "monitor " << m.name << ":\n";
    for (const auto& c : m.clauses) {
      indent(os, 1);
      if (const auto* w = std::get_if<WhenClause>(&c)) {
        os << "when " << text(w->cond) << ": reward " << text(w->reward) << '\n';
      } else {
        os << "terminate when " << text(std::get<TerminateWhenClause>(c).cond) << '\n';
      }
    }
  }
  for (const auto& r : program.requirements) os << "require " << text(r) << '\n';
  for (const auto& t : program.terminate_when) os << "terminate when " << text(t) << '\n';
  return os.str();
}

}  // namespace kickoff::lang

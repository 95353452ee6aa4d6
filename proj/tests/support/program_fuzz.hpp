#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "kickoff/core/rng.hpp"

namespace kickoff::testing {

/// Random syntactically valid program text covering every statement,
/// declaration and expression form. Names are not required to resolve.
class ProgramFuzzer {
 public:
  explicit ProgramFuzzer(std::uint64_t seed) : rng_(seed) {}

  std::string program() {
    std::ostringstream o;
    const int params = pick(3);
    for (int i = 0; i < params; ++i) o << "param p" << i << " = " << expr(2) << "\n";
    const int objects = 1 + pick(4);
    for (int i = 0; i < objects; ++i) o << object(i) << "\n";
    const int behaviors = pick(3);
    for (int i = 0; i < behaviors; ++i) {
      o << "behavior B" << i << "(";
      const int args = pick(3);
      for (int k = 0; k < args; ++k) o << (k ? ", " : "") << "arg" << k;
      o << "):\n";
      block(o, 1, 3);
    }
    if (coin()) {
      o << "monitor M:\n";
      const int clauses = 1 + pick(3);
      for (int i = 0; i < clauses; ++i) {
        if (coin()) {
          o << "    when " << expr(2) << ": reward " << expr(1) << "\n";
        } else {
          o << "    terminate when " << expr(2) << "\n";
        }
      }
    }
    if (coin()) o << "require " << expr(2) << "\n";
    if (coin()) o << "terminate when " << expr(2) << "\n";
    return o.str();
  }

  std::string expr(int depth) {
    if (depth <= 0) return atom();
    switch (pick(13)) {
      case 0:
        return "(" + expr(depth - 1) + ", " + expr(depth - 1) + ")";
      case 1:
        return "Range(" + expr(depth - 1) + ", " + expr(depth - 1) + ")";
      case 2:
        return "Normal(" + expr(depth - 1) + ", " + expr(depth - 1) + ")";
      case 3:
        return "Uniform(" + list(depth - 1) + ")";
      case 4:
        return "Discrete({" + atom() + ": " + number() + ", " + atom() + ": " + number() + "})";
      case 5:
        return name() + "." + pick_of({"x", "y", "position", "heading", "dribbling", "sprinting"});
      case 6:
        return "-" + wrap(depth - 1);
      case 7:
        return "not " + wrap(depth - 1);
      case 8:
        return wrap(depth - 1) + " " +
               pick_of({"or", "and", "==", "!=", "<", "<=", ">", ">=", "+", "-", "*", "/"}) + " " + wrap(depth - 1);
      case 9:
        return pick_of({"dist", "nearest_opponent", "Move", "pass_to", "in_region", "rect", "f"}) + "(" +
               list(depth - 1) + ")";
      case 10:
        return "toward " + name();
      case 11:
        return "(" + expr(depth - 1) + ")";
      default:
        return atom();
    }
  }

 private:
  int pick(int n) { return static_cast<int>(rng_.index(static_cast<std::uint64_t>(n))); }
  bool coin() { return pick(2) == 0; }
  std::string pick_of(std::initializer_list<const char*> xs) { return *(xs.begin() + pick(static_cast<int>(xs.size()))); }

  std::string number() {
    std::ostringstream o;
    o << pick(100) / std::pow(10.0, pick(3));
    return o.str();
  }
  std::string name() { return pick_of({"a", "b", "mate", "target", "self", "ball", "ego", "p0"}); }
  std::string atom() {
    switch (pick(6)) {
      case 0:
        return number();
      case 1:
        return coin() ? "true" : "false";
      case 2:
        return coin() ? "\"left\"" : "\"q\\\"x\"";
      case 3:
        return pick_of({"N", "NE", "E", "SE", "S", "SW", "W", "NW"});
      default:
        return name();
    }
  }
  std::string wrap(int depth) { return "(" + expr(depth) + ")"; }
  std::string list(int depth) {
    std::string s = expr(depth);
    const int more = pick(3);
    for (int i = 0; i < more; ++i) s += ", " + expr(depth);
    return s;
  }

  std::string object(int i) {
    std::ostringstream o;
    if (i == 0) {
      o << "ego = ";
    } else if (coin()) {
      o << "o" << i << " = ";
    }
    if (pick(4) == 0) {
      o << "Ball";
    } else {
      o << pick_of({"Left", "Right"}) << pick_of({"GK", "CB", "LB", "RB", "CM", "LM", "RM", "AM", "CF"});
    }
    const int specs = pick(3);
    for (int k = 0; k < specs; ++k) {
      o << (k ? ", " : " ");
      switch (pick(8)) {
        case 0:
          o << "at " << expr(1);
          break;
        case 1:
          o << "in " << pick_of({"right_penalty_box", "left_half", "field", "center_circle"});
          break;
        case 2:
          o << "ahead of " << name() << (coin() ? " by " + number() : "");
          break;
        case 3:
          o << "behind " << name() << (coin() ? " by " + number() : "");
          break;
        case 4:
          o << "left of " << name() << (coin() ? " by " + number() : "");
          break;
        case 5:
          o << "right of " << name() << (coin() ? " by " + number() : "");
          break;
        case 6:
          o << "offset by (" << number() << ", " << number() << ")";
          break;
        default:
          o << "facing " << (coin() ? atom() : "toward " + name());
          break;
      }
    }
    if (coin()) o << (specs ? ", " : " ") << "with behavior B" << pick(3) << "(" << (coin() ? expr(1) : "") << ")";
    return o.str();
  }

  void line(std::ostringstream& o, int depth, const std::string& s) { o << std::string(4 * depth, ' ') << s << "\n"; }

  void block(std::ostringstream& o, int depth, int budget) {
    const int n = 1 + pick(3);
    for (int i = 0; i < n; ++i) stmt(o, depth, budget);
  }

  void stmt(std::ostringstream& o, int depth, int budget) {
    const int kind = budget > 0 ? pick(9) : pick(4);
    switch (kind) {
      case 0:
        line(o, depth, "take " + expr(2));
        break;
      case 1:
        line(o, depth, "wait");
        break;
      case 2:
        line(o, depth, "terminate");
        break;
      case 3:
        line(o, depth, "do B" + std::to_string(pick(3)) + "(" + (coin() ? expr(1) : "") + ")" +
                           (coin() ? " until " + expr(2) : ""));
        break;
      case 4:
      case 5:
        line(o, depth, "if " + expr(2) + ":");
        block(o, depth + 1, budget - 1);
        if (coin()) {
          line(o, depth, "else:");
          block(o, depth + 1, budget - 1);
        }
        break;
      case 6:
        line(o, depth, "while " + expr(2) + ":");
        block(o, depth + 1, budget - 1);
        break;
      default: {
        line(o, depth, "try:");
        block(o, depth + 1, budget - 1);
        const int clauses = 1 + pick(3);
        for (int j = 0; j < clauses; ++j) {
          line(o, depth, "interrupt when " + expr(2) + ":");
          block(o, depth + 1, budget - 1);
        }
        break;
      }
    }
  }

  RngStream rng_;
};

}  // namespace kickoff::testing

#pragma once

#include <string>

#include "kickoff/lang/ast.hpp"

namespace kickoff::lang {

/// Canonical source text for a program. Re-parsing the output yields a
/// structurally identical Program.
std::string pretty_print(const Program& program);
std::string print_expr(const Expr& e);

}  // namespace kickoff::lang

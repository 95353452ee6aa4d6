#pragma once

#include <span>
#include <string>
#include <string_view>

#include "kickoff/lang/ast.hpp"
#include "kickoff/lang/lexer.hpp"

namespace kickoff::lang {

class ParseError : public Error {
 public:
  ParseError(SourcePos pos, std::string expected, std::string found);
  SourcePos pos() const { return pos_; }
  const std::string& expected() const { return expected_; }

 private:
  SourcePos pos_;
  std::string expected_;
};

Program parse(std::span<const Token> tokens);
/// tokenize + parse.
Program parse_source(std::string_view source);

/// Parses a single expression (used by tests and the config tooling).
Expr parse_expression(std::string_view source);

}  // namespace kickoff::lang

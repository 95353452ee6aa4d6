#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kickoff/core/errors.hpp"

namespace kickoff::lang {

enum class TokenKind { Keyword, Ident, Number, String, Operator, Newline, Indent, Dedent, Eof };

std::string_view token_kind_name(TokenKind k);

struct Token {
  TokenKind kind = TokenKind::Eof;
  /// Source slice for keywords, identifiers, numbers and operators; the
  /// unescaped contents for strings; empty for layout tokens.
  std::string text;
  SourcePos pos;
  /// Number of source columns the token spans (at least 1).
  int width = 1;

  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool is_keyword(std::string_view t) const { return is(TokenKind::Keyword, t); }
  bool is_op(std::string_view t) const { return is(TokenKind::Operator, t); }
};

class LexError : public Error {
 public:
  LexError(SourcePos pos, const std::string& msg);
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

bool is_keyword(std::string_view word);

/// Splits a scenario source into tokens. Leading whitespace is significant:
/// each indentation level is one tab or four spaces, and changes of level
/// become Indent/Dedent tokens. `#` starts a comment that runs to the end of
/// the line. Line breaks inside brackets do not end a logical line.
std::vector<Token> tokenize(std::string_view source);

}  // namespace kickoff::lang

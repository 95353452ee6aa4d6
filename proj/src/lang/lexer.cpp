#include "kickoff/lang/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace kickoff::lang {

namespace {

constexpr std::array<std::string_view, 37> kWords = {
    "param", "behavior", "monitor", "require", "terminate", "when",  "take",  "wait",    "do",
    "until", "if",       "else",    "while",   "try",       "interrupt", "reward", "at", "in",
    "ahead", "behind",   "left",    "right",   "of",        "by",    "offset", "facing", "with",
    "and",   "or",       "not",     "true",    "false",     "toward", "Range", "Normal", "Uniform",
    "Discrete"};

bool is_class_word(std::string_view w) {
  if (w == "Ball") return true;
  std::string_view role;
  if (w.starts_with("Left")) {
    role = w.substr(4);
  } else if (w.starts_with("Right")) {
    role = w.substr(5);
  } else {
    return false;
  }
  static constexpr std::array<std::string_view, 10> kRoles = {"GK", "CB", "LB", "RB", "DM",
                                                              "CM", "LM", "RM", "AM", "CF"};
  return std::find(kRoles.begin(), kRoles.end(), role) != kRoles.end();
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    while (pos_ < src_.size()) {
      if (at_line_start_ && depth_ == 0) {
        if (!begin_line()) continue;
      }
      const char c = src_[pos_];
      if (c == '\n') {
        end_physical_line();
        continue;
      }
      if (c == '\r' || c == ' ' || c == '\t') {
        advance();
        continue;
      }
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
        continue;
      }
      if (ident_start(c)) {
        lex_word();
      } else if (digit(c) || (c == '.' && pos_ + 1 < src_.size() && digit(src_[pos_ + 1]))) {
        lex_number();
      } else if (c == '"') {
        lex_string();
      } else {
        lex_operator();
      }
    }
    if (line_has_tokens_) emit(TokenKind::Newline, "", here(), 1);
    while (indent_stack_.size() > 1) {
      indent_stack_.pop_back();
      emit(TokenKind::Dedent, "", here(), 1);
    }
    emit(TokenKind::Eof, "", here(), 1);
    return std::move(tokens_);
  }

 private:
  SourcePos here() const { return {line_, col_}; }

  void advance() {
    ++pos_;
    ++col_;
  }

  void emit(TokenKind kind, std::string text, SourcePos pos, int width) {
    tokens_.push_back(Token{kind, std::move(text), pos, std::max(width, 1)});
    if (kind != TokenKind::Newline && kind != TokenKind::Indent && kind != TokenKind::Dedent &&
        kind != TokenKind::Eof) {
      line_has_tokens_ = true;
    }
  }

  void end_physical_line() {
    if (depth_ == 0 && line_has_tokens_) {
      emit(TokenKind::Newline, "", here(), 1);
      line_has_tokens_ = false;
    }
    ++pos_;
    ++line_;
    col_ = 1;
    if (depth_ == 0) at_line_start_ = true;
  }

  // Handles leading whitespace of a logical line. Returns false when the line
  // was blank or comment-only and has been consumed.
  bool begin_line() {
    std::size_t p = pos_;
    int tabs = 0;
    int spaces = 0;
    while (p < src_.size() && (src_[p] == ' ' || src_[p] == '\t')) {
      (src_[p] == '\t' ? tabs : spaces)++;
      ++p;
    }
    const bool blank = p >= src_.size() || src_[p] == '\n' || src_[p] == '#' ||
                       (src_[p] == '\r' && (p + 1 >= src_.size() || src_[p + 1] == '\n'));
    if (blank) {
      while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      if (pos_ < src_.size()) {
        ++pos_;
        ++line_;
        col_ = 1;
      }
      return false;
    }
    const SourcePos start{line_, 1};
    if (tabs > 0 && spaces > 0) throw LexError(start, "inconsistent indentation: tabs mixed with spaces");
    if (spaces % 4 != 0) throw LexError(start, "inconsistent indentation: not a multiple of four spaces");
    const int level = tabs + spaces / 4;
    col_ += static_cast<int>(p - pos_);
    pos_ = p;
    const SourcePos first{line_, col_};
    if (level > indent_stack_.back()) {
      if (level != indent_stack_.back() + 1) throw LexError(start, "inconsistent indentation: indented too far");
      indent_stack_.push_back(level);
      emit(TokenKind::Indent, "", first, 1);
    }
    while (level < indent_stack_.back()) {
      indent_stack_.pop_back();
      emit(TokenKind::Dedent, "", first, 1);
    }
    if (level != indent_stack_.back()) throw LexError(start, "inconsistent indentation: dedent to unknown level");
    at_line_start_ = false;
    return true;
  }

  void lex_word() {
    const SourcePos start = here();
    const std::size_t b = pos_;
    while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
    std::string word(src_.substr(b, pos_ - b));
    const auto kind = (is_keyword(word)) ? TokenKind::Keyword : TokenKind::Ident;
    const int width = static_cast<int>(word.size());
    emit(kind, std::move(word), start, width);
  }

  void lex_number() {
    const SourcePos start = here();
    const std::size_t b = pos_;
    while (pos_ < src_.size() && digit(src_[pos_])) advance();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      advance();
      while (pos_ < src_.size() && digit(src_[pos_])) advance();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
      if (q < src_.size() && digit(src_[q])) {
        while (pos_ < q) advance();
        while (pos_ < src_.size() && digit(src_[pos_])) advance();
      }
    }
    if (pos_ < src_.size() && ident_char(src_[pos_])) {
      throw LexError(here(), "malformed number");
    }
    std::string text(src_.substr(b, pos_ - b));
    const int width = static_cast<int>(text.size());
    emit(TokenKind::Number, std::move(text), start, width);
  }

  void lex_string() {
    const SourcePos start = here();
    advance();
    std::string value;
    while (true) {
      if (pos_ >= src_.size() || src_[pos_] == '\n') throw LexError(start, "unterminated string");
      const char c = src_[pos_];
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\') {
        advance();
        if (pos_ >= src_.size()) throw LexError(start, "unterminated string");
        const char e = src_[pos_];
        if (e == 'n') {
          value.push_back('\n');
        } else if (e == 't') {
          value.push_back('\t');
        } else if (e == '"' || e == '\\') {
          value.push_back(e);
        } else {
          throw LexError(here(), "unknown escape sequence");
        }
        advance();
        continue;
      }
      value.push_back(c);
      advance();
    }
    emit(TokenKind::String, std::move(value), start, col_ - start.col);
  }

  void lex_operator() {
    const SourcePos start = here();
    const char c = src_[pos_];
    const char n = pos_ + 1 < src_.size() ? src_[pos_ + 1] : '\0';
    if ((c == '=' || c == '!' || c == '<' || c == '>') && n == '=') {
      emit(TokenKind::Operator, std::string{c, n}, start, 2);
      advance();
      advance();
      return;
    }
    static constexpr std::string_view kSingle = "()[]{},:.=<>+-*/";
    if (kSingle.find(c) == std::string_view::npos) throw LexError(start, "illegal character");
    if (c == '(' || c == '[' || c == '{') ++depth_;
    if (c == ')' || c == ']' || c == '}') {
      if (depth_ == 0) throw LexError(start, "unbalanced closing bracket");
      --depth_;
    }
    emit(TokenKind::Operator, std::string{c}, start, 1);
    advance();
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  int depth_ = 0;
  bool at_line_start_ = true;
  bool line_has_tokens_ = false;
  std::vector<int> indent_stack_{0};
  std::vector<Token> tokens_;
};

}  // namespace

std::string_view token_kind_name(TokenKind k) {
  switch (k) {
    case TokenKind::Keyword:
      return "keyword";
    case TokenKind::Ident:
      return "identifier";
    case TokenKind::Number:
      return "number";
    case TokenKind::String:
      return "string";
    case TokenKind::Operator:
      return "operator";
    case TokenKind::Newline:
      return "end of line";
    case TokenKind::Indent:
      return "indent";
    case TokenKind::Dedent:
      return "dedent";
    case TokenKind::Eof:
      return "end of input";
  }
  return "token";
}

LexError::LexError(SourcePos pos, const std::string& msg)
    : Error(std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + msg), pos_(pos) {}

bool is_keyword(std::string_view word) {
  return std::find(kWords.begin(), kWords.end(), word) != kWords.end() || is_class_word(word);
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace kickoff::lang

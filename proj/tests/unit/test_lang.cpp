#include <gtest/gtest.h>

#include "kickoff/lang/lexer.hpp"
#include "kickoff/lang/parser.hpp"
#include "kickoff/lang/printer.hpp"
#include "support/program_fuzz.hpp"

using namespace kickoff;
using namespace kickoff::lang;

namespace {

std::vector<std::pair<TokenKind, std::string>> kinds(std::string_view src) {
  std::vector<std::pair<TokenKind, std::string>> out;
  for (const auto& t : tokenize(src)) out.emplace_back(t.kind, t.text);
  return out;
}

const char* kSample = R"(# two-on-one
param spread = 0.1
ego = LeftCM in right_penalty_box, facing E
mate = LeftCF ahead of ego by spread
RightGK
Ball at ego.position
require dist(ego, mate) > 0.1
terminate when ball.x < 0

behavior Sub():
    take Move(E)
    take Move(E)

behavior Main(target):
    try:
        do Sub()
        do MoveToPoint(target) until dist(self, target) < 0.05
        wait
    interrupt when nearest_opponent(self).x - self.x < 0.1:
        if has_ball(self):
            take ShortPass
        else:
            take Idle
    interrupt when tick > 40 and not has_ball(self):
        while true:
            take Slide
    terminate

monitor Progress:
    when ball.x > 0: reward 0.1
    terminate when ball.x > 0.95
)";

}  // namespace

TEST(Lexer, ObjectLine) {
  auto ks = kinds("ego = LeftCM at (0.5, 0)");
  std::vector<std::pair<TokenKind, std::string>> want = {
      {TokenKind::Ident, "ego"}, {TokenKind::Operator, "="}, {TokenKind::Keyword, "LeftCM"},
      {TokenKind::Keyword, "at"}, {TokenKind::Operator, "("}, {TokenKind::Number, "0.5"},
      {TokenKind::Operator, ","}, {TokenKind::Number, "0"}, {TokenKind::Operator, ")"},
      {TokenKind::Newline, ""}, {TokenKind::Eof, ""}};
  EXPECT_EQ(ks, want);
}

TEST(Lexer, EmptyInput) {
  auto t = tokenize("");
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].kind, TokenKind::Eof);
}

TEST(Lexer, IndentBeforeTakeDedentBeforeEof) {
  auto t = tokenize("behavior Foo():\n\ttake Shoot");
  auto it = std::find_if(t.begin(), t.end(), [](const Token& k) { return k.kind == TokenKind::Indent; });
  ASSERT_NE(it, t.end());
  EXPECT_TRUE((it + 1)->is_keyword("take"));
  ASSERT_GE(t.size(), 2u);
  EXPECT_EQ(t[t.size() - 2].kind, TokenKind::Dedent);
  EXPECT_EQ(t.back().kind, TokenKind::Eof);
}

TEST(Lexer, IndentsBalance) {
  auto t = tokenize(kSample);
  int depth = 0;
  for (const auto& k : t) {
    if (k.kind == TokenKind::Indent) ++depth;
    if (k.kind == TokenKind::Dedent) --depth;
    EXPECT_GE(depth, 0);
  }
  EXPECT_EQ(depth, 0);
}

TEST(Lexer, CommentsAndBlankLinesIgnored) {
  auto ks = kinds("# only comment\n\n   \nRightGK # trailing\n");
  ASSERT_EQ(ks.size(), 3u);
  EXPECT_EQ(ks[0].second, "RightGK");
}

TEST(Lexer, BracketsJoinLines) {
  auto ks = kinds("Ball at (0.1,\n    0.2)\n");
  EXPECT_EQ(std::count_if(ks.begin(), ks.end(), [](auto& k) { return k.first == TokenKind::Newline; }), 1);
}

TEST(Lexer, ErrorsCarryPosition) {
  try {
    tokenize("Ball at (0, 0)\nRightGK $\n");
    FAIL();
  } catch (const LexError& e) {
    EXPECT_EQ(e.pos().line, 2);
    EXPECT_EQ(e.pos().col, 9);
  }
  EXPECT_THROW(tokenize("behavior A():\n  take Idle\n"), LexError);
  EXPECT_THROW(tokenize("behavior A():\n\t    take Idle\n"), LexError);
  EXPECT_THROW(tokenize("behavior A():\n\t\ttake Idle\n"), LexError);
  EXPECT_THROW(tokenize("x = \"open\n"), LexError);
  EXPECT_THROW(tokenize("Ball at 3abc\n"), LexError);
  EXPECT_THROW(tokenize("Ball at )\n"), LexError);
}

TEST(Parser, MinimalProgram) {
  Program p = parse_source("LeftCM in right_penalty_box\nRightGK\n");
  ASSERT_EQ(p.objects.size(), 2u);
  EXPECT_EQ(p.objects[0].specifiers.size(), 1u);
  EXPECT_EQ(p.objects[0].specifiers[0].kind, SpecKind::In);
  EXPECT_TRUE(p.objects[1].specifiers.empty());
  EXPECT_EQ(p.objects[1].cls, (ObjectClass{false, Team::Right, Role::GK}));
}

TEST(Parser, Requirement) {
  Program p = parse_source("ego = LeftCM\nother = RightCB\nrequire dist(ego, other) > 0.1\n");
  ASSERT_EQ(p.requirements.size(), 1u);
  EXPECT_EQ(p.ego(), 0u);
}

TEST(Parser, TryClausesInSourceOrder) {
  Program p = parse_source(kSample);
  const BehaviorDef* main = p.find_behavior("Main");
  ASSERT_NE(main, nullptr);
  const auto* tr = std::get_if<TryStmt>(&main->body[0].node);
  ASSERT_NE(tr, nullptr);
  ASSERT_EQ(tr->interrupts.size(), 2u);
  EXPECT_NE(tr->interrupts[0].cond.as<BinaryExpr>(), nullptr);
  EXPECT_EQ(tr->interrupts[0].cond.as<BinaryExpr>()->op, BinaryOp::Lt);
  EXPECT_EQ(tr->interrupts[1].cond.as<BinaryExpr>()->op, BinaryOp::And);
  EXPECT_EQ(tr->body.size(), 3u);
  EXPECT_NE(std::get_if<TerminateStmt>(&main->body[1].node), nullptr);
}

TEST(Parser, Specifiers) {
  Program p = parse_source(kSample);
  const auto& mate = p.objects[1];
  ASSERT_EQ(mate.specifiers.size(), 1u);
  EXPECT_EQ(mate.specifiers[0].kind, SpecKind::AheadOf);
  ASSERT_TRUE(mate.specifiers[0].by);
  EXPECT_EQ(p.objects[0].specifiers[1].kind, SpecKind::Facing);
  EXPECT_EQ(p.monitors.size(), 1u);
  EXPECT_EQ(p.monitors[0].clauses.size(), 2u);
  EXPECT_EQ(p.terminate_when.size(), 1u);
  EXPECT_EQ(p.params.size(), 1u);
}

TEST(Parser, Precedence) {
  Expr e = parse_expression("1 + 2 * 3 < 4 or not a and b");
  const auto* orr = e.as<BinaryExpr>();
  ASSERT_NE(orr, nullptr);
  EXPECT_EQ(orr->op, BinaryOp::Or);
  EXPECT_EQ(orr->lhs->as<BinaryExpr>()->op, BinaryOp::Lt);
  EXPECT_EQ(orr->rhs->as<BinaryExpr>()->op, BinaryOp::And);
  EXPECT_EQ(orr->rhs->as<BinaryExpr>()->lhs->as<UnaryExpr>()->op, UnaryOp::Not);
}

TEST(Parser, Distributions) {
  EXPECT_NE(parse_expression("Range(0, 1)").as<RangeExpr>(), nullptr);
  EXPECT_NE(parse_expression("Normal(0, 0.1)").as<NormalExpr>(), nullptr);
  EXPECT_EQ(parse_expression("Uniform(A(), B(), C())").as<UniformExpr>()->options.size(), 3u);
  EXPECT_EQ(parse_expression("Discrete({1: 0.5, 2: 0.25, 3: 0.25})").as<DiscreteExpr>()->options.size(), 3u);
  EXPECT_THROW(parse_expression("Range(0)"), ParseError);
  EXPECT_THROW(parse_expression("Uniform()"), ParseError);
}

TEST(Parser, ErrorsPointIntoToken) {
  const std::string src = "Ball at (0, 0)\nRightGK at at\n";
  try {
    parse_source(src);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.pos().line, 2);
    EXPECT_EQ(e.pos().col, 12);
    EXPECT_FALSE(e.expected().empty());
  }
  EXPECT_THROW(parse_source("behavior A():\n    try:\n        wait\n"), ParseError);
  EXPECT_THROW(parse_source("LeftCM at 1 +\n"), ParseError);
  EXPECT_THROW(parse_source("LeftCM ,\n"), ParseError);
  EXPECT_THROW(parse_source("foo bar\n"), ParseError);
  EXPECT_THROW(parse_source("behavior A()\n    wait\n"), ParseError);
}

TEST(Parser, ObjectOrderPreserved) {
  Program p = parse_source("RightCB\nLeftGK\nBall\nLeftCF\n");
  ASSERT_EQ(p.objects.size(), 4u);
  EXPECT_EQ(class_name(p.objects[0].cls), "RightCB");
  EXPECT_EQ(class_name(p.objects[1].cls), "LeftGK");
  EXPECT_EQ(class_name(p.objects[2].cls), "Ball");
  EXPECT_EQ(class_name(p.objects[3].cls), "LeftCF");
}

TEST(Printer, RoundTripSample) {
  Program a = parse_source(kSample);
  const std::string text = pretty_print(a);
  Program b = parse_source(text);
  EXPECT_EQ(a, b) << text;
  EXPECT_EQ(pretty_print(b), text);
}

TEST(Printer, SingleObjectSingleLine) {
  EXPECT_EQ(pretty_print(parse_source("RightGK\n")), "RightGK\n");
}

TEST(Printer, MinimalParentheses) {
  EXPECT_EQ(print_expr(parse_expression("(a + b) * c")), "(a + b) * c");
  EXPECT_EQ(print_expr(parse_expression("a + (b * c)")), "a + b * c");
  EXPECT_EQ(print_expr(parse_expression("a - (b - c)")), "a - (b - c)");
  EXPECT_EQ(print_expr(parse_expression("(a < b) == c")), "(a < b) == c");
  EXPECT_EQ(print_expr(parse_expression("-(a.x)")), "-a.x");
  EXPECT_EQ(print_expr(parse_expression("(-a).x")), "(-a).x");
  EXPECT_EQ(print_expr(parse_expression("not (a or b)")), "not (a or b)");
  EXPECT_EQ(print_expr(parse_expression("toward (a + b)")), "toward (a + b)");
  EXPECT_EQ(print_expr(parse_expression("0.1")), "0.1");
  EXPECT_EQ(print_expr(parse_expression("\"a\\\"b\"")), "\"a\\\"b\"");
}

TEST(Printer, IndentEqualsNesting) {
  Program p = parse_source(
      "behavior A():\n    try:\n        try:\n            wait\n        interrupt when x:\n            take Shoot\n"
      "    interrupt when y:\n        wait\n");
  const std::string text = pretty_print(p);
  EXPECT_NE(text.find("\n            wait\n"), std::string::npos) << text;
  EXPECT_NE(text.find("\n        interrupt when x:\n"), std::string::npos) << text;
  EXPECT_NE(text.find("\n    interrupt when y:\n"), std::string::npos) << text;
}

TEST(Printer, FuzzRoundTrip) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const std::string src = kickoff::testing::ProgramFuzzer(seed).program();
    Program a;
    ASSERT_NO_THROW(a = parse_source(src)) << src;
    const std::string text = pretty_print(a);
    Program b;
    ASSERT_NO_THROW(b = parse_source(text)) << text;
    EXPECT_EQ(a, b) << src << "\n----\n" << text;
  }
}

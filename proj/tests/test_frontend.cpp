// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "diffcond/frontend.hpp"
#include "fixtures.hpp"

using namespace diffcond;

namespace {

std::vector<std::string> edge_texts(const Cfa& c) {
    std::vector<std::string> out;
    for (const auto& e : c.edges())
        out.push_back(to_string(e));
    return out;
}

} // namespace

TEST(Parse, RunningExampleHasTwoTopLevelStatements) {
    EXPECT_EQ(parse_program("r = -x; if (x > 0) { r = -x; assert(r <= 0); }").stmts.size(), 2u);
}

TEST(Parse, EmptyProgram) { EXPECT_TRUE(parse_program("").stmts.empty()); }

TEST(Parse, MissingExpressionReportsPosition) {
    try {
        parse_program("x = ;");
        FAIL() << "expected a syntax error";
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.line(), 1);
        EXPECT_EQ(e.column(), 5);
    }
}

TEST(Parse, Errors) {
    EXPECT_THROW(parse_program("if (x > 0) { x = 1;"), SyntaxError);
    EXPECT_THROW(parse_program("x = 1 $ 2;"), SyntaxError);
    EXPECT_THROW(parse_program("assert(x);"), SyntaxError);
    EXPECT_THROW(parse_program("while x < 1 { }"), SyntaxError);
}

TEST(Parse, CommentsAndParenthesizedConditions) {
    const Ast a = parse_program("// header\nif ((x + 1) * 2 > 3 && !(y == 0 || z != 1)) { error; } // tail\n");
    ASSERT_EQ(a.stmts.size(), 1u);
    EXPECT_TRUE(std::holds_alternative<IfStmt>(a.stmts[0].node));
}

TEST(Parse, PrettyPrintRoundTrip) {
    const char* src = "x = 1; while (x < 3) { if (x == 2) { y = x * (x - 1); } else { y = -x % 2; } x = x + 1; }"
                      " assert(y >= 0 || !(x > 3)); error;";
    const Ast a = parse_program(src);
    EXPECT_EQ(parse_program(pretty_print(a)), a);
}

TEST(BuildCfa, RunningExampleOriginal) {
    const Cfa c = fixtures::cfa(fixtures::kRunningOriginal);
    EXPECT_EQ(c.locations(), (std::vector<Location>{0, 1, 2, 3, 4, 5}));
    EXPECT_EQ(c.initial(), 0);
    EXPECT_EQ(c.error(), 5);
    EXPECT_EQ(edge_texts(c), (std::vector<std::string>{
                                 "(0, r = -x;, 1)",
                                 "(1, x <= 0, 4)",
                                 "(1, x > 0, 2)",
                                 "(2, r = -x;, 3)",
                                 "(3, r <= 0, 4)",
                                 "(3, r > 0, 5)",
                             }));
    EXPECT_TRUE(check_deterministic(c).empty());
}

TEST(BuildCfa, EmptyProgram) {
    const Cfa c = build_cfa(parse_program(""));
    EXPECT_EQ(c.locations(), (std::vector<Location>{0, 1}));
    EXPECT_EQ(c.error(), 1);
    EXPECT_TRUE(c.edges().empty());
}

TEST(BuildCfa, Assert) {
    const Cfa c = build_cfa(parse_program("assert(x <= 5);"));
    EXPECT_EQ(edge_texts(c), (std::vector<std::string>{"(0, x <= 5, 1)", "(0, x > 5, 2)"}));
    EXPECT_EQ(c.error(), 2);
}

TEST(BuildCfa, ErrorStatementIsAssumeTrue) {
    const Cfa c = build_cfa(parse_program("error;"));
    ASSERT_EQ(c.edges().size(), 1u);
    EXPECT_EQ(c.edges()[0].op.text(), "true");
    EXPECT_EQ(c.edges()[0].dst, c.error());
}

TEST(BuildCfa, WhileLoopsBack) {
    const Cfa c = build_cfa(parse_program("while (x < 3) { x = x + 1; }"));
    EXPECT_EQ(edge_texts(c), (std::vector<std::string>{"(0, x < 3, 1)", "(0, x >= 3, 2)", "(1, x = x + 1;, 0)"}));
}

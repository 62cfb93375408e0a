// SPDX-License-Identifier: Apache-2.0
#pragma once

// Parser for the `.imp` language and its compilation to a CFA.
//
//   program := stmt*
//   stmt    := IDENT "=" aexpr ";"
//            | "if" "(" bexpr ")" block ("else" block)?
//            | "while" "(" bexpr ")" block
//            | "assert" "(" bexpr ")" ";"
//            | "error" ";"
//   block   := "{" stmt* "}"
//
// Arithmetic uses C precedence; `!` binds tighter than comparisons' enclosing
// connectives, `&&` tighter than `||`. `//` starts a line comment.

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "diffcond/cfa.hpp"
#include "diffcond/expr.hpp"

namespace diffcond {

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(int line, int column, const std::string& message);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

struct Stmt;
using Block = std::vector<Stmt>;

struct AssignStmt {
    std::string target;
    Arith value;
};

struct IfStmt {
    Bool condition;
    Block then_block;
    std::optional<Block> else_block;
};

struct WhileStmt {
    Bool condition;
    Block body;
};

struct AssertStmt {
    Bool condition;
};

struct ErrorStmt {};

struct Stmt {
    std::variant<AssignStmt, IfStmt, WhileStmt, AssertStmt, ErrorStmt> node;
};

struct Ast {
    Block stmts;
};

bool operator==(const Stmt& a, const Stmt& b);
bool operator==(const Ast& a, const Ast& b);

Ast parse_program(std::string_view source);

/// Reads a single expression (the whole input must be consumed).
Arith parse_arith(std::string_view text);
Bool parse_bool(std::string_view text);

/// Renders `ast` as source that parses back to an equal Ast.
std::string pretty_print(const Ast& ast);

/// Compiles to a CFA: one edge per assignment, a complementary assume pair per
/// branch condition and assertion, a single `assume true` edge for `error;`.
/// Locations are numbered in program order from 0; the error location gets
/// the highest number.
Cfa build_cfa(const Ast& ast);

} // namespace diffcond

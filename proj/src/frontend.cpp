// SPDX-License-Identifier: Apache-2.0
#include "diffcond/frontend.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

namespace diffcond {

SyntaxError::SyntaxError(int line, int column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message), line_(line),
      column_(column) {}

namespace {

enum class Tok { ident, number, punct, keyword, end };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
};

const std::set<std::string, std::less<>> keywords = {"if", "else", "while", "assert", "error", "true", "false"};

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    int line = 1, column = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            while (i < src.size() && src[i] != '\n')
                advance(1);
            continue;
        }
        const int l = line, col = column;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            std::string word(src.substr(i, j - i));
            Tok kind = keywords.contains(word) ? Tok::keyword : Tok::ident;
            out.push_back({kind, std::move(word), l, col});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                ++j;
            out.push_back({Tok::number, std::string(src.substr(i, j - i)), l, col});
            advance(j - i);
            continue;
        }
        static const char* two_char[] = {"<=", ">=", "==", "!=", "&&", "||"};
        bool matched = false;
        for (const char* op : two_char) {
            if (src.substr(i, 2) == op) {
                out.push_back({Tok::punct, op, l, col});
                advance(2);
                matched = true;
                break;
            }
        }
        if (matched)
            continue;
        if (std::string_view("+-*/%<>=!(){};").find(c) != std::string_view::npos) {
            out.push_back({Tok::punct, std::string(1, c), l, col});
            advance(1);
            continue;
        }
        throw SyntaxError(l, col, std::string("unknown token '") + c + "'");
    }
    out.push_back({Tok::end, "", line, column});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view src) : tokens_(tokenize(src)) {}

    Ast program() {
        Ast ast;
        while (!at_end()) {
            if (is("}"))
                fail("unbalanced block: unexpected '}'");
            ast.stmts.push_back(statement());
        }
        return ast;
    }

    Arith whole_arith() {
        auto e = arith();
        expect_end();
        return e;
    }

    Bool whole_bool() {
        auto e = boolean();
        expect_end();
        return e;
    }

private:
    const Token& peek(std::size_t ahead = 0) const { return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)]; }
    bool at_end() const { return peek().kind == Tok::end; }
    bool is(std::string_view text) const {
        return (peek().kind == Tok::punct || peek().kind == Tok::keyword) && peek().text == text;
    }

    [[noreturn]] void fail(const std::string& message) const {
        const auto& t = peek();
        throw SyntaxError(t.line, t.column, message);
    }

    void expect(std::string_view text) {
        if (!is(text)) {
            if (at_end())
                fail("expected '" + std::string(text) + "' before end of input");
            fail("expected '" + std::string(text) + "' but found '" + peek().text + "'");
        }
        ++pos_;
    }

    void expect_end() {
        if (!at_end())
            fail("unexpected '" + peek().text + "'");
    }

    Stmt statement() {
        if (is("if")) {
            ++pos_;
            expect("(");
            auto cond = boolean();
            expect(")");
            IfStmt s{cond, block(), std::nullopt};
            if (is("else")) {
                ++pos_;
                s.else_block = block();
            }
            return Stmt{std::move(s)};
        }
        if (is("while")) {
            ++pos_;
            expect("(");
            auto cond = boolean();
            expect(")");
            return Stmt{WhileStmt{cond, block()}};
        }
        if (is("assert")) {
            ++pos_;
            expect("(");
            auto cond = boolean();
            expect(")");
            expect(";");
            return Stmt{AssertStmt{cond}};
        }
        if (is("error")) {
            ++pos_;
            expect(";");
            return Stmt{ErrorStmt{}};
        }
        if (peek().kind == Tok::ident) {
            std::string target = peek().text;
            ++pos_;
            expect("=");
            auto value = arith();
            expect(";");
            return Stmt{AssignStmt{std::move(target), value}};
        }
        if (at_end())
            fail("unexpected end of input");
        fail("unexpected '" + peek().text + "' at start of statement");
    }

    Block block() {
        expect("{");
        Block stmts;
        while (!is("}")) {
            if (at_end())
                fail("unbalanced block: missing '}'");
            stmts.push_back(statement());
        }
        ++pos_;
        return stmts;
    }

    // aexpr := term (("+" | "-") term)*
    Arith arith() {
        auto lhs = term();
        while (is("+") || is("-")) {
            auto op = is("+") ? ArithOp::add : ArithOp::sub;
            ++pos_;
            lhs = make_binary(op, lhs, term());
        }
        return lhs;
    }

    Arith term() {
        auto lhs = unary();
        while (is("*") || is("/") || is("%")) {
            auto op = is("*") ? ArithOp::mul : is("/") ? ArithOp::div : ArithOp::mod;
            ++pos_;
            lhs = make_binary(op, lhs, unary());
        }
        return lhs;
    }

    Arith unary() {
        if (is("-")) {
            ++pos_;
            return make_negate(unary());
        }
        return primary();
    }

    Arith primary() {
        const auto& t = peek();
        if (t.kind == Tok::number) {
            Value v = 0;
            auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
            if (ec != std::errc())
                fail("integer literal out of range: " + t.text);
            ++pos_;
            return make_const(v);
        }
        if (t.kind == Tok::ident) {
            ++pos_;
            return make_var(t.text);
        }
        if (is("(")) {
            ++pos_;
            auto e = arith();
            expect(")");
            return e;
        }
        if (at_end())
            fail("expected expression before end of input");
        fail("expected expression but found '" + t.text + "'");
    }

    // bexpr := conj ("||" conj)*
    Bool boolean() {
        auto lhs = conjunction();
        while (is("||")) {
            ++pos_;
            lhs = make_or(lhs, conjunction());
        }
        return lhs;
    }

    Bool conjunction() {
        auto lhs = bool_unary();
        while (is("&&")) {
            ++pos_;
            lhs = make_and(lhs, bool_unary());
        }
        return lhs;
    }

    Bool bool_unary() {
        if (is("!")) {
            ++pos_;
            return make_not(bool_unary());
        }
        return bool_primary();
    }

    static bool continues_arith_or_compare(const Token& t) {
        if (t.kind != Tok::punct)
            return false;
        static const std::set<std::string, std::less<>> ops = {"+",  "-",  "*",  "/",  "%", "<",
                                                                "<=", ">", ">=", "==", "!="};
        return ops.contains(t.text);
    }

    Bool bool_primary() {
        if (is("true")) {
            ++pos_;
            return make_true();
        }
        if (is("false")) {
            ++pos_;
            return make_false();
        }
        if (is("(")) {
            // Either a parenthesized condition or a comparison whose left
            // operand starts with '('. Try the former first.
            const auto saved = pos_;
            try {
                ++pos_;
                auto inner = boolean();
                expect(")");
                if (!continues_arith_or_compare(peek()))
                    return inner;
            } catch (const SyntaxError&) {
            }
            pos_ = saved;
        }
        return comparison();
    }

    Bool comparison() {
        auto lhs = arith();
        static const std::pair<const char*, BoolOp> ops[] = {{"<=", BoolOp::le}, {">=", BoolOp::ge},
                                                              {"==", BoolOp::eq}, {"!=", BoolOp::ne},
                                                              {"<", BoolOp::lt},  {">", BoolOp::gt}};
        for (const auto& [text, op] : ops) {
            if (is(text)) {
                ++pos_;
                return make_compare(op, lhs, arith());
            }
        }
        if (at_end())
            fail("expected comparison operator before end of input");
        fail("expected comparison operator but found '" + peek().text + "'");
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

bool blocks_equal(const Block& a, const Block& b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

void print_block(const Block& block, int indent, std::string& out);

void print_stmt(const Stmt& stmt, int indent, std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent) * 4, ' ');
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, AssignStmt>) {
                out += pad + s.target + " = " + to_string(s.value) + ";\n";
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                out += pad + "if (" + to_string(s.condition) + ") {\n";
                print_block(s.then_block, indent + 1, out);
                out += pad + "}";
                if (s.else_block) {
                    out += " else {\n";
                    print_block(*s.else_block, indent + 1, out);
                    out += pad + "}";
                }
                out += "\n";
            } else if constexpr (std::is_same_v<T, WhileStmt>) {
                out += pad + "while (" + to_string(s.condition) + ") {\n";
                print_block(s.body, indent + 1, out);
                out += pad + "}\n";
            } else if constexpr (std::is_same_v<T, AssertStmt>) {
                out += pad + "assert(" + to_string(s.condition) + ");\n";
            } else {
                out += pad + "error;\n";
            }
        },
        stmt.node);
}

void print_block(const Block& block, int indent, std::string& out) {
    for (const auto& s : block)
        print_stmt(s, indent, out);
}

// Compilation keeps a "cursor": either a concrete location where the next
// statement starts, or a list of edges still waiting for their target.
// Targets are allocated lazily so numbering follows program order.
class CfaBuilder {
public:
    struct Pending {
        Location src;
        Operation op;
    };

    struct Cursor {
        std::optional<Location> at;
        std::vector<Pending> pending;
    };

    Cfa build(const Ast& ast) {
        Cursor cur{fresh(), {}};
        cur = compile_block(ast.stmts, std::move(cur));
        materialize(cur);
        const Location error = next_;
        std::vector<Location> locations;
        for (Location l = 0; l <= error; ++l)
            locations.push_back(l);
        for (auto& e : edges_)
            if (e.dst == kErrorPlaceholder)
                e.dst = error;
        return Cfa(std::move(locations), 0, error, std::move(edges_));
    }

private:
    static constexpr Location kErrorPlaceholder = -1;

    Location fresh() { return next_++; }

    Location materialize(Cursor& cur) {
        if (cur.at)
            return *cur.at;
        const Location l = fresh();
        for (auto& p : cur.pending)
            edges_.push_back(Edge{p.src, std::move(p.op), l});
        cur.pending.clear();
        cur.at = l;
        return l;
    }

    Cursor compile_block(const Block& block, Cursor cur) {
        for (const auto& s : block)
            cur = compile(s, std::move(cur));
        return cur;
    }

    Cursor compile(const Stmt& stmt, Cursor cur) {
        const Location entry = materialize(cur);
        return std::visit(
            [&](const auto& s) -> Cursor {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, AssignStmt>) {
                    return Cursor{std::nullopt, {{entry, Operation::assign(s.target, s.value)}}};
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    Cursor then_cur{std::nullopt, {{entry, Operation::assume(s.condition)}}};
                    then_cur = compile_block(s.then_block, std::move(then_cur));
                    Cursor else_cur{std::nullopt, {{entry, Operation::assume(negate(s.condition))}}};
                    if (s.else_block)
                        else_cur = compile_block(*s.else_block, std::move(else_cur));
                    Cursor out{std::nullopt, {}};
                    collect(then_cur, out);
                    collect(else_cur, out);
                    return out;
                } else if constexpr (std::is_same_v<T, WhileStmt>) {
                    Cursor body{std::nullopt, {{entry, Operation::assume(s.condition)}}};
                    body = compile_block(s.body, std::move(body));
                    for (auto& p : body.pending)
                        edges_.push_back(Edge{p.src, std::move(p.op), entry});
                    return Cursor{std::nullopt, {{entry, Operation::assume(negate(s.condition))}}};
                } else if constexpr (std::is_same_v<T, AssertStmt>) {
                    edges_.push_back(Edge{entry, Operation::assume(negate(s.condition)), kErrorPlaceholder});
                    return Cursor{std::nullopt, {{entry, Operation::assume(s.condition)}}};
                } else {
                    edges_.push_back(Edge{entry, Operation::assume(make_true()), kErrorPlaceholder});
                    return Cursor{std::nullopt, {}};
                }
            },
            stmt.node);
    }

    static void collect(Cursor& branch, Cursor& out) {
        for (auto& p : branch.pending)
            out.pending.push_back(std::move(p));
    }

    Location next_ = 0;
    std::vector<Edge> edges_;
};

} // namespace

bool operator==(const Stmt& a, const Stmt& b) {
    if (a.node.index() != b.node.index())
        return false;
    return std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, AssignStmt>) {
                return x.target == y.target && equal(x.value, y.value);
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                if (!equal(x.condition, y.condition) || !blocks_equal(x.then_block, y.then_block))
                    return false;
                if (x.else_block.has_value() != y.else_block.has_value())
                    return false;
                return !x.else_block || blocks_equal(*x.else_block, *y.else_block);
            } else if constexpr (std::is_same_v<T, WhileStmt>) {
                return equal(x.condition, y.condition) && blocks_equal(x.body, y.body);
            } else if constexpr (std::is_same_v<T, AssertStmt>) {
                return equal(x.condition, y.condition);
            } else {
                return true;
            }
        },
        a.node);
}

bool operator==(const Ast& a, const Ast& b) { return blocks_equal(a.stmts, b.stmts); }

Ast parse_program(std::string_view source) { return Parser(source).program(); }
Arith parse_arith(std::string_view text) { return Parser(text).whole_arith(); }
Bool parse_bool(std::string_view text) { return Parser(text).whole_bool(); }

std::string pretty_print(const Ast& ast) {
    std::string out;
    print_block(ast.stmts, 0, out);
    return out;
}

Cfa build_cfa(const Ast& ast) { return CfaBuilder().build(ast); }

} // namespace diffcond

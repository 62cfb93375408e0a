// SPDX-License-Identifier: Apache-2.0
#include "diffcond/taskgen.hpp"

#include <functional>
#include <random>
#include <stdexcept>

#include "diffcond/frontend.hpp"

namespace diffcond {
namespace {

const char* const kVarNames[] = {"x", "y", "z", "w"};

// std::uniform_int_distribution is implementation-defined; this is not.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    int below(int n) { return static_cast<int>(gen_() % static_cast<std::uint64_t>(n)); }
    int between(int lo, int hi) { return lo + below(hi - lo + 1); }
    bool chance(int percent) { return below(100) < percent; }

private:
    std::mt19937_64 gen_;
};

class Generator {
public:
    Generator(Rng& rng, const TaskParams& params) : rng_(rng), p_(params) {
        const int n = rng_.between(1, std::min(4, std::max(1, p_.max_vars)));
        for (int i = 0; i < n; ++i)
            vars_.push_back(kVarNames[i]);
    }

    Arith literal() {
        return make_const(static_cast<Value>(rng_.between(-p_.literal_bound, p_.literal_bound)));
    }

    Arith var() { return make_var(vars_[static_cast<std::size_t>(rng_.below(static_cast<int>(vars_.size())))]); }

    Arith arith(int depth) {
        if (depth == 0 || rng_.chance(45))
            return rng_.chance(60) ? var() : literal();
        static constexpr ArithOp ops[] = {ArithOp::add, ArithOp::sub, ArithOp::mul, ArithOp::add, ArithOp::sub};
        const ArithOp op = ops[rng_.below(5)];
        if (op == ArithOp::mul)
            return make_binary(op, var(), literal());
        if (p_.allow_division && rng_.chance(15))
            return make_binary(rng_.chance(50) ? ArithOp::div : ArithOp::mod, arith(depth - 1), var());
        if (rng_.chance(10))
            return make_negate(var());
        return make_binary(op, arith(depth - 1), arith(depth - 1));
    }

    BoolOp comparison_op() {
        static constexpr BoolOp ops[] = {BoolOp::lt, BoolOp::le, BoolOp::gt, BoolOp::ge, BoolOp::eq, BoolOp::ne};
        return ops[rng_.below(6)];
    }

    Bool atom() { return make_compare(comparison_op(), var(), rng_.chance(75) ? literal() : arith(1)); }

    Bool condition() {
        const int roll = rng_.below(100);
        if (roll < 70)
            return atom();
        if (roll < 82)
            return make_and(atom(), atom());
        if (roll < 94)
            return make_or(atom(), atom());
        return make_not(atom());
    }

    Stmt assign() { return Stmt{AssignStmt{var().get()->name, arith(2)}}; }

    Stmt simple() {
        if (rng_.chance(70))
            return assign();
        return Stmt{AssertStmt{condition()}};
    }

    Block block(int budget, int nesting) {
        Block out;
        while (budget > 0) {
            const int roll = rng_.below(100);
            if (nesting < p_.max_nesting && budget >= 2 && roll < 18) {
                const int inner = rng_.between(1, std::min(3, budget - 1));
                IfStmt s{condition(), block(inner, nesting + 1), std::nullopt};
                budget -= 1 + inner;
                if (budget >= 1 && rng_.chance(35)) {
                    const int alt = rng_.between(1, std::min(2, budget));
                    s.else_block = block(alt, nesting + 1);
                    budget -= alt;
                }
                out.push_back(Stmt{std::move(s)});
            } else if (nesting < p_.max_nesting && budget >= 3 && roll < 26) {
                // Counting loop: v < c with an increment, so it usually ends.
                Arith v = var();
                Block body = block(rng_.between(1, std::min(2, budget - 2)), nesting + 1);
                const int used = static_cast<int>(count(body));
                body.push_back(Stmt{AssignStmt{v->name, make_binary(ArithOp::add, v, make_const(1))}});
                out.push_back(Stmt{WhileStmt{make_compare(BoolOp::lt, v, literal()), std::move(body)}});
                budget -= 2 + used;
            } else if (budget >= 2 && roll < 31) {
                out.push_back(Stmt{IfStmt{condition(), Block{Stmt{ErrorStmt{}}}, std::nullopt}});
                budget -= 2;
            } else if (roll < 60) {
                out.push_back(Stmt{AssertStmt{condition()}});
                budget -= 1;
            } else {
                out.push_back(assign());
                budget -= 1;
            }
        }
        return out;
    }

    static std::size_t count(const Block& b) {
        std::size_t n = 0;
        for (const auto& s : b) {
            ++n;
            if (const auto* i = std::get_if<IfStmt>(&s.node)) {
                n += count(i->then_block);
                if (i->else_block)
                    n += count(*i->else_block);
            } else if (const auto* w = std::get_if<WhileStmt>(&s.node)) {
                n += count(w->body);
            }
        }
        return n;
    }

    Rng& rng() { return rng_; }
    const TaskParams& params() const { return p_; }

private:
    Rng& rng_;
    const TaskParams& p_;
    std::vector<std::string> vars_;
};

// Pre-order site enumeration: `visit` returns a replacement for the k-th
// matching node, counted across calls through `counter`.
struct Rewriter {
    int target = 0;
    int counter = 0;
    std::function<bool(const Arith&)> arith_match;
    std::function<Arith(const Arith&)> arith_apply;
    std::function<bool(const Bool&)> bool_match;
    std::function<Bool(const Bool&)> bool_apply;

    Arith visit(const Arith& e) {
        if (arith_match && arith_match(e) && counter++ == target)
            return arith_apply(e);
        switch (e->op) {
        case ArithOp::constant:
        case ArithOp::variable:
            return e;
        case ArithOp::negate:
            return make_negate(visit(e->lhs));
        default: {
            Arith l = visit(e->lhs);
            Arith r = visit(e->rhs);
            return make_binary(e->op, l, r);
        }
        }
    }

    Bool visit(const Bool& b) {
        if (bool_match && bool_match(b) && counter++ == target)
            return bool_apply(b);
        switch (b->op) {
        case BoolOp::tt:
        case BoolOp::ff:
            return b;
        case BoolOp::land: {
            Bool l = visit(b->lhs);
            return make_and(l, visit(b->rhs));
        }
        case BoolOp::lor: {
            Bool l = visit(b->lhs);
            return make_or(l, visit(b->rhs));
        }
        case BoolOp::lnot:
            return make_not(visit(b->lhs));
        default: {
            Arith l = visit(b->left);
            return make_compare(b->op, l, visit(b->right));
        }
        }
    }

    void visit(Block& block) {
        for (auto& s : block) {
            if (auto* a = std::get_if<AssignStmt>(&s.node)) {
                a->value = visit(a->value);
            } else if (auto* i = std::get_if<IfStmt>(&s.node)) {
                i->condition = visit(i->condition);
                visit(i->then_block);
                if (i->else_block)
                    visit(*i->else_block);
            } else if (auto* w = std::get_if<WhileStmt>(&s.node)) {
                w->condition = visit(w->condition);
                visit(w->body);
            } else if (auto* as = std::get_if<AssertStmt>(&s.node)) {
                as->condition = visit(as->condition);
            }
        }
    }
};

int count_sites(Block block, Rewriter r) {
    r.target = -1;
    r.visit(block);
    return r.counter;
}

bool rewrite_random(Block& block, Rewriter r, Rng& rng) {
    const int n = count_sites(block, r);
    if (n == 0)
        return false;
    r.target = rng.below(n);
    r.counter = 0;
    r.visit(block);
    return true;
}

// Every block in the program, for insertion and deletion.
void collect_blocks(Block& b, std::vector<Block*>& out) {
    out.push_back(&b);
    for (auto& s : b) {
        if (auto* i = std::get_if<IfStmt>(&s.node)) {
            collect_blocks(i->then_block, out);
            if (i->else_block)
                collect_blocks(*i->else_block, out);
        } else if (auto* w = std::get_if<WhileStmt>(&s.node)) {
            collect_blocks(w->body, out);
        }
    }
}

void collect_asserts(Block& b, std::vector<AssertStmt*>& out) {
    for (auto& s : b) {
        if (auto* a = std::get_if<AssertStmt>(&s.node)) {
            out.push_back(a);
        } else if (auto* i = std::get_if<IfStmt>(&s.node)) {
            collect_asserts(i->then_block, out);
            if (i->else_block)
                collect_asserts(*i->else_block, out);
        } else if (auto* w = std::get_if<WhileStmt>(&s.node)) {
            collect_asserts(w->body, out);
        }
    }
}

BoolOp swap_comparison(BoolOp op, Rng& rng) {
    switch (op) {
    case BoolOp::lt: return rng.chance(50) ? BoolOp::le : BoolOp::gt;
    case BoolOp::le: return rng.chance(50) ? BoolOp::lt : BoolOp::ge;
    case BoolOp::gt: return rng.chance(50) ? BoolOp::ge : BoolOp::lt;
    case BoolOp::ge: return rng.chance(50) ? BoolOp::gt : BoolOp::le;
    case BoolOp::eq: return BoolOp::ne;
    default: return BoolOp::eq;
    }
}

Value tweak(Value v, Rng& rng) {
    static constexpr Value deltas[] = {-2, -1, 1, 2};
    return v + deltas[rng.below(4)];
}

// Literal value of a constant or negated constant, as the parser builds them.
std::optional<Value> literal_value(const Arith& e) {
    if (e->op == ArithOp::constant)
        return e->value;
    if (e->op == ArithOp::negate && e->lhs->op == ArithOp::constant)
        return -e->lhs->value;
    return std::nullopt;
}

bool mutate_operator(Block& b, Rng& rng) {
    Rewriter r;
    const bool in_condition = rng.chance(60);
    if (in_condition) {
        r.bool_match = [](const Bool& e) { return is_comparison(e->op); };
        r.bool_apply = [&rng](const Bool& e) { return make_compare(swap_comparison(e->op, rng), e->left, e->right); };
    } else {
        r.arith_match = [](const Arith& e) {
            return e->op == ArithOp::add || e->op == ArithOp::sub || e->op == ArithOp::mul;
        };
        r.arith_apply = [](const Arith& e) {
            const ArithOp op = e->op == ArithOp::add ? ArithOp::sub : ArithOp::add;
            return make_binary(op, e->lhs, e->rhs);
        };
    }
    return rewrite_random(b, r, rng);
}

bool mutate_constant(Block& b, Rng& rng) {
    Rewriter r;
    r.arith_match = [](const Arith& e) { return literal_value(e).has_value(); };
    r.arith_apply = [&rng](const Arith& e) { return make_const(tweak(*literal_value(e), rng)); };
    return rewrite_random(b, r, rng);
}

bool mutate_insert(Block& b, Generator& gen) {
    std::vector<Block*> blocks;
    collect_blocks(b, blocks);
    Block* target = blocks[static_cast<std::size_t>(gen.rng().below(static_cast<int>(blocks.size())))];
    const int at = gen.rng().below(static_cast<int>(target->size()) + 1);
    target->insert(target->begin() + at, gen.simple());
    return true;
}

bool mutate_delete(Block& b, Rng& rng) {
    std::vector<Block*> blocks;
    collect_blocks(b, blocks);
    std::erase_if(blocks, [](Block* x) { return x->empty(); });
    if (blocks.empty())
        return false;
    Block* target = blocks[static_cast<std::size_t>(rng.below(static_cast<int>(blocks.size())))];
    target->erase(target->begin() + rng.below(static_cast<int>(target->size())));
    return true;
}

// Strengthen (weaken) moves an assertion's literal bounds inward (outward)
// or conjoins (disjoins) a fresh comparison.
bool mutate_assert(Block& b, Generator& gen, bool strengthen) {
    std::vector<AssertStmt*> asserts;
    collect_asserts(b, asserts);
    if (asserts.empty())
        return false;
    Rng& rng = gen.rng();
    AssertStmt* a = asserts[static_cast<std::size_t>(rng.below(static_cast<int>(asserts.size())))];
    const Bool& c = a->condition;
    if (is_comparison(c->op) && literal_value(c->right) && rng.chance(70)) {
        const Value v = *literal_value(c->right);
        const Value step = rng.between(1, 2);
        Value next = v;
        switch (c->op) {
        case BoolOp::lt:
        case BoolOp::le: next = strengthen ? v - step : v + step; break;
        case BoolOp::gt:
        case BoolOp::ge: next = strengthen ? v + step : v - step; break;
        default: next = v + (rng.chance(50) ? step : -step); break;
        }
        a->condition = make_compare(c->op, c->left, make_const(next));
        return true;
    }
    a->condition = strengthen ? make_and(c, gen.atom()) : make_or(c, gen.atom());
    return true;
}

const char* const kKinds[] = {"operator_swap", "constant_tweak", "insert", "delete", "assert_strengthen",
                               "assert_weaken"};

bool apply_mutation(int kind, Block& stmts, Generator& gen) {
    switch (kind) {
    case 0: return mutate_operator(stmts, gen.rng());
    case 1: return mutate_constant(stmts, gen.rng());
    case 2: return mutate_insert(stmts, gen);
    case 3: return mutate_delete(stmts, gen.rng());
    case 4: return mutate_assert(stmts, gen, true);
    default: return mutate_assert(stmts, gen, false);
    }
}

} // namespace

Task generate_task(std::uint64_t seed, const TaskParams& params) {
    Rng rng(seed);
    Generator gen(rng, params);
    Ast original{gen.block(rng.between(2, std::max(2, params.max_stmts)), 0)};
    Ast modified = original;

    Task task;
    task.seed = seed;
    const int wanted = rng.chance(4) ? 0 : rng.between(1, std::max(1, params.max_mutations));
    for (int done = 0, attempts = 0; done < wanted && attempts < 20; ++attempts) {
        const int k = rng.below(6);
        if (apply_mutation(k, modified.stmts, gen)) {
            task.mutations.push_back(kKinds[k]);
            ++done;
        }
    }
    task.original = pretty_print(original);
    task.modified = pretty_print(modified);
    return task;
}

std::string mutate(const std::string& source, const std::string& kind, std::uint64_t seed, const TaskParams& params) {
    int k = 0;
    while (k < 6 && kind != kKinds[k])
        ++k;
    if (k == 6)
        throw std::invalid_argument("unknown mutation kind '" + kind + "'");
    Rng rng(seed);
    Generator gen(rng, params);
    Ast ast = parse_program(source);
    apply_mutation(k, ast.stmts, gen);
    return pretty_print(ast);
}

} // namespace diffcond

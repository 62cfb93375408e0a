// SPDX-License-Identifier: Apache-2.0
#include "diffcond/expr.hpp"

#include <stdexcept>

namespace diffcond {

Arith make_const(Value v) {
    if (v < 0) {
        if (v == INT64_MIN)
            throw std::invalid_argument("constant out of range");
        return make_negate(make_const(-v));
    }
    return std::make_shared<const ArithNode>(ArithNode{ArithOp::constant, v, {}, nullptr, nullptr});
}

Arith make_var(std::string name) {
    return std::make_shared<const ArithNode>(ArithNode{ArithOp::variable, 0, std::move(name), nullptr, nullptr});
}

Arith make_negate(Arith operand) {
    return std::make_shared<const ArithNode>(ArithNode{ArithOp::negate, 0, {}, std::move(operand), nullptr});
}

Arith make_binary(ArithOp op, Arith lhs, Arith rhs) {
    return std::make_shared<const ArithNode>(ArithNode{op, 0, {}, std::move(lhs), std::move(rhs)});
}

Bool make_true() { return std::make_shared<const BoolNode>(BoolNode{BoolOp::tt, nullptr, nullptr, nullptr, nullptr}); }
Bool make_false() { return std::make_shared<const BoolNode>(BoolNode{BoolOp::ff, nullptr, nullptr, nullptr, nullptr}); }

Bool make_compare(BoolOp op, Arith left, Arith right) {
    return std::make_shared<const BoolNode>(BoolNode{op, std::move(left), std::move(right), nullptr, nullptr});
}

Bool make_and(Bool lhs, Bool rhs) {
    return std::make_shared<const BoolNode>(BoolNode{BoolOp::land, nullptr, nullptr, std::move(lhs), std::move(rhs)});
}

Bool make_or(Bool lhs, Bool rhs) {
    return std::make_shared<const BoolNode>(BoolNode{BoolOp::lor, nullptr, nullptr, std::move(lhs), std::move(rhs)});
}

Bool make_not(Bool operand) {
    return std::make_shared<const BoolNode>(BoolNode{BoolOp::lnot, nullptr, nullptr, std::move(operand), nullptr});
}

bool is_comparison(BoolOp op) {
    switch (op) {
    case BoolOp::lt:
    case BoolOp::le:
    case BoolOp::gt:
    case BoolOp::ge:
    case BoolOp::eq:
    case BoolOp::ne:
        return true;
    default:
        return false;
    }
}

bool equal(const Arith& a, const Arith& b) {
    if (a == b)
        return true;
    if (!a || !b || a->op != b->op)
        return false;
    switch (a->op) {
    case ArithOp::constant:
        return a->value == b->value;
    case ArithOp::variable:
        return a->name == b->name;
    case ArithOp::negate:
        return equal(a->lhs, b->lhs);
    default:
        return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    }
}

bool equal(const Bool& a, const Bool& b) {
    if (a == b)
        return true;
    if (!a || !b || a->op != b->op)
        return false;
    if (is_comparison(a->op))
        return equal(a->left, b->left) && equal(a->right, b->right);
    switch (a->op) {
    case BoolOp::tt:
    case BoolOp::ff:
        return true;
    case BoolOp::lnot:
        return equal(a->lhs, b->lhs);
    default:
        return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    }
}

namespace {

int level(const Arith& e) {
    switch (e->op) {
    case ArithOp::add:
    case ArithOp::sub:
        return 1;
    case ArithOp::mul:
    case ArithOp::div:
    case ArithOp::mod:
        return 2;
    case ArithOp::negate:
        return 3;
    default:
        return 4;
    }
}

const char* symbol(ArithOp op) {
    switch (op) {
    case ArithOp::add: return "+";
    case ArithOp::sub: return "-";
    case ArithOp::mul: return "*";
    case ArithOp::div: return "/";
    case ArithOp::mod: return "%";
    default: return "?";
    }
}

const char* symbol(BoolOp op) {
    switch (op) {
    case BoolOp::lt: return "<";
    case BoolOp::le: return "<=";
    case BoolOp::gt: return ">";
    case BoolOp::ge: return ">=";
    case BoolOp::eq: return "==";
    case BoolOp::ne: return "!=";
    case BoolOp::land: return "&&";
    case BoolOp::lor: return "||";
    default: return "?";
    }
}

void print(const Arith& e, std::string& out);

void print_wrapped(const Arith& e, bool parens, std::string& out) {
    if (parens)
        out += '(';
    print(e, out);
    if (parens)
        out += ')';
}

void print(const Arith& e, std::string& out) {
    switch (e->op) {
    case ArithOp::constant:
        out += std::to_string(e->value);
        return;
    case ArithOp::variable:
        out += e->name;
        return;
    case ArithOp::negate:
        out += '-';
        print_wrapped(e->lhs, level(e->lhs) <= 3, out);
        return;
    default: {
        const int l = level(e);
        print_wrapped(e->lhs, level(e->lhs) < l, out);
        out += ' ';
        out += symbol(e->op);
        out += ' ';
        print_wrapped(e->rhs, level(e->rhs) <= l, out);
    }
    }
}

int level(const Bool& e) {
    switch (e->op) {
    case BoolOp::lor:
        return 1;
    case BoolOp::land:
        return 2;
    case BoolOp::lnot:
        return 3;
    default:
        return 4;
    }
}

void print(const Bool& e, std::string& out);

void print_wrapped(const Bool& e, bool parens, std::string& out) {
    if (parens)
        out += '(';
    print(e, out);
    if (parens)
        out += ')';
}

void print(const Bool& e, std::string& out) {
    if (is_comparison(e->op)) {
        print(e->left, out);
        out += ' ';
        out += symbol(e->op);
        out += ' ';
        print(e->right, out);
        return;
    }
    switch (e->op) {
    case BoolOp::tt:
        out += "true";
        return;
    case BoolOp::ff:
        out += "false";
        return;
    case BoolOp::lnot:
        out += '!';
        print_wrapped(e->lhs, !(e->lhs->op == BoolOp::tt || e->lhs->op == BoolOp::ff || e->lhs->op == BoolOp::lnot),
                      out);
        return;
    default: {
        const int l = level(e);
        print_wrapped(e->lhs, level(e->lhs) < l, out);
        out += ' ';
        out += symbol(e->op);
        out += ' ';
        print_wrapped(e->rhs, level(e->rhs) <= l, out);
    }
    }
}

BoolOp flip(BoolOp op) {
    switch (op) {
    case BoolOp::lt: return BoolOp::ge;
    case BoolOp::le: return BoolOp::gt;
    case BoolOp::gt: return BoolOp::le;
    case BoolOp::ge: return BoolOp::lt;
    case BoolOp::eq: return BoolOp::ne;
    case BoolOp::ne: return BoolOp::eq;
    case BoolOp::tt: return BoolOp::ff;
    case BoolOp::ff: return BoolOp::tt;
    case BoolOp::land: return BoolOp::lor;
    case BoolOp::lor: return BoolOp::land;
    default: throw std::logic_error("flip of lnot");
    }
}

// `e` is already in normal form.
Bool negate_normal(const Bool& e) {
    if (is_comparison(e->op))
        return make_compare(flip(e->op), e->left, e->right);
    switch (e->op) {
    case BoolOp::tt:
        return make_false();
    case BoolOp::ff:
        return make_true();
    case BoolOp::land:
        return make_or(negate_normal(e->lhs), negate_normal(e->rhs));
    case BoolOp::lor:
        return make_and(negate_normal(e->lhs), negate_normal(e->rhs));
    default:
        throw std::logic_error("negate_normal on non-normal expression");
    }
}

} // namespace

std::string to_string(const Arith& e) {
    std::string out;
    print(e, out);
    return out;
}

std::string to_string(const Bool& e) {
    std::string out;
    print(e, out);
    return out;
}

Bool normalize(const Bool& e) {
    switch (e->op) {
    case BoolOp::land:
        return make_and(normalize(e->lhs), normalize(e->rhs));
    case BoolOp::lor:
        return make_or(normalize(e->lhs), normalize(e->rhs));
    case BoolOp::lnot:
        return negate_normal(normalize(e->lhs));
    default:
        return e;
    }
}

Bool negate(const Bool& e) { return negate_normal(normalize(e)); }

void collect_vars(const Arith& e, VarSet& out) {
    switch (e->op) {
    case ArithOp::constant:
        return;
    case ArithOp::variable:
        out.insert(e->name);
        return;
    case ArithOp::negate:
        collect_vars(e->lhs, out);
        return;
    default:
        collect_vars(e->lhs, out);
        collect_vars(e->rhs, out);
    }
}

void collect_vars(const Bool& e, VarSet& out) {
    if (is_comparison(e->op)) {
        collect_vars(e->left, out);
        collect_vars(e->right, out);
        return;
    }
    if (e->lhs)
        collect_vars(e->lhs, out);
    if (e->rhs)
        collect_vars(e->rhs, out);
}

bool has_division(const Arith& e) {
    switch (e->op) {
    case ArithOp::constant:
    case ArithOp::variable:
        return false;
    case ArithOp::negate:
        return has_division(e->lhs);
    case ArithOp::div:
    case ArithOp::mod:
        return true;
    default:
        return has_division(e->lhs) || has_division(e->rhs);
    }
}

bool has_division(const Bool& e) {
    if (is_comparison(e->op))
        return has_division(e->left) || has_division(e->right);
    return (e->lhs && has_division(e->lhs)) || (e->rhs && has_division(e->rhs));
}

std::optional<Value> eval(const Arith& e, const DataState& s) {
    switch (e->op) {
    case ArithOp::constant:
        return e->value;
    case ArithOp::variable:
        return s.get(e->name);
    case ArithOp::negate: {
        auto v = eval(e->lhs, s);
        if (!v || *v == INT64_MIN)
            return std::nullopt;
        return -*v;
    }
    default:
        break;
    }
    auto a = eval(e->lhs, s);
    if (!a)
        return std::nullopt;
    auto b = eval(e->rhs, s);
    if (!b)
        return std::nullopt;
    Value r = 0;
    switch (e->op) {
    case ArithOp::add:
        if (__builtin_add_overflow(*a, *b, &r))
            return std::nullopt;
        return r;
    case ArithOp::sub:
        if (__builtin_sub_overflow(*a, *b, &r))
            return std::nullopt;
        return r;
    case ArithOp::mul:
        if (__builtin_mul_overflow(*a, *b, &r))
            return std::nullopt;
        return r;
    case ArithOp::div:
        if (*b == 0 || (*a == INT64_MIN && *b == -1))
            return std::nullopt;
        return *a / *b;
    case ArithOp::mod:
        if (*b == 0 || (*a == INT64_MIN && *b == -1))
            return std::nullopt;
        return *a % *b;
    default:
        throw std::logic_error("unreachable arithmetic operator");
    }
}

std::optional<bool> eval(const Bool& e, const DataState& s) {
    if (is_comparison(e->op)) {
        auto a = eval(e->left, s);
        if (!a)
            return std::nullopt;
        auto b = eval(e->right, s);
        if (!b)
            return std::nullopt;
        switch (e->op) {
        case BoolOp::lt: return *a < *b;
        case BoolOp::le: return *a <= *b;
        case BoolOp::gt: return *a > *b;
        case BoolOp::ge: return *a >= *b;
        case BoolOp::eq: return *a == *b;
        default: return *a != *b;
        }
    }
    switch (e->op) {
    case BoolOp::tt:
        return true;
    case BoolOp::ff:
        return false;
    case BoolOp::lnot: {
        auto v = eval(e->lhs, s);
        if (!v)
            return std::nullopt;
        return !*v;
    }
    case BoolOp::land: {
        auto l = eval(e->lhs, s);
        if (!l || !*l)
            return l;
        return eval(e->rhs, s);
    }
    default: {
        auto l = eval(e->lhs, s);
        if (!l || *l)
            return l;
        return eval(e->rhs, s);
    }
    }
}

} // namespace diffcond

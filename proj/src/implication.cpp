// SPDX-License-Identifier: Apache-2.0
#include <map>
#include <optional>
#include <string>

#include "diffcond/detect.hpp"

namespace diffcond {
namespace {

using Wide = __int128;

constexpr Wide kLimit = Wide{1} << 62;

// sum(coeffs[v] * v) + constant
struct Linear {
    std::map<std::string, Wide> coeffs;
    Wide constant = 0;
};

bool in_range(Wide v) { return v > -kLimit && v < kLimit; }

std::optional<Linear> linearize(const Arith& e) {
    switch (e->op) {
    case ArithOp::constant:
        return Linear{{}, e->value};
    case ArithOp::variable:
        return Linear{{{e->name, 1}}, 0};
    case ArithOp::negate: {
        auto l = linearize(e->lhs);
        if (!l)
            return std::nullopt;
        for (auto& [v, c] : l->coeffs)
            c = -c;
        l->constant = -l->constant;
        return l;
    }
    case ArithOp::add:
    case ArithOp::sub: {
        auto a = linearize(e->lhs);
        auto b = linearize(e->rhs);
        if (!a || !b)
            return std::nullopt;
        const Wide sign = e->op == ArithOp::add ? 1 : -1;
        for (const auto& [v, c] : b->coeffs)
            a->coeffs[v] += sign * c;
        a->constant += sign * b->constant;
        std::erase_if(a->coeffs, [](const auto& kv) { return kv.second == 0; });
        for (const auto& [v, c] : a->coeffs)
            if (!in_range(c))
                return std::nullopt;
        if (!in_range(a->constant))
            return std::nullopt;
        return a;
    }
    case ArithOp::mul: {
        auto a = linearize(e->lhs);
        auto b = linearize(e->rhs);
        if (!a || !b)
            return std::nullopt;
        if (!a->coeffs.empty() && !b->coeffs.empty())
            return std::nullopt;
        if (!a->coeffs.empty())
            std::swap(a, b);
        const Wide k = a->constant;
        if (!in_range(k) || (k != 0 && (b->constant > kLimit / (k < 0 ? -k : k) ||
                                        b->constant < -kLimit / (k < 0 ? -k : k))))
            return std::nullopt;
        Linear out;
        for (const auto& [v, c] : b->coeffs) {
            if (k != 0 && (c > kLimit / (k < 0 ? -k : k) || c < -kLimit / (k < 0 ? -k : k)))
                return std::nullopt;
            if (c * k != 0)
                out.coeffs[v] = c * k;
        }
        out.constant = b->constant * k;
        return out;
    }
    case ArithOp::div:
    case ArithOp::mod:
        return std::nullopt;
    }
    return std::nullopt;
}

Wide floor_div(Wide a, Wide b) {
    Wide q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

Wide ceil_div(Wide a, Wide b) { return -floor_div(-a, b); }

// A set of integers: an interval (possibly empty or unbounded) or Z minus one point.
struct IntSet {
    bool punctured = false;
    std::optional<Wide> lo, hi;
    Wide hole = 0;

    bool empty() const { return !punctured && lo && hi && *lo > *hi; }
    bool all() const { return !punctured && !lo && !hi; }
    bool contains(Wide v) const {
        if (punctured)
            return v != hole;
        return (!lo || v >= *lo) && (!hi || v <= *hi);
    }
};

bool subset(const IntSet& a, const IntSet& b) {
    if (a.empty() || b.all())
        return true;
    if (b.punctured) {
        if (a.punctured)
            return a.hole == b.hole;
        return !a.contains(b.hole);
    }
    if (a.punctured)
        return false;
    if (b.lo && (!a.lo || *a.lo < *b.lo))
        return false;
    if (b.hi && (!a.hi || *a.hi > *b.hi))
        return false;
    return true;
}

// The atom as a constraint on a single variable, or a constant truth value.
struct AtomForm {
    std::optional<bool> constant;
    std::string var;
    IntSet set;
};

std::optional<AtomForm> atom_form(const Bool& b) {
    if (!is_comparison(b->op))
        return std::nullopt;
    auto l = linearize(b->left);
    auto r = linearize(b->right);
    if (!l || !r)
        return std::nullopt;
    // k*x + m  op  0
    for (const auto& [v, c] : r->coeffs)
        l->coeffs[v] -= c;
    std::erase_if(l->coeffs, [](const auto& kv) { return kv.second == 0; });
    const Wide m = l->constant - r->constant;
    BoolOp op = b->op;
    AtomForm out;
    if (l->coeffs.empty()) {
        switch (op) {
        case BoolOp::lt: out.constant = m < 0; break;
        case BoolOp::le: out.constant = m <= 0; break;
        case BoolOp::gt: out.constant = m > 0; break;
        case BoolOp::ge: out.constant = m >= 0; break;
        case BoolOp::eq: out.constant = m == 0; break;
        case BoolOp::ne: out.constant = m != 0; break;
        default: return std::nullopt;
        }
        return out;
    }
    if (l->coeffs.size() != 1)
        return std::nullopt;
    out.var = l->coeffs.begin()->first;
    Wide k = l->coeffs.begin()->second;
    Wide t = -m; // k*x op t
    if (k < 0) {
        k = -k;
        t = -t;
        switch (op) {
        case BoolOp::lt: op = BoolOp::gt; break;
        case BoolOp::le: op = BoolOp::ge; break;
        case BoolOp::gt: op = BoolOp::lt; break;
        case BoolOp::ge: op = BoolOp::le; break;
        default: break;
        }
    }
    switch (op) {
    case BoolOp::lt: out.set.hi = floor_div(t - 1, k); break;
    case BoolOp::le: out.set.hi = floor_div(t, k); break;
    case BoolOp::gt: out.set.lo = floor_div(t, k) + 1; break;
    case BoolOp::ge: out.set.lo = ceil_div(t, k); break;
    case BoolOp::eq:
        if (t % k == 0) {
            out.set.lo = out.set.hi = t / k;
        } else {
            out.set.lo = 1;
            out.set.hi = 0;
        }
        break;
    case BoolOp::ne:
        if (t % k == 0) {
            out.set.punctured = true;
            out.set.hole = t / k;
        }
        break;
    default:
        return std::nullopt;
    }
    return out;
}

bool atom_implies(const Bool& p, const Bool& c) {
    auto pf = atom_form(p);
    auto cf = atom_form(c);
    if (pf && pf->constant && !*pf->constant)
        return true;
    if (cf && cf->constant && *cf->constant)
        return true;
    if (!pf || !cf || pf->constant || cf->constant)
        return false;
    if (pf->set.empty())
        return true;
    return pf->var == cf->var && subset(pf->set, cf->set);
}

} // namespace

bool implies(const Bool& premise, const Bool& conclusion) {
    if (equal(premise, conclusion) || conclusion->op == BoolOp::tt || premise->op == BoolOp::ff)
        return true;
    if (conclusion->op == BoolOp::land)
        return implies(premise, conclusion->lhs) && implies(premise, conclusion->rhs);
    if (premise->op == BoolOp::lor)
        return implies(premise->lhs, conclusion) && implies(premise->rhs, conclusion);
    if (conclusion->op == BoolOp::lor && (implies(premise, conclusion->lhs) || implies(premise, conclusion->rhs)))
        return true;
    if (premise->op == BoolOp::land)
        return implies(premise->lhs, conclusion) || implies(premise->rhs, conclusion);
    if (is_comparison(premise->op) && is_comparison(conclusion->op))
        return atom_implies(premise, conclusion);
    return false;
}

bool provably_unsat(const Bool& e) {
    switch (e->op) {
    case BoolOp::ff:
        return true;
    case BoolOp::tt:
        return false;
    case BoolOp::land:
        return provably_unsat(e->lhs) || provably_unsat(e->rhs);
    case BoolOp::lor:
        return provably_unsat(e->lhs) && provably_unsat(e->rhs);
    case BoolOp::lnot:
        return false;
    default: {
        auto f = atom_form(e);
        if (!f)
            return false;
        if (f->constant)
            return !*f->constant;
        return f->set.empty();
    }
    }
}

std::optional<Edge> assume_match(const Operation& op_prime, std::span<const Edge> candidates,
                                 bool implication_matching) {
    for (const auto& c : candidates)
        if (c.op.is_assume() && c.op == op_prime)
            return c;
    if (!implication_matching || provably_unsat(op_prime.condition()))
        return std::nullopt;
    std::optional<Edge> found;
    for (const auto& c : candidates) {
        if (!c.op.is_assume() || has_division(c.op.condition()))
            continue;
        if (implies(op_prime.condition(), c.op.condition())) {
            if (found)
                return std::nullopt; // ambiguous
            found = c;
        }
    }
    return found;
}

} // namespace diffcond

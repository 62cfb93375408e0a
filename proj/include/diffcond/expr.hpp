// SPDX-License-Identifier: Apache-2.0
#pragma once

// Integer and boolean expression trees shared by the frontend, the CFA
// operations and the concrete semantics. Nodes are immutable and shared.

#include <memory>
#include <optional>
#include <string>

#include "diffcond/state.hpp"

namespace diffcond {

enum class ArithOp { constant, variable, negate, add, sub, mul, div, mod };

struct ArithNode;
using Arith = std::shared_ptr<const ArithNode>;

struct ArithNode {
    ArithOp op;
    Value value = 0;  // constant (always >= 0; negatives are negate(constant))
    std::string name; // variable
    Arith lhs;        // negate operand, or left operand
    Arith rhs;
};

Arith make_const(Value v);
Arith make_var(std::string name);
Arith make_negate(Arith operand);
Arith make_binary(ArithOp op, Arith lhs, Arith rhs);

enum class BoolOp { tt, ff, lt, le, gt, ge, eq, ne, land, lor, lnot };

struct BoolNode;
using Bool = std::shared_ptr<const BoolNode>;

struct BoolNode {
    BoolOp op;
    Arith left, right; // comparison operands
    Bool lhs, rhs;     // connective operands (lnot uses lhs)
};

Bool make_true();
Bool make_false();
Bool make_compare(BoolOp op, Arith left, Arith right);
Bool make_and(Bool lhs, Bool rhs);
Bool make_or(Bool lhs, Bool rhs);
Bool make_not(Bool operand);

bool is_comparison(BoolOp op);

bool equal(const Arith& a, const Arith& b);
bool equal(const Bool& a, const Bool& b);

/// Canonical infix rendering with minimal parentheses; `parse_*` reads it back.
std::string to_string(const Arith& e);
std::string to_string(const Bool& e);

/// Negation normal form without any `lnot` node: negations are folded into
/// comparison operators, connectives and literals.
Bool normalize(const Bool& e);
/// normalize(!e).
Bool negate(const Bool& e);

void collect_vars(const Arith& e, VarSet& out);
void collect_vars(const Bool& e, VarSet& out);

bool has_division(const Arith& e);
bool has_division(const Bool& e);

/// Integer evaluation; nullopt when a division or modulo by zero occurs or a
/// result leaves the 64-bit range. Division truncates toward zero.
std::optional<Value> eval(const Arith& e, const DataState& s);
/// Short-circuit boolean evaluation; nullopt when an evaluated operand blocks.
std::optional<bool> eval(const Bool& e, const DataState& s);

} // namespace diffcond

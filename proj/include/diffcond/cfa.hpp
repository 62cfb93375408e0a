// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "diffcond/expr.hpp"

namespace diffcond {

using Location = int;

/// Malformed serialized input (JSON shape, dangling references, bad text).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A CFA edge label: `assume(b)` or `x := e`.
///
/// Assume conditions are kept in negation normal form, so the two edges of a
/// branch are recognizably complementary. Two operations are equal iff they
/// have the same kind and the same canonical text.
class Operation {
public:
    enum class Kind { assume, assign };

    static Operation assume(const Bool& condition);
    static Operation assign(std::string target, Arith value);
    /// Inverse of text().
    static Operation parse(std::string_view text);

    Kind kind() const { return kind_; }
    bool is_assume() const { return kind_ == Kind::assume; }
    bool is_assign() const { return kind_ == Kind::assign; }

    const Bool& condition() const { return condition_; }
    const std::string& target() const { return target_; }
    const Arith& value() const { return value_; }

    /// `x > 0` for assumes, `r = -x;` for assignments.
    const std::string& text() const { return text_; }

    friend bool operator==(const Operation& a, const Operation& b) {
        return a.kind_ == b.kind_ && a.text_ == b.text_;
    }
    friend std::strong_ordering operator<=>(const Operation& a, const Operation& b) {
        if (auto c = a.kind_ <=> b.kind_; c != 0)
            return c;
        return a.text_ <=> b.text_;
    }

private:
    Operation() = default;

    Kind kind_ = Kind::assume;
    Bool condition_;
    std::string target_;
    Arith value_;
    std::string text_;
};

VarSet write_set(const Operation& op);
VarSet read_set(const Operation& op);

struct Edge {
    Location src;
    Operation op;
    Location dst;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend std::strong_ordering operator<=>(const Edge& a, const Edge& b) {
        if (auto c = a.src <=> b.src; c != 0)
            return c;
        if (auto c = a.op <=> b.op; c != 0)
            return c;
        return a.dst <=> b.dst;
    }
};

std::string to_string(const Edge& e);

/// Control-flow automaton (L, l0, G, l_err). Edges are kept sorted and
/// deduplicated; the error location never has outgoing edges.
class Cfa {
public:
    /// Throws std::invalid_argument when an endpoint is not a location or the
    /// error location has an outgoing edge.
    Cfa(std::vector<Location> locations, Location initial, Location error, std::vector<Edge> edges);

    const std::vector<Location>& locations() const { return locations_; }
    Location initial() const { return initial_; }
    Location error() const { return error_; }
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_location(Location l) const;
    std::span<const Edge> out_edges(Location l) const;
    /// Index of `l`'s first outgoing edge within edges().
    std::size_t out_begin(Location l) const;
    std::optional<std::size_t> edge_index(const Edge& e) const;

    VarSet variables() const;

    friend bool operator==(const Cfa& a, const Cfa& b) {
        return a.locations_ == b.locations_ && a.initial_ == b.initial_ && a.error_ == b.error_ &&
               a.edges_ == b.edges_;
    }

private:
    std::size_t location_index(Location l) const;

    std::vector<Location> locations_;
    Location initial_;
    Location error_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> first_out_; // parallel to locations_, plus a sentinel
};

struct DeterminismViolation {
    Location location;
    Edge first;
    Edge second;
};

/// Empty when every pair of edges sharing a source is a complementary assume pair.
std::vector<DeterminismViolation> check_deterministic(const Cfa& cfa);

/// Throws std::invalid_argument listing the violations, if any.
void require_deterministic(const Cfa& cfa, std::string_view what);

nlohmann::json edge_to_json(const Edge& e);
Edge edge_from_json(const nlohmann::json& j);

nlohmann::json cfa_to_json(const Cfa& cfa);
Cfa cfa_from_json(const nlohmann::json& j);

/// Canonical byte form: pretty-printed JSON with sorted keys.
std::string serialize(const Cfa& cfa);
Cfa deserialize(std::string_view text);

std::string cfa_to_dot(const Cfa& cfa);

/// Pretty JSON, two-space indent, keys sorted, trailing newline.
std::string dump_json(const nlohmann::json& j);

} // namespace diffcond

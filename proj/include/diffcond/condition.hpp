// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "diffcond/cfa.hpp"
#include "diffcond/difference_graph.hpp"
#include "diffcond/oracle.hpp"

namespace diffcond {

using StateId = int;

struct Transition {
    StateId src;
    Edge label;
    StateId dst;

    friend bool operator==(const Transition&, const Transition&) = default;
    friend auto operator<=>(const Transition&, const Transition&) = default;
};

/// Condition automaton (Q, delta, q0, F) over modified-CFA edges.
struct Condition {
    std::set<StateId> states;
    StateId initial = 0;
    std::set<StateId> accepting;
    std::vector<Transition> transitions; // sorted

    bool operator==(const Condition&) const = default;
};

/// States are the graph's node ids.
Condition generate_condition(const DifferenceGraph& dg);

/// Never accepts: Q = {0}, F = {}, no transitions.
Condition trivial_condition();

/// Incremental run tracking over all runs (frontier of current states).
class ConditionRun {
public:
    explicit ConditionRun(const Condition& a);
    /// Feeds one edge; returns true once some run has reached F.
    bool step(const Edge& e);
    bool accepted() const { return accepted_; }
    bool dead() const { return frontier_.empty(); }
    const std::set<StateId>& frontier() const { return frontier_; }

private:
    const Condition* a_;
    std::set<StateId> frontier_;
    bool accepted_ = false;
};

bool covers(const Condition& a, const std::vector<Edge>& path_edges);
bool covers(const Condition& a, const Cfa& program, const ExecPath& path);

std::vector<std::string> validate_condition(const Condition& a);
/// Labels of `a` that are not edges of `program`.
std::vector<std::string> check_vocabulary(const Condition& a, const Cfa& program);

nlohmann::json condition_to_json(const Condition& a);
Condition condition_from_json(const nlohmann::json& j);
std::string condition_to_dot(const Condition& a);

} // namespace diffcond

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "diffcond/cfa.hpp"

namespace diffcond {

using NodeId = int;

struct GraphNode {
    enum class Kind { aligned, bad };

    Kind kind = Kind::aligned;
    std::optional<Location> orig; // set iff aligned
    Location mod = 0;
    VarSet modified_vars; // change-affected variables; empty for bad nodes

    bool operator==(const GraphNode&) const = default;
};

struct GraphEdge {
    NodeId src;
    Edge label; // an edge of the modified CFA
    NodeId dst;

    bool operator==(const GraphEdge&) const = default;
};

/// Difference graph (N, E, n0, Delta). Node ids are indices into `nodes`.
/// Delta is exactly the set of bad nodes.
struct DifferenceGraph {
    std::vector<GraphNode> nodes;
    NodeId root = 0;
    std::set<NodeId> delta;
    std::vector<GraphEdge> edges;

    std::vector<const GraphEdge*> out_edges(NodeId n) const;
};

/// Structural invariants: root and Delta are nodes, Delta is the bad nodes,
/// labels are modified-CFA edges consistent with their endpoints, nothing
/// leaves Delta, and no node has two same-labeled edges to distinct targets.
std::vector<std::string> check_graph(const DifferenceGraph& dg, const Cfa& modified);

bool is_label_deterministic(const DifferenceGraph& dg);

/// Nodes from which some Delta node is reachable (Delta included).
std::vector<bool> reaches_delta(const DifferenceGraph& dg);

/// Renumbers nodes: breadth-first from the root following edges in label
/// order, then any leftover nodes by (kind, orig, mod).
DifferenceGraph canonicalize(const DifferenceGraph& dg);

nlohmann::json graph_to_json(const DifferenceGraph& dg);
DifferenceGraph graph_from_json(const nlohmann::json& j);
std::string graph_to_dot(const DifferenceGraph& dg);

std::string node_label(const DifferenceGraph& dg, NodeId n);

} // namespace diffcond

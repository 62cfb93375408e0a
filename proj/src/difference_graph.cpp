// SPDX-License-Identifier: Apache-2.0
#include "diffcond/difference_graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <tuple>

namespace diffcond {

std::vector<const GraphEdge*> DifferenceGraph::out_edges(NodeId n) const {
    std::vector<const GraphEdge*> out;
    for (const auto& e : edges)
        if (e.src == n)
            out.push_back(&e);
    return out;
}

std::string node_label(const DifferenceGraph& dg, NodeId n) {
    const auto& node = dg.nodes.at(static_cast<std::size_t>(n));
    if (node.kind == GraphNode::Kind::bad)
        return "bad(" + std::to_string(node.mod) + ")";
    return "(" + std::to_string(*node.orig) + ", " + std::to_string(node.mod) + ")";
}

std::vector<std::string> check_graph(const DifferenceGraph& dg, const Cfa& modified) {
    std::vector<std::string> out;
    const auto n = static_cast<NodeId>(dg.nodes.size());
    auto valid = [&](NodeId id) { return id >= 0 && id < n; };
    if (!valid(dg.root))
        out.push_back("root " + std::to_string(dg.root) + " is not a node");
    for (NodeId d : dg.delta)
        if (!valid(d))
            out.push_back("delta member " + std::to_string(d) + " is not a node");
    for (NodeId id = 0; id < n; ++id) {
        const auto& node = dg.nodes[static_cast<std::size_t>(id)];
        const bool bad = node.kind == GraphNode::Kind::bad;
        if (bad != dg.delta.contains(id))
            out.push_back("node " + std::to_string(id) + (bad ? " is bad but not in delta" : " is in delta but aligned"));
        if (bad && node.orig)
            out.push_back("bad node " + std::to_string(id) + " carries an original location");
        if (!bad && !node.orig)
            out.push_back("aligned node " + std::to_string(id) + " lacks an original location");
    }
    std::map<std::pair<NodeId, std::string>, NodeId> targets;
    for (const auto& e : dg.edges) {
        const std::string where = "edge " + std::to_string(e.src) + " -" + e.label.op.text() + "-> " +
                                  std::to_string(e.dst);
        if (!valid(e.src) || !valid(e.dst)) {
            out.push_back(where + " has a dangling endpoint");
            continue;
        }
        if (!modified.edge_index(e.label))
            out.push_back(where + " is labeled with " + to_string(e.label) + ", not a modified-CFA edge");
        if (dg.delta.contains(e.src))
            out.push_back(where + " leaves a delta node");
        if (dg.nodes[static_cast<std::size_t>(e.src)].mod != e.label.src ||
            dg.nodes[static_cast<std::size_t>(e.dst)].mod != e.label.dst)
            out.push_back(where + " does not follow its label " + to_string(e.label));
        auto key = std::make_pair(e.src, to_string(e.label));
        auto [it, inserted] = targets.emplace(key, e.dst);
        if (!inserted && it->second != e.dst)
            out.push_back(where + " duplicates a label with target " + std::to_string(it->second));
    }
    return out;
}

bool is_label_deterministic(const DifferenceGraph& dg) {
    std::map<std::pair<NodeId, std::string>, NodeId> targets;
    for (const auto& e : dg.edges) {
        auto [it, inserted] = targets.emplace(std::make_pair(e.src, to_string(e.label)), e.dst);
        if (!inserted && it->second != e.dst)
            return false;
    }
    return true;
}

std::vector<bool> reaches_delta(const DifferenceGraph& dg) {
    std::vector<bool> reach(dg.nodes.size(), false);
    std::vector<std::vector<NodeId>> preds(dg.nodes.size());
    for (const auto& e : dg.edges)
        preds[static_cast<std::size_t>(e.dst)].push_back(e.src);
    std::deque<NodeId> work(dg.delta.begin(), dg.delta.end());
    for (NodeId d : dg.delta)
        reach[static_cast<std::size_t>(d)] = true;
    while (!work.empty()) {
        NodeId n = work.front();
        work.pop_front();
        for (NodeId p : preds[static_cast<std::size_t>(n)]) {
            if (!reach[static_cast<std::size_t>(p)]) {
                reach[static_cast<std::size_t>(p)] = true;
                work.push_back(p);
            }
        }
    }
    return reach;
}

DifferenceGraph canonicalize(const DifferenceGraph& dg) {
    auto sorted_edges = dg.edges;
    std::sort(sorted_edges.begin(), sorted_edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
        return std::tie(a.src, a.label) < std::tie(b.src, b.label);
    });
    std::vector<std::vector<const GraphEdge*>> out(dg.nodes.size());
    for (const auto& e : sorted_edges)
        out[static_cast<std::size_t>(e.src)].push_back(&e);

    std::vector<NodeId> order;
    std::vector<NodeId> new_id(dg.nodes.size(), -1);
    auto assign = [&](NodeId old) {
        if (new_id[static_cast<std::size_t>(old)] >= 0)
            return false;
        new_id[static_cast<std::size_t>(old)] = static_cast<NodeId>(order.size());
        order.push_back(old);
        return true;
    };
    if (!dg.nodes.empty()) {
        std::deque<NodeId> work{dg.root};
        assign(dg.root);
        while (!work.empty()) {
            NodeId n = work.front();
            work.pop_front();
            for (const auto* e : out[static_cast<std::size_t>(n)])
                if (assign(e->dst))
                    work.push_back(e->dst);
        }
    }
    std::vector<NodeId> rest;
    for (NodeId id = 0; id < static_cast<NodeId>(dg.nodes.size()); ++id)
        if (new_id[static_cast<std::size_t>(id)] < 0)
            rest.push_back(id);
    std::sort(rest.begin(), rest.end(), [&](NodeId a, NodeId b) {
        const auto& x = dg.nodes[static_cast<std::size_t>(a)];
        const auto& y = dg.nodes[static_cast<std::size_t>(b)];
        return std::tie(x.kind, x.orig, x.mod) < std::tie(y.kind, y.orig, y.mod);
    });
    for (NodeId id : rest)
        assign(id);

    DifferenceGraph c;
    for (NodeId old : order)
        c.nodes.push_back(dg.nodes[static_cast<std::size_t>(old)]);
    c.root = dg.nodes.empty() ? 0 : new_id[static_cast<std::size_t>(dg.root)];
    for (NodeId d : dg.delta)
        c.delta.insert(new_id[static_cast<std::size_t>(d)]);
    for (const auto& e : dg.edges)
        c.edges.push_back(GraphEdge{new_id[static_cast<std::size_t>(e.src)], e.label,
                                    new_id[static_cast<std::size_t>(e.dst)]});
    std::sort(c.edges.begin(), c.edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
        return std::tie(a.src, a.label, a.dst) < std::tie(b.src, b.label, b.dst);
    });
    return c;
}

nlohmann::json graph_to_json(const DifferenceGraph& dg) {
    nlohmann::json nodes = nlohmann::json::array();
    for (NodeId id = 0; id < static_cast<NodeId>(dg.nodes.size()); ++id) {
        const auto& n = dg.nodes[static_cast<std::size_t>(id)];
        nodes.push_back({{"id", id},
                         {"kind", n.kind == GraphNode::Kind::bad ? "bad" : "aligned"},
                         {"orig", n.orig ? nlohmann::json(*n.orig) : nlohmann::json(nullptr)},
                         {"mod", n.mod},
                         {"modified_vars", n.modified_vars}});
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : dg.edges)
        edges.push_back({{"src", e.src}, {"edge", edge_to_json(e.label)}, {"dst", e.dst}});
    return {{"nodes", nodes}, {"root", dg.root}, {"delta", dg.delta}, {"edges", edges}};
}

DifferenceGraph graph_from_json(const nlohmann::json& j) {
    DifferenceGraph dg;
    try {
        std::map<NodeId, GraphNode> by_id;
        for (const auto& n : j.at("nodes")) {
            GraphNode node;
            const auto kind = n.at("kind").get<std::string>();
            if (kind != "bad" && kind != "aligned")
                throw FormatError("unknown node kind '" + kind + "'");
            node.kind = kind == "bad" ? GraphNode::Kind::bad : GraphNode::Kind::aligned;
            if (!n.at("orig").is_null())
                node.orig = n.at("orig").get<Location>();
            node.mod = n.at("mod").get<Location>();
            node.modified_vars = n.at("modified_vars").get<VarSet>();
            by_id[n.at("id").get<NodeId>()] = node;
        }
        NodeId expected = 0;
        for (auto& [id, node] : by_id) {
            if (id != expected++)
                throw FormatError("node ids must be 0..n-1");
            dg.nodes.push_back(std::move(node));
        }
        dg.root = j.at("root").get<NodeId>();
        dg.delta = j.at("delta").get<std::set<NodeId>>();
        for (const auto& e : j.at("edges"))
            dg.edges.push_back(GraphEdge{e.at("src").get<NodeId>(), edge_from_json(e.at("edge")), e.at("dst").get<NodeId>()});
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed difference graph: ") + e.what());
    }
    const auto n = static_cast<NodeId>(dg.nodes.size());
    auto dangling = [&](NodeId id) { return id < 0 || id >= n; };
    if (dangling(dg.root))
        throw FormatError("difference graph root is not a node");
    for (const auto& e : dg.edges)
        if (dangling(e.src) || dangling(e.dst))
            throw FormatError("difference graph edge references an unknown node");
    for (NodeId d : dg.delta)
        if (dangling(d))
            throw FormatError("difference graph delta references an unknown node");
    return dg;
}

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

std::string join_vars(const VarSet& vars) {
    std::string out = "{";
    for (const auto& v : vars) {
        if (out.size() > 1)
            out += ",";
        out += v;
    }
    return out + "}";
}

} // namespace

std::string graph_to_dot(const DifferenceGraph& dg) {
    std::ostringstream os;
    os << "digraph difference_graph {\n";
    os << "  node [shape=box];\n";
    for (NodeId id = 0; id < static_cast<NodeId>(dg.nodes.size()); ++id) {
        const auto& n = dg.nodes[static_cast<std::size_t>(id)];
        os << "  n" << id << " [label=\"" << node_label(dg, id);
        if (n.kind == GraphNode::Kind::aligned)
            os << "\\n" << join_vars(n.modified_vars);
        os << "\"";
        if (n.kind == GraphNode::Kind::bad)
            os << ", color=red, peripheries=2";
        if (id == dg.root)
            os << ", style=bold";
        os << "];\n";
    }
    for (const auto& e : dg.edges)
        os << "  n" << e.src << " -> n" << e.dst << " [label=\"" << escape(e.label.op.text()) << "\"];\n";
    os << "}\n";
    return os.str();
}

} // namespace diffcond

// SPDX-License-Identifier: Apache-2.0
#include "diffcond/condition.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace diffcond {

Condition generate_condition(const DifferenceGraph& dg) {
    const auto n = static_cast<NodeId>(dg.nodes.size());
    if (dg.root < 0 || dg.root >= n)
        throw std::invalid_argument("difference graph root is not a node");
    std::vector<std::vector<NodeId>> preds(dg.nodes.size());
    for (const auto& e : dg.edges)
        preds[static_cast<std::size_t>(e.dst)].push_back(e.src);

    std::set<NodeId> q{dg.root};
    q.insert(dg.delta.begin(), dg.delta.end());
    std::deque<NodeId> work(q.begin(), q.end());
    while (!work.empty()) {
        NodeId s = work.front();
        work.pop_front();
        for (NodeId p : preds[static_cast<std::size_t>(s)])
            if (q.insert(p).second)
                work.push_back(p);
    }

    Condition a;
    a.initial = dg.root;
    a.states = q;
    for (const auto& e : dg.edges)
        if (q.contains(e.src) && !q.contains(e.dst))
            a.accepting.insert(e.dst);
    a.states.insert(a.accepting.begin(), a.accepting.end());
    for (const auto& e : dg.edges)
        if (q.contains(e.src))
            a.transitions.push_back(Transition{e.src, e.label, e.dst});
    std::sort(a.transitions.begin(), a.transitions.end());
    return a;
}

Condition trivial_condition() {
    Condition a;
    a.states = {0};
    return a;
}

ConditionRun::ConditionRun(const Condition& a) : a_(&a), frontier_{a.initial} {
    accepted_ = a.accepting.contains(a.initial);
}

bool ConditionRun::step(const Edge& e) {
    if (accepted_)
        return true;
    std::set<StateId> next;
    for (const auto& t : a_->transitions)
        if (t.label == e && frontier_.contains(t.src))
            next.insert(t.dst);
    frontier_ = std::move(next);
    for (StateId s : frontier_)
        if (a_->accepting.contains(s))
            accepted_ = true;
    return accepted_;
}

bool covers(const Condition& a, const std::vector<Edge>& path_edges) {
    ConditionRun run(a);
    if (run.accepted())
        return true;
    for (const auto& e : path_edges) {
        if (run.step(e))
            return true;
        if (run.dead())
            return false;
    }
    return false;
}

bool covers(const Condition& a, const Cfa& program, const ExecPath& path) {
    std::vector<Edge> edges;
    edges.reserve(path.steps.size());
    for (const auto& s : path.steps)
        edges.push_back(program.edges()[s.edge]);
    return covers(a, edges);
}

std::vector<std::string> validate_condition(const Condition& a) {
    std::vector<std::string> out;
    if (!a.states.contains(a.initial))
        out.push_back("initial state " + std::to_string(a.initial) + " is not in Q");
    for (StateId f : a.accepting)
        if (!a.states.contains(f))
            out.push_back("accepting state " + std::to_string(f) + " is not in Q");
    for (const auto& t : a.transitions) {
        const std::string where = "transition " + std::to_string(t.src) + " -" + t.label.op.text() + "-> " +
                                  std::to_string(t.dst);
        if (!a.states.contains(t.src) || !a.states.contains(t.dst))
            out.push_back(where + " references a state outside Q");
        if (a.accepting.contains(t.src))
            out.push_back(where + " leaves accepting state " + std::to_string(t.src));
    }
    return out;
}

std::vector<std::string> check_vocabulary(const Condition& a, const Cfa& program) {
    std::vector<std::string> out;
    for (const auto& t : a.transitions)
        if (!program.edge_index(t.label))
            out.push_back("condition label " + to_string(t.label) + " is not an edge of the program");
    return out;
}

nlohmann::json condition_to_json(const Condition& a) {
    nlohmann::json ts = nlohmann::json::array();
    for (const auto& t : a.transitions)
        ts.push_back({{"src", t.src}, {"edge", edge_to_json(t.label)}, {"dst", t.dst}, {"assumption", nullptr}});
    return {{"states", a.states}, {"initial", a.initial}, {"accepting", a.accepting}, {"transitions", ts}};
}

Condition condition_from_json(const nlohmann::json& j) {
    Condition a;
    try {
        a.states = j.at("states").get<std::set<StateId>>();
        a.initial = j.at("initial").get<StateId>();
        a.accepting = j.at("accepting").get<std::set<StateId>>();
        for (const auto& t : j.at("transitions")) {
            if (t.contains("assumption") && !t.at("assumption").is_null())
                throw FormatError("state assumptions are not supported");
            a.transitions.push_back(
                Transition{t.at("src").get<StateId>(), edge_from_json(t.at("edge")), t.at("dst").get<StateId>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed condition: ") + e.what());
    }
    std::sort(a.transitions.begin(), a.transitions.end());
    if (auto bad = validate_condition(a); !bad.empty())
        throw FormatError("invalid condition: " + bad.front());
    return a;
}

std::string condition_to_dot(const Condition& a) {
    std::ostringstream os;
    os << "digraph condition {\n";
    for (StateId s : a.states) {
        os << "  q" << s << " [shape=" << (a.accepting.contains(s) ? "doublecircle" : "circle");
        if (s == a.initial)
            os << ", style=bold";
        os << "];\n";
    }
    for (const auto& t : a.transitions) {
        std::string label = t.label.op.text();
        std::string esc;
        for (char c : label) {
            if (c == '"' || c == '\\')
                esc += '\\';
            esc += c;
        }
        os << "  q" << t.src << " -> q" << t.dst << " [label=\"" << t.label.src << ": " << esc << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace diffcond

// SPDX-License-Identifier: Apache-2.0
#include "diffcond/detect.hpp"

#include <deque>
#include <map>
#include <set>
#include <tuple>
#include <utility>

namespace diffcond {
namespace {

using Pair = std::pair<Location, Location>; // (original, modified)

struct Target {
    bool bad = false;
    Location orig = 0; // unused when bad
    Location mod = 0;

    auto operator<=>(const Target&) const = default;
};

struct RawEdge {
    Pair src;
    Edge label;
    Target dst;

    auto operator<=>(const RawEdge&) const = default;
};

// Division or modulo can block on a zero divisor, so the original cannot be
// assumed to pass such an assignment unless it runs on agreeing inputs.
bool may_block(const Operation& op) { return op.is_assign() && has_division(op.value()); }

// Worklist bookkeeping shared by both detectors.
class GraphBuilder {
public:
    GraphBuilder(const Cfa& original, const Cfa& modified, bool followup_error_search, DetectorStats* stats)
        : orig_(original), mod_(modified), followup_(followup_error_search), stats_(stats) {
        const Pair root{orig_.initial(), mod_.initial()};
        visited_.insert(root);
        modified_[root] = {};
        push(root);
    }

    std::optional<Pair> pop() {
        while (!queue_.empty()) {
            Pair p = queue_.front();
            queue_.pop_front();
            if (!queued_.erase(p))
                continue; // removed by absorption
            if (stats_)
                ++stats_->pops;
            return p;
        }
        return std::nullopt;
    }

    const VarSet& modified_at(const Pair& p) const { return modified_.at(p); }

    void process(const Pair& pred, const Edge& label, Target succ, const VarSet& v) {
        if (succ.bad) {
            bad_.insert(succ.mod);
            edges_.insert(RawEdge{pred, label, succ});
            std::erase_if(visited_, [&](const Pair& p) { return p.second == succ.mod; });
            std::erase_if(queued_, [&](const Pair& p) { return p.second == succ.mod; });
            return;
        }
        if (succ.mod == mod_.error() && succ.orig != orig_.error()) {
            if (followup_ && reaches_error_directly(succ.orig)) {
                succ.orig = orig_.error();
            } else {
                process(pred, label, Target{true, 0, mod_.error()}, {});
                return;
            }
        }
        const Pair s{succ.orig, succ.mod};
        const bool into_bad = bad_.contains(succ.mod);
        if (!into_bad && succ.orig != orig_.error()) {
            auto it = modified_.find(s);
            const bool unseen = !visited_.contains(s) || it == modified_.end();
            if (unseen || !is_subset(v, it->second))
                push(s);
        }
        if (!into_bad) {
            visited_.insert(s);
            auto& m = modified_[s];
            m = set_union(m, v);
        }
        edges_.insert(RawEdge{pred, label, succ});
    }

    DifferenceGraph finalize() const {
        DifferenceGraph dg;
        const Location m0 = mod_.initial();
        if (bad_.contains(m0) || (m0 == mod_.error() && orig_.initial() != orig_.error())) {
            dg.nodes.push_back(GraphNode{GraphNode::Kind::bad, std::nullopt, m0, {}});
            dg.root = 0;
            dg.delta = {0};
            return dg;
        }
        std::map<Pair, NodeId> aligned_id;
        std::map<Location, NodeId> bad_id;
        for (const auto& p : visited_) {
            aligned_id[p] = static_cast<NodeId>(dg.nodes.size());
            dg.nodes.push_back(GraphNode{GraphNode::Kind::aligned, p.first, p.second, modified_.at(p)});
        }
        for (Location l : bad_) {
            bad_id[l] = static_cast<NodeId>(dg.nodes.size());
            dg.delta.insert(bad_id[l]);
            dg.nodes.push_back(GraphNode{GraphNode::Kind::bad, std::nullopt, l, {}});
        }
        dg.root = aligned_id.at(Pair{orig_.initial(), m0});
        std::set<std::tuple<NodeId, Edge, NodeId>> edges;
        for (const auto& e : edges_) {
            auto src = aligned_id.find(e.src);
            if (src == aligned_id.end())
                continue;
            NodeId dst;
            if (e.dst.bad || bad_.contains(e.dst.mod)) {
                dst = bad_id.at(e.dst.mod);
            } else {
                auto it = aligned_id.find(Pair{e.dst.orig, e.dst.mod});
                if (it == aligned_id.end())
                    continue;
                dst = it->second;
            }
            edges.emplace(src->second, e.label, dst);
        }
        for (const auto& [s, l, d] : edges)
            dg.edges.push_back(GraphEdge{s, l, d});
        return canonicalize(dg);
    }

private:
    void push(const Pair& p) {
        if (queued_.insert(p).second)
            queue_.push_back(p);
    }

    // Follows assignment (and `true` assume) edges of the original from `l`.
    bool reaches_error_directly(Location l) const {
        std::set<Location> seen;
        while (l != orig_.error() && seen.insert(l).second) {
            auto out = orig_.out_edges(l);
            const Edge* next = nullptr;
            for (const auto& e : out)
                if ((e.op.is_assign() && !may_block(e.op)) || (e.op.is_assume() && e.op.condition()->op == BoolOp::tt))
                    next = &e;
            if (!next)
                return false;
            l = next->dst;
        }
        return l == orig_.error();
    }

    const Cfa& orig_;
    const Cfa& mod_;
    bool followup_;
    DetectorStats* stats_;

    std::deque<Pair> queue_;
    std::set<Pair> queued_;
    std::set<Pair> visited_;
    std::map<Pair, VarSet> modified_;
    std::set<Location> bad_;
    std::set<RawEdge> edges_;
};

const Edge* identical_edge(const Cfa& cfa, Location from, const Operation& op) {
    for (const auto& e : cfa.out_edges(from))
        if (e.op == op)
            return &e;
    return nullptr;
}

} // namespace

DifferenceGraph diff_syn(const Cfa& original, const Cfa& modified, DetectorStats* stats) {
    require_deterministic(original, "original program");
    require_deterministic(modified, "modified program");
    GraphBuilder b(original, modified, false, stats);
    while (auto node = b.pop()) {
        const auto [l, lp] = *node;
        for (const auto& g : modified.out_edges(lp)) {
            if (const Edge* e = identical_edge(original, l, g.op))
                b.process(*node, g, Target{false, e->dst, g.dst}, {});
            else
                b.process(*node, g, Target{true, 0, g.dst}, {});
        }
    }
    return b.finalize();
}

DifferenceGraph diff_dp(const Cfa& original, const Cfa& modified, const DetectorConfig& config, DetectorStats* stats) {
    require_deterministic(original, "original program");
    require_deterministic(modified, "modified program");
    GraphBuilder b(original, modified, config.followup_error_search, stats);
    while (auto node = b.pop()) {
        const auto [l1, lp1] = *node;
        const VarSet mod = b.modified_at(*node);
        for (const auto& g : modified.out_edges(lp1)) {
            const Operation& op = g.op;
            if (op.is_assign()) {
                const VarSet wr = write_set(op);
                const Edge* e = identical_edge(original, l1, op);
                if (e && may_block(op) && intersects(mod, read_set(op))) {
                    b.process(*node, g, Target{true, 0, g.dst}, {});
                    continue;
                }
                if (e) {
                    VarSet v = intersects(mod, read_set(op)) ? set_union(mod, wr) : set_difference(mod, wr);
                    b.process(*node, g, Target{false, e->dst, g.dst}, v);
                    continue;
                }
                if (config.align_same_write) {
                    const Edge* same = nullptr;
                    for (const auto& e : original.out_edges(l1))
                        if (e.op.is_assign() && !may_block(e.op) && write_set(e.op) == wr)
                            same = &e;
                    if (same) {
                        b.process(*node, g, Target{false, same->dst, g.dst}, set_union(mod, wr));
                        continue;
                    }
                }
                b.process(*node, g, Target{false, l1, g.dst}, set_union(mod, wr));
                continue;
            }

            // Postponed synchronization along original assignments.
            Location lp = l1;
            VarSet v = mod;
            std::set<Location> seen{lp};
            bool cycle = false;
            while (lp != original.error()) {
                const Edge* a = nullptr;
                for (const auto& e : original.out_edges(lp))
                    if (e.op.is_assign())
                        a = &e;
                if (!a || may_block(a->op))
                    break;
                v = set_union(v, write_set(a->op));
                lp = a->dst;
                if (!seen.insert(lp).second) {
                    cycle = true;
                    if (stats)
                        ++stats->resync_cycles;
                    break;
                }
            }
            if (!cycle && lp != original.error()) {
                if (auto m = assume_match(op, original.out_edges(lp), config.implication_matching)) {
                    if (intersects(v, set_union(read_set(m->op), read_set(op))))
                        b.process(*node, g, Target{true, 0, g.dst}, {});
                    else
                        b.process(*node, g, Target{false, m->dst, g.dst}, v);
                    continue;
                }
            }
            b.process(*node, g, Target{false, lp, g.dst}, v);
        }
    }
    return b.finalize();
}

} // namespace diffcond

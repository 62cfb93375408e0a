// SPDX-License-Identifier: Apache-2.0
#include "diffcond/reducer.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace diffcond {

ResidualCfa reduce(const Cfa& modified, const Condition& a) {
    if (auto bad = validate_condition(a); !bad.empty())
        throw std::invalid_argument("invalid condition: " + bad.front());
    if (auto bad = check_vocabulary(a, modified); !bad.empty())
        throw std::invalid_argument(bad.front());

    std::map<std::pair<StateId, Edge>, std::vector<StateId>> delta;
    for (const auto& t : a.transitions)
        delta[{t.src, t.label}].push_back(t.dst);
    if (std::any_of(delta.begin(), delta.end(), [](const auto& kv) { return kv.second.size() > 1; }))
        throw std::invalid_argument("reduce needs a label-deterministic condition");

    const ProductState error_state{modified.error(), std::nullopt, true};
    std::map<ProductState, Location> ids;
    std::vector<ProductState> mapping;
    std::deque<ProductState> work;
    auto intern = [&](const ProductState& p) {
        auto [it, inserted] = ids.emplace(p, static_cast<Location>(mapping.size()));
        if (inserted) {
            mapping.push_back(p);
            if (!p.collapsed_error)
                work.push_back(p);
        }
        return it->second;
    };
    auto lift = [&](Location l, std::optional<StateId> q) {
        return l == modified.error() ? error_state : ProductState{l, q, false};
    };

    std::vector<Edge> edges;
    const ProductState start = lift(modified.initial(), a.initial);
    intern(start);
    // A condition accepting the empty prefix covers everything: no edges at all.
    const bool all_covered = a.accepting.contains(a.initial);
    while (!all_covered && !work.empty()) {
        ProductState p = work.front();
        work.pop_front();
        const Location src = ids.at(p);
        for (const auto& g : modified.out_edges(p.location)) {
            std::optional<StateId> next;
            if (p.state) {
                auto it = delta.find({*p.state, g});
                if (it != delta.end()) {
                    if (a.accepting.contains(it->second.front()))
                        continue; // covered
                    next = it->second.front();
                }
            }
            edges.push_back(Edge{src, g.op, intern(lift(g.dst, next))});
        }
    }
    Location err;
    if (auto it = ids.find(error_state); it != ids.end()) {
        err = it->second;
    } else {
        err = static_cast<Location>(mapping.size());
        mapping.push_back(error_state);
    }
    std::vector<Location> locs;
    for (Location i = 0; i < static_cast<Location>(mapping.size()); ++i)
        locs.push_back(i);
    return ResidualCfa{Cfa(std::move(locs), ids.at(start), err, std::move(edges)), std::move(mapping)};
}

Location project(const ResidualCfa& r, Location residual_location) {
    return r.mapping.at(static_cast<std::size_t>(residual_location)).location;
}

nlohmann::json mapping_to_json(const ResidualCfa& r) {
    nlohmann::json out = nlohmann::json::array();
    for (Location i = 0; i < static_cast<Location>(r.mapping.size()); ++i) {
        const auto& p = r.mapping[static_cast<std::size_t>(i)];
        out.push_back({{"residual", i},
                       {"location", p.location},
                       {"state", p.collapsed_error || !p.state ? nlohmann::json(nullptr) : nlohmann::json(*p.state)},
                       {"kind", p.collapsed_error ? "error" : (p.state ? "tracked" : "detached")}});
    }
    return out;
}

} // namespace diffcond

// SPDX-License-Identifier: Apache-2.0
#include "diffcond/oracle.hpp"

#include <map>
#include <stdexcept>

namespace diffcond {

void validate_bounds(const OracleBounds& bounds) {
    if (bounds.input_bound < 0)
        throw std::invalid_argument("input bound must be >= 0");
    if (bounds.step_bound < 1)
        throw std::invalid_argument("step bound must be >= 1");
}

std::optional<DataState> strongest_post(const Operation& op, const DataState& state) {
    if (op.is_assume()) {
        auto holds = eval(op.condition(), state);
        if (!holds || !*holds)
            return std::nullopt;
        return state;
    }
    auto v = eval(op.value(), state);
    if (!v)
        return std::nullopt;
    DataState next = state;
    next.set(op.target(), *v);
    return next;
}

ExecPath execute(const Cfa& cfa, const DataState& initial, int step_bound) {
    ExecPath path;
    path.initial = initial;
    Location at = cfa.initial();
    const DataState* current = &initial;
    for (;;) {
        if (at == cfa.error())
            break;
        const auto out = cfa.out_edges(at);
        const std::size_t base = cfa.out_begin(at);
        std::optional<std::size_t> taken;
        std::optional<DataState> next;
        for (std::size_t i = 0; i < out.size(); ++i) {
            auto post = strongest_post(out[i].op, *current);
            if (!post)
                continue;
            if (taken)
                throw std::logic_error("two enabled edges at location " + std::to_string(at) +
                                       "; CFA is not deterministic");
            taken = base + i;
            next = std::move(post);
        }
        if (!taken) {
            path.blocked = !out.empty();
            break;
        }
        if (static_cast<int>(path.steps.size()) == step_bound) {
            path.truncated = true;
            break;
        }
        path.steps.push_back(PathStep{*taken, std::move(*next)});
        current = &path.steps.back().state;
        at = cfa.edges()[*taken].dst;
    }
    path.final_location = at;
    return path;
}

void for_each_input(const OracleBounds& bounds, const VarSet& universe,
                    const std::function<void(const DataState&)>& visit) {
    validate_bounds(bounds);
    DataState state;
    for (const auto& v : universe)
        state.set(v, 0);
    const std::vector<std::string> inputs(bounds.input_vars.begin(), bounds.input_vars.end());
    const Value b = bounds.input_bound;
    for (const auto& v : inputs)
        state.set(v, -b);
    for (;;) {
        visit(state);
        // Odometer increment, last variable fastest.
        std::size_t k = inputs.size();
        while (k > 0) {
            --k;
            Value v = state.get(inputs[k]);
            if (v < b) {
                state.set(inputs[k], v + 1);
                break;
            }
            state.set(inputs[k], -b);
            if (k == 0)
                return;
        }
        if (inputs.empty())
            return;
    }
}

std::vector<ExecPath> enumerate_paths(const Cfa& cfa, const OracleBounds& bounds) {
    std::vector<ExecPath> out;
    for_each_input(bounds, set_union(cfa.variables(), bounds.input_vars),
                   [&](const DataState& s) { out.push_back(execute(cfa, s, bounds.step_bound)); });
    return out;
}

std::vector<ExecPath> error_paths(const Cfa& cfa, const OracleBounds& bounds) {
    std::vector<ExecPath> out;
    for_each_input(bounds, set_union(cfa.variables(), bounds.input_vars), [&](const DataState& s) {
        auto p = execute(cfa, s, bounds.step_bound);
        if (p.final_location == cfa.error())
            out.push_back(std::move(p));
    });
    return out;
}

std::vector<ExecPath> regression_bug_paths(const Cfa& original, const Cfa& modified, const OracleBounds& bounds) {
    std::vector<ExecPath> out;
    const VarSet universe = set_union(set_union(original.variables(), modified.variables()), bounds.input_vars);
    for_each_input(bounds, universe, [&](const DataState& s) {
        auto p = execute(modified, s, bounds.step_bound);
        if (p.final_location != modified.error())
            return;
        // A truncated original run counts as not erroring.
        if (execute(original, s, bounds.step_bound).final_location == original.error())
            return;
        out.push_back(std::move(p));
    });
    return out;
}

VarSet read_before_written(const Cfa& cfa) {
    // Must-written sets per location; nullopt is "not reached yet" (top).
    std::map<Location, std::optional<VarSet>> written;
    for (Location l : cfa.locations())
        written[l] = std::nullopt;
    written[cfa.initial()] = VarSet{};
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& e : cfa.edges()) {
            const auto& from = written[e.src];
            if (!from)
                continue;
            VarSet out = set_union(*from, write_set(e.op));
            auto& to = written[e.dst];
            if (e.dst == cfa.initial()) {
                continue; // entry state is fixed at the empty set
            }
            if (!to) {
                to = std::move(out);
                changed = true;
            } else {
                VarSet meet;
                for (const auto& v : *to)
                    if (out.contains(v))
                        meet.insert(v);
                if (meet != *to) {
                    to = std::move(meet);
                    changed = true;
                }
            }
        }
    }
    VarSet inputs;
    for (const auto& e : cfa.edges()) {
        const auto& from = written[e.src];
        if (!from)
            continue;
        for (const auto& v : read_set(e.op))
            if (!from->contains(v))
                inputs.insert(v);
    }
    return inputs;
}

VarSet default_input_vars(const Cfa& original, const Cfa& modified) {
    return set_union(read_before_written(original), read_before_written(modified));
}

nlohmann::json state_to_json(const DataState& state) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [n, v] : state.bindings())
        j[n] = v;
    return j;
}

nlohmann::json path_to_json(const Cfa& cfa, const ExecPath& path) {
    nlohmann::json out = nlohmann::json::array();
    out.push_back({{"location", cfa.initial()}, {"edge", nullptr}, {"state", state_to_json(path.initial)}});
    for (const auto& step : path.steps) {
        const auto& e = cfa.edges()[step.edge];
        out.push_back({{"location", e.dst}, {"edge", edge_to_json(e)}, {"state", state_to_json(step.state)}});
    }
    return out;
}

} // namespace diffcond

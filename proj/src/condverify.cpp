// SPDX-License-Identifier: Apache-2.0
#include "diffcond/condverify.hpp"

#include <algorithm>
#include <stdexcept>

namespace diffcond {

int Verdict::exit_code() const {
    if (result == Result::alarm)
        return 1;
    return truncated ? 2 : 0;
}

std::vector<DataState> Verdict::alarm_inputs() const {
    std::vector<DataState> out;
    for (const auto& p : alarms)
        out.push_back(p.initial);
    return out;
}

Verdict conditional_verify(const Cfa& program, const Condition& a, const OracleBounds& bounds) {
    if (auto bad = validate_condition(a); !bad.empty())
        throw std::invalid_argument("invalid condition: " + bad.front());
    if (auto bad = check_vocabulary(a, program); !bad.empty())
        throw std::invalid_argument(bad.front());

    Verdict v;
    for_each_input(bounds, set_union(program.variables(), bounds.input_vars), [&](const DataState& input) {
        ConditionRun run(a);
        if (run.accepted()) {
            ++v.covered_paths;
            return;
        }
        ExecPath path;
        path.initial = input;
        Location at = program.initial();
        const DataState* current = &path.initial;
        for (;;) {
            if (at == program.error())
                break;
            const auto out = program.out_edges(at);
            std::optional<std::size_t> taken;
            std::optional<DataState> next;
            for (std::size_t i = 0; i < out.size(); ++i) {
                auto post = strongest_post(out[i].op, *current);
                if (!post)
                    continue;
                if (taken)
                    throw std::logic_error("program is not deterministic at location " + std::to_string(at));
                taken = program.out_begin(at) + i;
                next = std::move(post);
            }
            if (!taken)
                break;
            if (static_cast<int>(path.steps.size()) == bounds.step_bound) {
                path.truncated = true;
                break;
            }
            const Edge& e = program.edges()[*taken];
            if (run.step(e)) {
                ++v.covered_paths;
                return;
            }
            path.steps.push_back(PathStep{*taken, std::move(*next)});
            current = &path.steps.back().state;
            at = e.dst;
        }
        path.final_location = at;
        ++v.explored_paths;
        if (path.truncated)
            v.truncated = true;
        if (at == program.error())
            v.alarms.push_back(std::move(path));
    });
    std::stable_sort(v.alarms.begin(), v.alarms.end(),
                     [](const ExecPath& x, const ExecPath& y) { return x.initial < y.initial; });
    v.result = v.alarms.empty() ? Verdict::Result::safe : Verdict::Result::alarm;
    return v;
}

nlohmann::json verdict_to_json(const Cfa& program, const Verdict& v) {
    nlohmann::json alarms = nlohmann::json::array();
    for (const auto& p : v.alarms)
        alarms.push_back({{"input", state_to_json(p.initial)}, {"path", path_to_json(program, p)}});
    const char* result = v.result == Verdict::Result::alarm ? "alarm" : (v.truncated ? "inconclusive" : "safe");
    return {{"result", result},
            {"alarms", alarms},
            {"explored_paths", v.explored_paths},
            {"covered_paths", v.covered_paths},
            {"truncated", v.truncated}};
}

} // namespace diffcond

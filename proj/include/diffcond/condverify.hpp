// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "diffcond/cfa.hpp"
#include "diffcond/condition.hpp"
#include "diffcond/oracle.hpp"

namespace diffcond {

struct Verdict {
    enum class Result { safe, alarm };

    Result result = Result::safe;
    std::vector<ExecPath> alarms; // sorted by initial state
    std::size_t explored_paths = 0;
    std::size_t covered_paths = 0;
    bool truncated = false; // some uncovered path hit the step bound

    /// 0 safe, 1 alarm, 2 inconclusive (safe but truncated).
    int exit_code() const;
    std::vector<DataState> alarm_inputs() const;
};

/// Bounded explicit-state verification of the paths `a` does not cover.
/// Throws std::invalid_argument if `a` is invalid or names non-program edges.
Verdict conditional_verify(const Cfa& program, const Condition& a, const OracleBounds& bounds);

nlohmann::json verdict_to_json(const Cfa& program, const Verdict& v);

} // namespace diffcond

// SPDX-License-Identifier: Apache-2.0
#pragma once

// Concrete semantics and bounded brute-force path enumeration. This is the
// ground truth the detectors, conditions and verifier are tested against.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include <json.hpp>

#include "diffcond/cfa.hpp"
#include "diffcond/state.hpp"

namespace diffcond {

struct OracleBounds {
    int input_bound = 4; // inputs range over [-input_bound, input_bound]
    int step_bound = 40; // maximal transitions per path
    VarSet input_vars;
};

void validate_bounds(const OracleBounds& bounds);

/// nullopt means blocked: an unsatisfied assume, a division or modulo by
/// zero, or 64-bit overflow.
std::optional<DataState> strongest_post(const Operation& op, const DataState& state);

struct PathStep {
    std::size_t edge; // index into the executed CFA's edges()
    DataState state;  // data state after the step
};

struct ExecPath {
    DataState initial;
    std::vector<PathStep> steps;
    Location final_location = 0;
    bool truncated = false; // stopped at the step bound with an enabled edge left
    bool blocked = false;   // stopped before the exit with no enabled edge

    bool operator==(const ExecPath&) const = default;
};

/// Runs the unique maximal path of a deterministic CFA from `initial`.
ExecPath execute(const Cfa& cfa, const DataState& initial, int step_bound);

/// Calls `visit` for every initial state: input_vars range over
/// [-B, B] in lexicographic order, every other variable of `universe` is 0.
void for_each_input(const OracleBounds& bounds, const VarSet& universe,
                    const std::function<void(const DataState&)>& visit);

std::vector<ExecPath> enumerate_paths(const Cfa& cfa, const OracleBounds& bounds);
std::vector<ExecPath> error_paths(const Cfa& cfa, const OracleBounds& bounds);

/// Error paths of `modified` whose input does not drive `original` into its
/// error location within the same bounds.
std::vector<ExecPath> regression_bug_paths(const Cfa& original, const Cfa& modified, const OracleBounds& bounds);

/// Variables read before being written on some syntactic path of `cfa`.
VarSet read_before_written(const Cfa& cfa);
/// Union of read_before_written over both programs.
VarSet default_input_vars(const Cfa& original, const Cfa& modified);

nlohmann::json state_to_json(const DataState& state);
/// [{"location": l, "edge": {...} | null, "state": {...}}, ...]
nlohmann::json path_to_json(const Cfa& cfa, const ExecPath& path);

} // namespace diffcond

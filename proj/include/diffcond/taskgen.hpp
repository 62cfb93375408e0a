// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace diffcond {

struct TaskParams {
    int max_stmts = 8;     // statements in the original, nested ones included
    int max_vars = 4;      // drawn from x, y, z, w
    int literal_bound = 4; // literals in [-literal_bound, literal_bound]
    int max_nesting = 2;
    int max_mutations = 2;
    bool allow_division = false; // divisors are variables, so some inputs block
};

struct Task {
    std::uint64_t seed = 0;
    std::string original;
    std::string modified;
    std::vector<std::string> mutations; // applied mutation kinds, in order
};

/// Deterministic in (seed, params): a random program and a mutant of it.
Task generate_task(std::uint64_t seed, const TaskParams& params = {});

/// Applies one mutation of the given kind (operator_swap, constant_tweak,
/// insert, delete, assert_strengthen, assert_weaken) to `source`. Returns the
/// source unchanged when the program has no site for that kind.
std::string mutate(const std::string& source, const std::string& kind, std::uint64_t seed,
                   const TaskParams& params = {});

} // namespace diffcond

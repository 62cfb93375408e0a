// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "diffcond/cfa.hpp"
#include "diffcond/difference_graph.hpp"

namespace diffcond {

struct DetectorConfig {
    bool align_same_write = false;
    bool followup_error_search = true;
    bool implication_matching = true;
};

struct DetectorStats {
    std::size_t pops = 0;
    std::size_t resync_cycles = 0;
};

/// Syntactic baseline: lockstep exploration, and any edge without an
/// identical original counterpart leads to a bad node.
DifferenceGraph diff_syn(const Cfa& original, const Cfa& modified, DetectorStats* stats = nullptr);

/// Alignment-based detector tracking change-affected variables.
DifferenceGraph diff_dp(const Cfa& original, const Cfa& modified, const DetectorConfig& config = {},
                        DetectorStats* stats = nullptr);

/// Sound but incomplete: true only if every state satisfying `premise`
/// satisfies `conclusion`. Intended for division-free conclusions.
bool implies(const Bool& premise, const Bool& conclusion);

/// Sound but incomplete unsatisfiability check.
bool provably_unsat(const Bool& e);

/// Picks the original edge an assume `op_prime` aligns with: an identical
/// operation, else (with implication matching) the unique candidate op with
/// op_prime => op, provided op_prime is not provably unsatisfiable.
std::optional<Edge> assume_match(const Operation& op_prime, std::span<const Edge> candidates,
                                 bool implication_matching = true);

} // namespace diffcond

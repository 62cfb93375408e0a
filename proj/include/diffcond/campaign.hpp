// SPDX-License-Identifier: Apache-2.0
#pragma once

// Cross-checks of the detectors, condition generator, reducer and verifier
// against the brute-force oracle, over one program pair at a time.

#include <cstddef>
#include <string>
#include <vector>

#include "diffcond/cfa.hpp"
#include "diffcond/detect.hpp"
#include "diffcond/oracle.hpp"

namespace diffcond {

enum class Detector { syn, dp };

const char* detector_name(Detector d);
Detector parse_detector(const std::string& name);

DifferenceGraph run_detector(Detector d, const Cfa& original, const Cfa& modified, const DetectorConfig& config = {},
                             DetectorStats* stats = nullptr);

struct PairCheck {
    std::string name;
    std::size_t rb_paths = 0;
    std::size_t rb_covered[2] = {0, 0};          // by detector; must stay 0
    std::size_t graph_unsound[2] = {0, 0};       // rb-path trace prefixes that cannot reach Delta
    std::size_t graph_invalid[2] = {0, 0};       // check_graph findings
    std::size_t condition_invalid[2] = {0, 0};   // validate_condition findings
    std::size_t reducer_mismatch[2] = {0, 0};    // differing alarm input sets
    std::size_t missed_alarms[2] = {0, 0};       // rb inputs without a conditional alarm
    std::size_t nondeterministic_dp = 0;         // label-nondeterministic dp graph
    std::size_t pop_bound_exceeded = 0;
    std::size_t alignment_failures = 0;          // alignment witness not found
    std::size_t alignment_checked = 0;
    std::size_t blocked_runs = 0; // oracle runs of either program that got stuck
    std::size_t accepting[2] = {0, 0};
    std::size_t delta[2] = {0, 0};
    std::size_t explored[2] = {0, 0};
    std::size_t pops = 0;
    std::size_t pop_bound = 0;
    std::vector<std::string> failures;

    bool ok() const;
};

/// Runs every check on one pair. Syntax errors propagate.
PairCheck check_pair(const std::string& name, const std::string& original_src, const std::string& modified_src,
                     const OracleBounds& bounds, const DetectorConfig& config = {});

struct CampaignSummary {
    std::size_t pairs = 0;
    std::size_t rb_pairs = 0; // pairs with at least one rb path
    std::size_t rb_paths = 0;
    std::size_t rb_covered[2] = {0, 0};
    std::size_t graph_unsound[2] = {0, 0};
    std::size_t graph_invalid[2] = {0, 0};
    std::size_t condition_invalid[2] = {0, 0};
    std::size_t reducer_mismatch[2] = {0, 0};
    std::size_t missed_alarms[2] = {0, 0};
    std::size_t nondeterministic_dp = 0;
    std::size_t pop_bound_exceeded = 0;
    std::size_t alignment_failures = 0;
    std::size_t alignment_checked = 0;
    std::size_t blocked_runs = 0; // oracle runs of either program that got stuck
    std::size_t dp_accepts_syn_not = 0; // dp condition has |F| >= 1, syn has |F| = 0
    std::size_t explored[2] = {0, 0};
    std::vector<std::string> failures;

    void add(const PairCheck& c);
};

/// Pairs `<name>.orig.imp` / `<name>.mod.imp` found in `dir`, sorted by name.
struct CorpusPair {
    std::string name;
    std::string original;
    std::string modified;
};
std::vector<CorpusPair> load_corpus(const std::string& dir);

} // namespace diffcond

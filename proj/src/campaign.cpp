// SPDX-License-Identifier: Apache-2.0
#include "diffcond/campaign.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "diffcond/condition.hpp"
#include "diffcond/condverify.hpp"
#include "diffcond/frontend.hpp"
#include "diffcond/reducer.hpp"

namespace diffcond {

const char* detector_name(Detector d) { return d == Detector::syn ? "syn" : "dp"; }

Detector parse_detector(const std::string& name) {
    if (name == "syn")
        return Detector::syn;
    if (name == "dp")
        return Detector::dp;
    throw std::invalid_argument("unknown detector '" + name + "' (expected syn or dp)");
}

DifferenceGraph run_detector(Detector d, const Cfa& original, const Cfa& modified, const DetectorConfig& config,
                             DetectorStats* stats) {
    return d == Detector::syn ? diff_syn(original, modified, stats) : diff_dp(original, modified, config, stats);
}

bool PairCheck::ok() const {
    for (int d = 0; d < 2; ++d)
        if (rb_covered[d] || graph_unsound[d] || graph_invalid[d] || condition_invalid[d] || reducer_mismatch[d] ||
            missed_alarms[d])
            return false;
    return nondeterministic_dp == 0 && pop_bound_exceeded == 0 && alignment_failures == 0;
}

namespace {

const DataState& state_at(const ExecPath& p, std::size_t i) { return i == 0 ? p.initial : p.steps[i - 1].state; }

Location location_at(const Cfa& cfa, const ExecPath& p, std::size_t i) {
    return i == 0 ? cfa.initial() : cfa.edges()[p.steps[i - 1].edge].dst;
}

std::string describe(const ExecPath& p) { return p.initial.to_string(); }

struct Trace {
    std::vector<NodeId> nodes; // nodes[j] is reached after j steps
};

Trace trace(const DifferenceGraph& dg, const std::map<std::pair<NodeId, Edge>, NodeId>& next, const Cfa& program,
            const ExecPath& path) {
    Trace t;
    NodeId n = dg.root;
    t.nodes.push_back(n);
    for (const auto& step : path.steps) {
        auto it = next.find({n, program.edges()[step.edge]});
        if (it == next.end())
            break;
        n = it->second;
        t.nodes.push_back(n);
    }
    return t;
}

} // namespace

PairCheck check_pair(const std::string& name, const std::string& original_src, const std::string& modified_src,
                     const OracleBounds& bounds_in, const DetectorConfig& config) {
    PairCheck c;
    c.name = name;
    auto fail = [&](const std::string& msg) {
        if (c.failures.size() < 8)
            c.failures.push_back(name + ": " + msg);
    };

    const Cfa original = build_cfa(parse_program(original_src));
    const Cfa modified = build_cfa(parse_program(modified_src));
    OracleBounds bounds = bounds_in;
    if (bounds.input_vars.empty())
        bounds.input_vars = default_input_vars(original, modified);

    // Oracle: rb paths, plus a longer original run for alignment witnesses.
    std::vector<ExecPath> rb;
    std::vector<ExecPath> rb_original;
    const VarSet universe = set_union(set_union(original.variables(), modified.variables()), bounds.input_vars);
    for_each_input(bounds, universe, [&](const DataState& s) {
        auto p = execute(modified, s, bounds.step_bound);
        const auto o = execute(original, s, bounds.step_bound);
        c.blocked_runs += static_cast<std::size_t>(p.blocked) + static_cast<std::size_t>(o.blocked);
        if (p.final_location != modified.error() || o.final_location == original.error())
            return;
        rb.push_back(std::move(p));
        rb_original.push_back(execute(original, s, bounds.step_bound * 4 + 16));
    });
    c.rb_paths = rb.size();

    for (int d = 0; d < 2; ++d) {
        const Detector det = d == 0 ? Detector::syn : Detector::dp;
        const std::string tag = std::string("[") + detector_name(det) + "] ";
        DetectorStats stats;
        const DifferenceGraph dg = run_detector(det, original, modified, config, &stats);

        for (const auto& msg : check_graph(dg, modified)) {
            ++c.graph_invalid[d];
            fail(tag + "graph: " + msg);
        }
        c.delta[d] = dg.delta.size();
        if (det == Detector::dp) {
            if (!is_label_deterministic(dg)) {
                ++c.nondeterministic_dp;
                fail(tag + "graph is not label-deterministic");
            }
            const std::size_t vars = set_union(original.variables(), modified.variables()).size();
            c.pops = stats.pops;
            c.pop_bound = original.locations().size() * modified.locations().size() * (vars + 1);
            if (c.pops > c.pop_bound) {
                ++c.pop_bound_exceeded;
                fail(tag + "pops " + std::to_string(c.pops) + " exceed bound " + std::to_string(c.pop_bound));
            }
        }

        const Condition cond = generate_condition(dg);
        for (const auto& msg : validate_condition(cond)) {
            ++c.condition_invalid[d];
            fail(tag + "condition: " + msg);
        }
        c.accepting[d] = cond.accepting.size();

        // Coverage and graph soundness over the oracle's rb paths.
        const auto reach = reaches_delta(dg);
        std::map<std::pair<NodeId, Edge>, NodeId> next;
        for (const auto& e : dg.edges)
            next.emplace(std::make_pair(e.src, e.label), e.dst);
        for (std::size_t k = 0; k < rb.size(); ++k) {
            const auto& p = rb[k];
            if (covers(cond, modified, p)) {
                ++c.rb_covered[d];
                fail(tag + "rb path from " + describe(p) + " is covered");
            }
            const Trace t = trace(dg, next, modified, p);
            for (NodeId n : t.nodes) {
                if (!reach[static_cast<std::size_t>(n)]) {
                    ++c.graph_unsound[d];
                    fail(tag + "rb path from " + describe(p) + " traces to " + node_label(dg, n) +
                         ", which cannot reach delta");
                    break;
                }
            }
            if (det != Detector::dp)
                continue;
            // Alignment witness: a monotone match of trace nodes onto the original run.
            const auto& o = rb_original[k];
            std::size_t from = 0;
            for (std::size_t j = 0; j < t.nodes.size(); ++j) {
                const auto& node = dg.nodes[static_cast<std::size_t>(t.nodes[j])];
                if (node.kind == GraphNode::Kind::bad)
                    break;
                std::optional<std::size_t> hit;
                for (std::size_t i = from; i <= o.steps.size(); ++i) {
                    if (location_at(original, o, i) == *node.orig &&
                        states_agree_except(state_at(o, i), state_at(p, j), node.modified_vars)) {
                        hit = i;
                        break;
                    }
                }
                if (!hit) {
                    if (!o.truncated) {
                        ++c.alignment_failures;
                        fail(tag + "no alignment witness for " + node_label(dg, t.nodes[j]) + " on input " +
                             describe(p));
                    }
                    break;
                }
                ++c.alignment_checked;
                from = *hit;
            }
        }

        // Conditional verification, reducer equivalence, and alarms covering rb inputs.
        const Verdict v = conditional_verify(modified, cond, bounds);
        c.explored[d] = v.explored_paths;
        const ResidualCfa residual = reduce(modified, cond);
        OracleBounds rbounds = bounds;
        const Verdict vr = conditional_verify(residual.cfa, trivial_condition(), rbounds);
        auto a1 = v.alarm_inputs();
        auto a2 = vr.alarm_inputs();
        std::sort(a1.begin(), a1.end());
        std::sort(a2.begin(), a2.end());
        if (a1 != a2) {
            ++c.reducer_mismatch[d];
            fail(tag + "reducer changes alarms: " + std::to_string(a1.size()) + " vs " + std::to_string(a2.size()));
        }
        for (const auto& p : rb) {
            if (!std::binary_search(a1.begin(), a1.end(), p.initial)) {
                ++c.missed_alarms[d];
                fail(tag + "no conditional alarm for rb input " + describe(p));
            }
        }
    }
    return c;
}

void CampaignSummary::add(const PairCheck& c) {
    ++pairs;
    if (c.rb_paths > 0)
        ++rb_pairs;
    rb_paths += c.rb_paths;
    for (int d = 0; d < 2; ++d) {
        rb_covered[d] += c.rb_covered[d];
        graph_unsound[d] += c.graph_unsound[d];
        graph_invalid[d] += c.graph_invalid[d];
        condition_invalid[d] += c.condition_invalid[d];
        reducer_mismatch[d] += c.reducer_mismatch[d];
        missed_alarms[d] += c.missed_alarms[d];
        explored[d] += c.explored[d];
    }
    nondeterministic_dp += c.nondeterministic_dp;
    pop_bound_exceeded += c.pop_bound_exceeded;
    alignment_failures += c.alignment_failures;
    alignment_checked += c.alignment_checked;
    blocked_runs += c.blocked_runs;
    if (c.accepting[1] >= 1 && c.accepting[0] == 0)
        ++dp_accepts_syn_not;
    for (const auto& f : c.failures)
        if (failures.size() < 50)
            failures.push_back(f);
}

std::vector<CorpusPair> load_corpus(const std::string& dir) {
    namespace fs = std::filesystem;
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p);
        if (!in)
            throw std::runtime_error("cannot read " + p.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    std::vector<CorpusPair> out;
    const std::string suffix = ".orig.imp";
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string file = entry.path().filename().string();
        if (file.size() <= suffix.size() || file.compare(file.size() - suffix.size(), suffix.size(), suffix) != 0)
            continue;
        const std::string stem = file.substr(0, file.size() - suffix.size());
        const fs::path mod = entry.path().parent_path() / (stem + ".mod.imp");
        if (!fs::exists(mod))
            throw std::runtime_error("corpus pair " + stem + " lacks " + mod.filename().string());
        out.push_back(CorpusPair{stem, slurp(entry.path()), slurp(mod)});
    }
    std::sort(out.begin(), out.end(), [](const CorpusPair& a, const CorpusPair& b) { return a.name < b.name; });
    return out;
}

} // namespace diffcond

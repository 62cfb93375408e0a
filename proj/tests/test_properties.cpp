// SPDX-License-Identifier: Apache-2.0
// Randomized invariants over generated programs.
#include <gtest/gtest.h>

#include <random>

#include "diffcond/campaign.hpp"
#include "diffcond/condition.hpp"
#include "diffcond/condverify.hpp"
#include "diffcond/frontend.hpp"
#include "diffcond/reducer.hpp"
#include "diffcond/taskgen.hpp"
#include "fixtures.hpp"

using namespace diffcond;

namespace {

Cfa original_of(std::uint64_t seed) { return build_cfa(parse_program(generate_task(seed).original)); }
Cfa modified_of(std::uint64_t seed) { return build_cfa(parse_program(generate_task(seed).modified)); }

std::vector<Bool> conditions_of(const Cfa& c) {
    std::vector<Bool> out;
    for (const auto& e : c.edges())
        if (e.op.is_assume())
            out.push_back(e.op.condition());
    return out;
}

DataState random_state(std::mt19937_64& rng, const VarSet& vars) {
    DataState s;
    for (const auto& v : vars)
        s.set(v, static_cast<Value>(rng() % 11) - 5);
    return s;
}

} // namespace

TEST(Properties, GeneratedProgramsCompileToDeterministicCfas) {
    for (std::uint64_t s = 0; s < 300; ++s) {
        const Cfa c = modified_of(s);
        EXPECT_TRUE(check_deterministic(c).empty()) << "seed " << s;
        EXPECT_TRUE(c.out_edges(c.error()).empty());
    }
}

TEST(Properties, PrettyPrintRoundTrip) {
    for (std::uint64_t s = 0; s < 300; ++s) {
        const Ast a = parse_program(generate_task(s).modified);
        EXPECT_EQ(parse_program(pretty_print(a)), a) << "seed " << s;
    }
}

TEST(Properties, CfaSerializationRoundTrip) {
    for (std::uint64_t s = 0; s < 100; ++s) {
        const Cfa c = original_of(s);
        EXPECT_EQ(deserialize(serialize(c)), c) << "seed " << s;
    }
}

TEST(Properties, NegationNormalizationIsAnInvolution) {
    for (std::uint64_t s = 0; s < 200; ++s) {
        for (const Bool& b : conditions_of(modified_of(s))) {
            EXPECT_TRUE(equal(normalize(make_not(normalize(make_not(b)))), normalize(b))) << to_string(b);
            EXPECT_TRUE(equal(negate(negate(b)), normalize(b))) << to_string(b);
        }
    }
}

TEST(Properties, NegationIsSemanticComplement) {
    std::mt19937_64 rng(7);
    for (std::uint64_t s = 0; s < 100; ++s) {
        const Cfa c = modified_of(s);
        for (const Bool& b : conditions_of(c)) {
            const DataState st = random_state(rng, c.variables());
            auto v = eval(b, st);
            auto nv = eval(negate(b), st);
            ASSERT_TRUE(v && nv);
            EXPECT_NE(*v, *nv) << to_string(b);
        }
    }
}

TEST(Properties, ReadWriteSetsAreSound) {
    std::mt19937_64 rng(11);
    for (std::uint64_t s = 0; s < 150; ++s) {
        const Cfa c = modified_of(s);
        const VarSet vars = set_union(c.variables(), {"x", "y", "z", "w"});
        for (const auto& e : c.edges()) {
            const VarSet rd = read_set(e.op);
            const VarSet wr = write_set(e.op);
            DataState a = random_state(rng, vars);
            DataState b = random_state(rng, vars);
            for (const auto& v : rd)
                b.set(v, a.get(v));
            auto pa = strongest_post(e.op, a);
            auto pb = strongest_post(e.op, b);
            ASSERT_EQ(pa.has_value(), pb.has_value()) << e.op.text();
            if (!pa)
                continue;
            for (const auto& v : wr)
                EXPECT_EQ(pa->get(v), pb->get(v)) << e.op.text();
            // Variables outside the write set keep their values.
            for (const auto& v : vars)
                if (!wr.contains(v))
                    EXPECT_EQ(pa->get(v), a.get(v));
        }
    }
}

TEST(Properties, OracleIsMonotoneInTheInputBound) {
    for (std::uint64_t s = 0; s < 60; ++s) {
        const Cfa o = original_of(s);
        const Cfa m = modified_of(s);
        const VarSet in = default_input_vars(o, m);
        if (in.size() > 2)
            continue;
        auto small = regression_bug_paths(o, m, OracleBounds{2, 30, in});
        auto large = regression_bug_paths(o, m, OracleBounds{3, 30, in});
        std::vector<DataState> big;
        for (const auto& p : large)
            big.push_back(p.initial);
        std::sort(big.begin(), big.end());
        for (const auto& p : small)
            EXPECT_TRUE(std::binary_search(big.begin(), big.end(), p.initial)) << "seed " << s;
        EXPECT_LE(error_paths(m, OracleBounds{2, 30, in}).size(), error_paths(m, OracleBounds{3, 30, in}).size());
    }
}

TEST(Properties, GeneratedConditionsAreWellFormed) {
    for (std::uint64_t s = 0; s < 100; ++s) {
        const Cfa o = original_of(s);
        const Cfa m = modified_of(s);
        for (const auto& dg : {diff_syn(o, m), diff_dp(o, m)}) {
            EXPECT_TRUE(check_graph(dg, m).empty()) << "seed " << s;
            const Condition a = generate_condition(dg);
            EXPECT_TRUE(validate_condition(a).empty()) << "seed " << s;
            EXPECT_EQ(condition_from_json(condition_to_json(a)), a);
            // Delta nodes kept in Q are transition-less, non-accepting sinks.
            for (NodeId d : dg.delta) {
                if (!a.states.contains(d))
                    continue;
                EXPECT_FALSE(a.accepting.contains(d));
                for (const auto& t : a.transitions)
                    EXPECT_NE(t.src, d);
            }
        }
    }
}

TEST(Properties, ResidualRoundTripAndDeterminism) {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const Cfa o = original_of(s);
        const Cfa m = modified_of(s);
        const auto r = reduce(m, generate_condition(diff_dp(o, m)));
        EXPECT_EQ(deserialize(serialize(r.cfa)), r.cfa) << "seed " << s;
        EXPECT_TRUE(check_deterministic(r.cfa).empty()) << "seed " << s;
        for (const auto& p : r.mapping)
            EXPECT_TRUE(m.has_location(p.location));
    }
}

TEST(Properties, ReducedErrorPathsAreTheUncoveredOnes) {
    for (std::uint64_t s = 0; s < 60; ++s) {
        const Cfa o = original_of(s);
        const Cfa m = modified_of(s);
        const OracleBounds b{2, 30, default_input_vars(o, m)};
        for (const auto& dg : {diff_syn(o, m), diff_dp(o, m)}) {
            const Condition a = generate_condition(dg);
            const auto r = reduce(m, a);
            std::vector<DataState> want, got;
            for (const auto& p : error_paths(m, b))
                if (!covers(a, m, p))
                    want.push_back(p.initial);
            for (const auto& p : error_paths(r.cfa, b))
                got.push_back(p.initial);
            EXPECT_EQ(got, want) << "seed " << s;
        }
    }
}

TEST(Properties, DetectorsAreDeterministic) {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const Cfa o = original_of(s);
        const Cfa m = modified_of(s);
        EXPECT_EQ(dump_json(graph_to_json(diff_dp(o, m))), dump_json(graph_to_json(diff_dp(o, m))));
    }
}

TEST(Properties, OracleCampaignOnGeneratedPairs) {
    CampaignSummary sum;
    for (std::uint64_t s = 1000; s < 1150; ++s) {
        const Task t = generate_task(s);
        const auto c = check_pair("seed " + std::to_string(s), t.original, t.modified, OracleBounds{3, 30, {}});
        EXPECT_TRUE(c.ok()) << (c.failures.empty() ? "" : c.failures.front());
        sum.add(c);
    }
    EXPECT_GT(sum.rb_pairs, 0u);
    EXPECT_GT(sum.alignment_checked, 0u);
}

TEST(Properties, CampaignOnAlternateDetectorFlags) {
    for (const DetectorConfig cfg : {DetectorConfig{true, true, true}, DetectorConfig{false, false, false},
                                     DetectorConfig{true, false, true}}) {
        for (std::uint64_t s = 2000; s < 2080; ++s) {
            const Task t = generate_task(s);
            const auto c = check_pair("seed " + std::to_string(s), t.original, t.modified, OracleBounds{3, 30, {}}, cfg);
            EXPECT_TRUE(c.ok()) << (c.failures.empty() ? "" : c.failures.front());
        }
    }
}

TEST(Properties, CheckerCatchesAnUnsoundCondition) {
    // A condition accepting after the first step covers the relaxation's rb paths.
    const Cfa m = fixtures::cfa(fixtures::kRelaxModified);
    Condition all;
    all.states = {0, 1};
    all.accepting = {1};
    for (const auto& e : m.out_edges(m.initial()))
        all.transitions.push_back(Transition{0, e, 1});
    const auto rb =
        regression_bug_paths(fixtures::cfa(fixtures::kRelaxOriginal), m, OracleBounds{10, 40, {"x"}});
    ASSERT_EQ(rb.size(), 2u);
    for (const auto& p : rb)
        EXPECT_TRUE(covers(all, m, p));
}

TEST(Properties, CorpusPairsPass) {
    const auto corpus = load_corpus(DIFFCOND_CORPUS_DIR);
    ASSERT_FALSE(corpus.empty());
    for (const auto& p : corpus) {
        const auto c = check_pair(p.name, p.original, p.modified, OracleBounds{4, 40, {}});
        EXPECT_TRUE(c.ok()) << (c.failures.empty() ? "" : c.failures.front());
    }
}

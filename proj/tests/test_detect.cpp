// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "diffcond/detect.hpp"
#include "fixtures.hpp"

using namespace diffcond;
using fixtures::cfa;

namespace {

Operation assume(const char* text) { return Operation::parse(text); }

std::vector<Edge> edges_from(const Cfa& c, Location l) {
    auto s = c.out_edges(l);
    return {s.begin(), s.end()};
}

struct NodeView {
    std::optional<Location> orig;
    Location mod;
    VarSet vars;
    bool operator==(const NodeView&) const = default;
};

std::vector<NodeView> views(const DifferenceGraph& dg) {
    std::vector<NodeView> out;
    for (const auto& n : dg.nodes)
        out.push_back({n.orig, n.mod, n.modified_vars});
    return out;
}

} // namespace

TEST(AssumeMatch, ImplicationPicksWeakerOriginal) {
    const Cfa c = cfa("if (x <= 5) { y = 1; }");
    auto m = assume_match(assume("x <= 3"), edges_from(c, 0));
    ASSERT_TRUE(m);
    EXPECT_EQ(m->op.text(), "x <= 5");
}

TEST(AssumeMatch, IdenticalWins) {
    const Cfa c = cfa("if (x > 0) { y = 1; }");
    auto m = assume_match(assume("x > 0"), edges_from(c, 0));
    ASSERT_TRUE(m);
    EXPECT_EQ(m->op.text(), "x > 0");
}

TEST(AssumeMatch, NoImplicationNoMatch) {
    const Cfa c = cfa("if (x <= 5) { y = 1; }");
    EXPECT_FALSE(assume_match(assume("x > 3"), edges_from(c, 0)));
}

TEST(AssumeMatch, ImplicationCanBeDisabled) {
    const Cfa c = cfa("if (x <= 5) { y = 1; }");
    EXPECT_FALSE(assume_match(assume("x <= 3"), edges_from(c, 0), false));
}

TEST(AssumeMatch, UnsatisfiablePremiseNeverMatchesByImplication) {
    const Cfa c = cfa("if (x <= 5) { y = 1; }");
    EXPECT_FALSE(assume_match(assume("false"), edges_from(c, 0)));
    EXPECT_FALSE(assume_match(assume("1 > 2"), edges_from(c, 0)));
}

TEST(AssumeMatch, ConjunctSubsumption) {
    const Cfa c = cfa("if (x > 7) { y = 1; }");
    auto m = assume_match(assume("x > 7 && y < 2"), edges_from(c, 0));
    ASSERT_TRUE(m);
    EXPECT_EQ(m->op.text(), "x > 7");
}

TEST(Implies, SingleVariableLinear) {
    EXPECT_TRUE(implies(parse_bool("x > 7"), parse_bool("x > 2")));
    EXPECT_TRUE(implies(parse_bool("2 * x <= 6"), parse_bool("x < 4")));
    EXPECT_TRUE(implies(parse_bool("x == 3"), parse_bool("x != 4")));
    EXPECT_FALSE(implies(parse_bool("x != 4"), parse_bool("x == 3")));
    EXPECT_FALSE(implies(parse_bool("x > 2"), parse_bool("y > 2")));
    EXPECT_TRUE(implies(parse_bool("x < 0 || x > 9"), parse_bool("x != 5")));
    EXPECT_FALSE(implies(parse_bool("x * y > 0"), parse_bool("x > 0")));
}

TEST(DiffDp, RunningExampleGolden) {
    const Cfa o = cfa(fixtures::kRunningOriginal);
    const Cfa m = cfa(fixtures::kRunningModified);
    const auto dg = diff_dp(o, m);
    // Original: l0 -r=-x-> l1 -x>0-> l2 -r=-x-> l3 -r<=0-> l4, err = 5.
    const std::vector<NodeView> expected = {
        {0, 0, {}}, {0, 1, {"r"}}, {4, 4, {"r"}}, {2, 2, {"r"}}, {3, 3, {}}, {5, 5, {}},
    };
    EXPECT_EQ(views(dg), expected);
    EXPECT_TRUE(dg.delta.empty());
    ASSERT_EQ(dg.edges.size(), 6u);
    std::vector<std::tuple<NodeId, std::string, NodeId>> got;
    for (const auto& e : dg.edges)
        got.emplace_back(e.src, e.label.op.text(), e.dst);
    const std::vector<std::tuple<NodeId, std::string, NodeId>> want = {
        {0, "r = x;", 1}, {1, "x <= 0", 2}, {1, "x > 0", 3}, {3, "r = -x;", 4}, {4, "r <= 0", 2}, {4, "r > 0", 5},
    };
    EXPECT_EQ(got, want);
    EXPECT_TRUE(check_graph(dg, m).empty());
}

TEST(DiffDp, IdenticalProgramsAlignEverywhere) {
    const Cfa p = cfa(fixtures::kRunningOriginal);
    const auto dg = diff_dp(p, p);
    EXPECT_TRUE(dg.delta.empty());
    EXPECT_EQ(dg.nodes.size(), p.locations().size());
    EXPECT_EQ(dg.edges.size(), p.edges().size());
    for (const auto& n : dg.nodes) {
        EXPECT_EQ(n.orig, n.mod);
        EXPECT_TRUE(n.modified_vars.empty());
    }
}

TEST(DiffDp, AssertRelaxation) {
    const Cfa o = cfa(fixtures::kRelaxOriginal);
    const Cfa m = cfa(fixtures::kRelaxModified);
    const auto dg = diff_dp(o, m);
    ASSERT_EQ(dg.nodes.size(), 3u);
    EXPECT_EQ(views(dg)[0], (NodeView{0, 0, {}}));
    ASSERT_EQ(dg.edges.size(), 2u);
    EXPECT_EQ(dg.delta.size(), 1u);
    for (const auto& e : dg.edges) {
        const auto& target = dg.nodes[static_cast<std::size_t>(e.dst)];
        if (e.label.op.text() == "x <= 3") {
            EXPECT_EQ(target.kind, GraphNode::Kind::aligned);
            EXPECT_EQ(target.orig, 1);
            EXPECT_EQ(target.mod, 1);
            EXPECT_TRUE(target.modified_vars.empty());
        } else {
            EXPECT_EQ(e.label.op.text(), "x > 3");
            EXPECT_EQ(target.kind, GraphNode::Kind::bad);
            EXPECT_EQ(target.mod, m.error());
        }
    }
}

TEST(DiffDp, ReadOfChangedVariableIsBad) {
    // y now differs and the assertion reads it.
    const Cfa o = cfa("y = 1; assert(y > 0);");
    const Cfa m = cfa("y = 2; assert(y > 0);");
    const auto dg = diff_dp(o, m);
    EXPECT_FALSE(dg.delta.empty());
    EXPECT_TRUE(check_graph(dg, m).empty());
}

TEST(DiffDp, FollowupErrorSearch) {
    const Cfa o = cfa("if (y > 0) { z = 1; error; }");
    const Cfa m = cfa("assert(y <= 0);");
    const auto with = diff_dp(o, m);
    EXPECT_TRUE(with.delta.empty());
    DetectorConfig off;
    off.followup_error_search = false;
    const auto without = diff_dp(o, m, off);
    EXPECT_EQ(without.delta.size(), 1u);
}

TEST(DiffDp, AlignSameWriteKeepsLockstep) {
    const Cfa o = cfa("y = 1; if (x > 0) { z = 1; }");
    const Cfa m = cfa("y = 2; if (x > 0) { z = 1; }");
    DetectorConfig cfg;
    cfg.align_same_write = true;
    const auto dg = diff_dp(o, m, cfg);
    EXPECT_TRUE(dg.delta.empty());
    EXPECT_EQ(dg.nodes[1].orig, 1);
    EXPECT_EQ(dg.nodes[1].modified_vars, VarSet{"y"});
}

TEST(DiffDp, ChangedInitialAssertIsSingleBadNode) {
    const Cfa o = cfa("x = 1;");
    const Cfa m = cfa("error;");
    const auto dg = diff_dp(o, m);
    EXPECT_EQ(dg.nodes.size(), 2u);
    EXPECT_EQ(dg.delta.size(), 1u);
}

TEST(DiffDp, ResyncCycleFallsBack) {
    const Cfa o(std::vector<Location>{0, 1, 2}, 0, 2,
                std::vector<Edge>{Edge{0, Operation::parse("x = x + 1;"), 1}, Edge{1, Operation::parse("x = x - 1;"), 0}});
    const Cfa m = cfa("assert(x > 0);");
    DetectorStats stats;
    const auto dg = diff_dp(o, m, {}, &stats);
    EXPECT_GE(stats.resync_cycles, 1u);
    EXPECT_TRUE(check_graph(dg, m).empty());
}

TEST(DiffDp, RejectsNondeterministicInput) {
    const Cfa bad(std::vector<Location>{0, 1, 2}, 0, 2,
                  std::vector<Edge>{Edge{0, Operation::parse("x = 1;"), 1}, Edge{0, Operation::parse("x = 2;"), 1}});
    EXPECT_THROW(diff_dp(bad, bad), std::invalid_argument);
    EXPECT_THROW(diff_syn(bad, bad), std::invalid_argument);
}

TEST(DiffSyn, RunningExampleStopsAtFirstDifference) {
    const Cfa o = cfa(fixtures::kRunningOriginal);
    const Cfa m = cfa(fixtures::kRunningModified);
    const auto dg = diff_syn(o, m);
    ASSERT_EQ(dg.nodes.size(), 2u);
    ASSERT_EQ(dg.edges.size(), 1u);
    EXPECT_EQ(dg.edges[0].label.op.text(), "r = x;");
    EXPECT_EQ(dg.delta, std::set<NodeId>{1});
    EXPECT_EQ(dg.nodes[1].kind, GraphNode::Kind::bad);
    EXPECT_EQ(dg.nodes[1].mod, 1);
}

TEST(DiffSyn, IdenticalProgramsAreIsomorphic) {
    const Cfa p = cfa("while (x < 3) { x = x + 1; } assert(x >= 3);");
    const auto dg = diff_syn(p, p);
    EXPECT_TRUE(dg.delta.empty());
    EXPECT_EQ(dg.nodes.size(), p.locations().size());
    EXPECT_EQ(dg.edges.size(), p.edges().size());
}

TEST(DiffSyn, NewErrorEdge) {
    const Cfa o = cfa("");
    const Cfa m = cfa("error;");
    const auto dg = diff_syn(o, m);
    ASSERT_EQ(dg.edges.size(), 1u);
    EXPECT_EQ(dg.delta.size(), 1u);
    EXPECT_EQ(dg.nodes[static_cast<std::size_t>(dg.edges[0].dst)].mod, m.error());
}

TEST(DifferenceGraph, JsonRoundTrip) {
    const auto dg = diff_dp(cfa(fixtures::kRunningOriginal), cfa(fixtures::kRunningModified));
    EXPECT_EQ(graph_from_json(nlohmann::json::parse(dump_json(graph_to_json(dg)))).edges, dg.edges);
    EXPECT_EQ(graph_from_json(graph_to_json(dg)).nodes, dg.nodes);
}

TEST(DifferenceGraph, RejectsDanglingEdge) {
    auto j = graph_to_json(diff_syn(cfa(fixtures::kRunningOriginal), cfa(fixtures::kRunningModified)));
    j["edges"][0]["dst"] = 42;
    EXPECT_THROW(graph_from_json(j), FormatError);
}

TEST(DifferenceGraph, CheckFlagsEdgeLeavingDelta) {
    const Cfa m = cfa(fixtures::kRunningModified);
    auto dg = diff_syn(cfa(fixtures::kRunningOriginal), m);
    dg.edges.push_back(GraphEdge{1, m.edges()[1], 0});
    EXPECT_FALSE(check_graph(dg, m).empty());
}

TEST(DiffDp, ResyncStopsAtDivision) {
    const Cfa o = cfa("x = 0;\nif (z > 0) {\n    w = 1;\n}\ny = 1 / x;\nerror;\n");
    const Cfa m = cfa("x = 1;\nif (z > 0) {\n    w = 1;\n}\ny = 1 / x;\nerror;\n");
    const auto dg = diff_dp(o, m);
    EXPECT_FALSE(dg.delta.empty());
    EXPECT_TRUE(reaches_delta(dg)[static_cast<std::size_t>(dg.root)]);
}

TEST(DiffDp, FollowupStopsAtDivision) {
    const Cfa o = cfa("y = 1 / x;\nassert(x != 0);\n");
    const Cfa m = cfa("assert(x != 0);\n");
    const auto dg = diff_dp(o, m);
    EXPECT_FALSE(dg.delta.empty());
}

TEST(DiffDp, DivisionReadingModifiedVariableStaysDeterministic) {
    const Cfa o = cfa("if (x >= -4) {\n    assert(x != -3);\n    x = x - x;\n}\nx = x / x - x;\n");
    const Cfa m = cfa("if (x >= -4) {\n    assert(x != -3);\n    x = -3 - (x - 0);\n    x = x - x;\n}\nx = x / x - x;\n");
    const auto dg = diff_dp(o, m);
    EXPECT_TRUE(is_label_deterministic(dg));
    EXPECT_TRUE(check_graph(dg, m).empty());
    EXPECT_EQ(dg.delta.size(), 1u);
}

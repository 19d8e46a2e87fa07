#include <gtest/gtest.h>

#include <random>

#include "hic/exact_solver.hpp"
#include "hic/experiments.hpp"
#include "hic/tree_mpa.hpp"
#include "support/oracles.hpp"

using namespace hic;

namespace {

std::vector<NodeId> ids(std::initializer_list<NodeId> list) { return list; }

/// Nodes reachable from i without stepping onto j.
std::vector<NodeId> branch(const WeightedGraph& tree, NodeId i, NodeId j) {
    std::vector<char> seen(tree.node_count(), 0);
    std::vector<NodeId> out{i}, stack{i};
    seen[i] = seen[j] = 1;
    while (!stack.empty()) {
        auto x = stack.back();
        stack.pop_back();
        for (const auto& nb : tree.neighbors(x))
            if (!seen[nb.node]) {
                seen[nb.node] = 1;
                out.push_back(nb.node);
                stack.push_back(nb.node);
            }
    }
    return out;
}

} // namespace

TEST(InitLeafMessages, AnchoredAndRegularLeaves) {
    const auto state = init_leaf_messages(line_graph(3), ids({0}));
    const auto g = line_graph(3);
    const auto m01 = state.find(g, 0, 1);
    const auto m21 = state.find(g, 2, 1);
    ASSERT_TRUE(m01 && m21);
    EXPECT_EQ(m01->w, 0.0);
    EXPECT_EQ(m01->h, 0.0);
    EXPECT_EQ(m21->w, 1.0);
    EXPECT_EQ(m21->h, 1.0);
    EXPECT_FALSE(state.find(g, 1, 0).has_value());
    EXPECT_EQ(state.sent_count(), 2U);
}

TEST(InitLeafMessages, AllLeavesAnchored) {
    const auto g = star_graph(5);
    const auto state = init_leaf_messages(g, ids({1, 2, 3, 4}));
    for (NodeId leaf = 1; leaf < 5; ++leaf) {
        const auto m = state.find(g, leaf, 0);
        ASSERT_TRUE(m);
        EXPECT_EQ(m->w, 0.0);
        EXPECT_EQ(m->h, 0.0);
    }
}

TEST(InitLeafMessages, SingleEdge) {
    const auto g = line_graph(2);
    const auto state = init_leaf_messages(g, ids({0}));
    EXPECT_EQ(state.find(g, 0, 1)->w, 0.0);
    EXPECT_EQ(state.find(g, 1, 0)->w, 1.0);
    EXPECT_EQ(state.find(g, 1, 0)->h, 1.0);
}

TEST(MessageUpdate, HalfVoltageBehindAnAnchor) {
    const std::vector<DirectedMessage> inbound{{0, 1, 0.0, 0.0}};
    const auto m = message_update(line_graph(3), ids({0}), 1, 2, inbound);
    EXPECT_DOUBLE_EQ(m.w, 0.5);
    EXPECT_DOUBLE_EQ(m.h, 1.0);
}

TEST(MessageUpdate, NoAnchorUpstreamKeepsFullVoltage) {
    const std::vector<DirectedMessage> inbound{{1, 0, 1.0, 1.0}, {2, 0, 1.0, 3.0}, {3, 0, 1.0, 2.0}};
    const auto m = message_update(star_graph(5), ids({4}), 0, 4, inbound);
    EXPECT_EQ(m.w, 1.0);
    EXPECT_DOUBLE_EQ(m.h, 7.0);
}

TEST(MessageUpdate, AnchoredSenderIgnoresInbound) {
    const std::vector<DirectedMessage> inbound{{2, 1, 0.3, 4.0}};
    const auto m = message_update(line_graph(3), ids({1}), 1, 0, inbound);
    EXPECT_EQ(m.w, 0.0);
    EXPECT_EQ(m.h, 0.0);
}

TEST(MessageUpdate, ConductanceWeighting) {
    // 0 -(2)- 1 -(0.5)- 2 with anchor 0: w_{1->2} = 1 / (1 + R_12 (1 - 0) / R_01) = 1 / (1 + 2 / 0.5).
    const WeightedGraph g(3, {{0, 1, 2.0}, {1, 2, 0.5}});
    const std::vector<DirectedMessage> inbound{{0, 1, 0.0, 0.0}};
    EXPECT_DOUBLE_EQ(message_update(g, ids({0}), 1, 2, inbound).w, 0.2);
}

TEST(MessageUpdate, MissingInboundAndBadEndpoints) {
    const std::vector<DirectedMessage> none;
    try {
        message_update(line_graph(3), ids({0}), 1, 2, none);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::MissingInbound);
    }
    EXPECT_THROW(message_update(line_graph(3), ids({0}), 0, 2, none), Error);
}

TEST(RunTreeMpa, ThreeNodeLine) {
    const auto run = run_tree_mpa(line_graph(3), ids({0}));
    EXPECT_DOUBLE_EQ(*run.result.hic[1], 2.0);
    EXPECT_DOUBLE_EQ(*run.result.hic[2], 1.5);
    EXPECT_FALSE(run.result.hic[0].has_value());
    EXPECT_EQ(run.result.argmax_node, 1U);
    EXPECT_EQ(run.stats.messages_sent, 4U);
    EXPECT_LE(run.stats.rounds, 2U);
}

TEST(RunTreeMpa, UnitLineFromOneEnd) {
    for (std::size_t n = 1; n <= 50; ++n) {
        const auto run = run_tree_mpa(line_graph(n + 1), ids({0}));
        EXPECT_NEAR(*run.result.hic[n], (n + 1) / 2.0, 1e-12);
        const auto v = tree_voltage_profile(line_graph(n + 1), run.messages, n);
        for (NodeId i = 0; i <= n; ++i) EXPECT_NEAR(v[i], static_cast<double>(i) / n, 1e-12);
    }
}

TEST(RunTreeMpa, Preconditions) {
    EXPECT_THROW(run_tree_mpa(oracle::cycle(4), ids({0})), Error);
    EXPECT_THROW(run_tree_mpa(line_graph(3), ids({})), Error);
    try {
        run_tree_mpa(line_graph(2), ids({0, 1}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NoRegularNodes);
    }
}

TEST(RunTreeMpa, MatchesGreenFunctionOracleOnRandomTrees) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = 2 + trial % 60;
        const auto tree = oracle::random_tree(n, rng, 0.1, 10.0);
        const auto zero = oracle::random_subset(n, 1 + trial % std::min<std::size_t>(n - 1, 6), rng);
        const auto expected = oracle::green_hic(tree, zero);
        const auto run = run_tree_mpa(tree, zero);
        for (NodeId i = 0; i < n; ++i) {
            ASSERT_EQ(run.result.hic[i].has_value(), expected[i].has_value());
            if (expected[i]) {
                EXPECT_NEAR(*run.result.hic[i], *expected[i], 1e-9 * std::max(1.0, *expected[i]));
            }
        }
    }
}

TEST(RunTreeMpa, RoundsAndMessageCount) {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = 2 + trial % 80;
        const auto tree = oracle::random_tree(n, rng);
        const auto zero = oracle::random_subset(n, 1 + trial % std::min<std::size_t>(n - 1, 4), rng);
        const auto run = run_tree_mpa(tree, zero);
        EXPECT_LE(run.stats.rounds, diameter(tree));
        EXPECT_EQ(run.stats.messages_sent, 2 * n - 2);
        EXPECT_EQ(run.messages.sent_count(), 2 * n - 2);
        ASSERT_EQ(run.stats.per_node_ops.size(), n);
    }
}

TEST(RunTreeMpa, MessagesAreBranchVoltagesAndSums) {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 3 + trial % 20;
        const auto tree = oracle::random_tree(n, rng, 0.2, 5.0);
        const auto zero = oracle::random_subset(n, std::min<std::size_t>(n - 1, 1 + trial % 3), rng);
        const StubbornMask anchored(tree, zero);
        const auto run = run_tree_mpa(tree, zero);
        for (std::size_t a = 0; a < tree.arc_count(); ++a) {
            const NodeId i = tree.arc_source(a), j = tree.arc_target(a);
            const auto& m = run.messages.message(a);
            if (anchored[i]) {
                EXPECT_EQ(m.w, 0.0);
                EXPECT_EQ(m.h, 0.0);
                continue;
            }
            auto nodes = branch(tree, i, j);
            nodes.push_back(j);
            const auto sub = induced_subgraph(tree, nodes);
            std::vector<NodeId> local_zero;
            for (auto s : zero)
                if (auto l = sub.local(s); l && s != j) local_zero.push_back(*l);
            // Voltage at i with j held at 1.
            const auto toward_j = harmonic_extension(sub.graph, {local_zero, *sub.local(j)});
            EXPECT_NEAR(m.w, toward_j[*sub.local(i)], 1e-10);
            // Branch total with i held at 1.
            std::vector<NodeId> without_j(nodes.begin(), nodes.end() - 1);
            const auto inner = induced_subgraph(tree, without_j);
            std::vector<NodeId> inner_zero;
            for (auto s : zero)
                if (auto l = inner.local(s)) inner_zero.push_back(*l);
            double expected_h = 1.0;
            if (inner.graph.node_count() > inner_zero.size() + 1) expected_h = harmonic_extension(inner.graph, {inner_zero, *inner.local(i)}).sum();
            EXPECT_NEAR(m.h, expected_h, 1e-9 * std::max(1.0, expected_h));
        }
    }
}

TEST(TreeVoltageProfile, MatchesHarmonicExtension) {
    std::mt19937_64 rng(34);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 3 + trial % 25;
        const auto tree = oracle::random_tree(n, rng, 0.1, 10.0);
        const auto zero = oracle::random_subset(n, 1 + trial % 3, rng);
        const auto run = run_tree_mpa(tree, zero);
        const StubbornMask anchored(tree, zero);
        for (NodeId ell = 0; ell < n; ++ell) {
            if (anchored[ell]) continue;
            const auto v = tree_voltage_profile(tree, run.messages, ell);
            const auto exact = oracle::relaxed_voltage(tree, zero, ell);
            for (NodeId i = 0; i < n; ++i) EXPECT_NEAR(v[i], exact[i], 1e-10);
        }
    }
}

TEST(RunTreeMpa, SingleAnchorNeighbourWins) {
    std::mt19937_64 rng(35);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 3 + trial;
        const auto tree = oracle::random_tree(n, rng, 0.3, 3.0);
        const auto ends = oracle::leaves(tree);
        const NodeId s = ends[trial % ends.size()];
        const auto run = run_tree_mpa(tree, ids({s}));
        for (const auto& nb : tree.neighbors(s)) EXPECT_NEAR(*run.result.hic[nb.node], n - 1.0, 1e-10);
    }
}

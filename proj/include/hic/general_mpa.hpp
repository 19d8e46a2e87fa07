#pragma once

// Iterative message passing on arbitrary connected graphs.
//
// Every arc carries a message in every round. Round 1 transmits the initial
// messages, (1, 1) from regular senders and (0, 0) from zero-anchored ones;
// round t + 1 recomputes every message from the round-t messages with the same
// rule as the tree algorithm. After round t each regular node estimates its
// centrality from what it received in that round. On a tree this reproduces
// the exact algorithm; with cycles it computes the centrality on the
// non-backtracking unrolling (computation tree) of depth t.

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "hic/error.hpp"
#include "hic/graph.hpp"
#include "hic/result.hpp"
#include "hic/tree_mpa.hpp"

namespace hic {

struct StoppingRule {
    double tol = 1e-5;
    std::size_t max_iters = 10'000;

    void check() const {
        if (!(tol > 0.0)) throw Error(ErrorKind::InvalidConfig, "tolerance must be positive");
        if (max_iters < 1) throw Error(ErrorKind::InvalidConfig, "max_iters must be at least 1");
    }
};

struct IterativeState {
    std::size_t t = 0;                              // rounds completed
    std::vector<double> w;                          // per arc
    std::vector<double> h;                          // per arc
    std::vector<std::optional<double>> estimates;   // per node, absent on S0
};

namespace detail {

inline void refresh_estimates(const WeightedGraph& graph, const StubbornMask& stubborn, IterativeState& state) {
    state.estimates.assign(graph.node_count(), std::nullopt);
    for (NodeId i = 0; i < graph.node_count(); ++i) {
        if (stubborn[i]) continue;
        double acc = 1.0;
        for (const auto& nb : graph.neighbors(i)) {
            const auto in = graph.arc(nb.edge, nb.node);
            acc += state.w[in] * state.h[in];
        }
        state.estimates[i] = acc;
    }
}

inline IterativeState initial_state(const WeightedGraph& graph, const StubbornMask& stubborn) {
    IterativeState state;
    state.t = 1;
    state.w.resize(graph.arc_count());
    state.h.resize(graph.arc_count());
    for (std::size_t a = 0; a < graph.arc_count(); ++a) {
        const double v = stubborn[graph.arc_source(a)] ? 0.0 : 1.0;
        state.w[a] = v;
        state.h[a] = v;
    }
    refresh_estimates(graph, stubborn, state);
    return state;
}

/// Double-buffered round. Per node, inbound totals are formed once and the
/// recipient's own contribution is subtracted for each outgoing arc.
inline IterativeState step(const WeightedGraph& graph, const StubbornMask& stubborn, const IterativeState& state) {
    IterativeState next;
    next.t = state.t + 1;
    next.w.assign(graph.arc_count(), 0.0);
    next.h.assign(graph.arc_count(), 0.0);
    for (NodeId i = 0; i < graph.node_count(); ++i) {
        if (stubborn[i]) continue;  // (0, 0) already in place
        double weighted_h = 0.0;
        double leak = 0.0;
        for (const auto& nb : graph.neighbors(i)) {
            const auto in = graph.arc(nb.edge, nb.node);
            weighted_h += state.w[in] * state.h[in];
            leak += (1.0 - state.w[in]) * graph.edge(nb.edge).conductance;
        }
        for (const auto& nb : graph.neighbors(i)) {
            const auto in = graph.arc(nb.edge, nb.node);
            const auto out = graph.arc(nb.edge, i);
            const double c = graph.edge(nb.edge).conductance;
            const double own_leak = std::max(leak - (1.0 - state.w[in]) * c, 0.0);
            next.w[out] = 1.0 / (1.0 + own_leak / c);
            next.h[out] = weighted_h - state.w[in] * state.h[in] + 1.0;
        }
    }
    refresh_estimates(graph, stubborn, next);
    return next;
}

inline double mean_change(const std::vector<std::optional<double>>& a, const std::vector<std::optional<double>>& b) {
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i] || !b[i]) continue;
        total += std::abs(*a[i] - *b[i]);
        ++count;
    }
    return count == 0 ? 0.0 : total / static_cast<double>(count);
}

} // namespace detail

/// State after round 1: the initial messages and the estimates they give.
inline IterativeState initial_state(const WeightedGraph& graph, std::span<const NodeId> zero_set) {
    return detail::initial_state(graph, StubbornMask(graph, zero_set));
}

inline IterativeState mpa_step(const WeightedGraph& graph, std::span<const NodeId> zero_set,
                               const IterativeState& state) {
    if (state.w.size() != graph.arc_count() || state.h.size() != graph.arc_count())
        throw Error(ErrorKind::DimensionMismatch, "message state does not match the graph");
    return detail::step(graph, StubbornMask(graph, zero_set), state);
}

struct GeneralMpaRun {
    HicResult result;
    /// timeline[t - 1] holds the estimates after round t.
    std::vector<std::vector<std::optional<double>>> timeline;
    IterativeState final_state;
};

/// Runs rounds until the mean absolute change of the regular-node estimates
/// between consecutive rounds drops below rule.tol, or rule.max_iters rounds.
inline GeneralMpaRun run_general_mpa(const WeightedGraph& graph, std::span<const NodeId> zero_set,
                                     const StoppingRule& rule = {}) {
    rule.check();
    require_connected(graph);
    if (zero_set.empty()) throw Error(ErrorKind::EmptyStubbornSet, "at least one zero-anchored node is required");
    const StubbornMask stubborn(graph, zero_set);

    GeneralMpaRun run;
    auto state = detail::initial_state(graph, stubborn);
    run.timeline.push_back(state.estimates);
    StoppingReason reason = StoppingReason::MaxIters;
    if (stubborn.count() == graph.node_count()) reason = StoppingReason::Converged;
    while (reason == StoppingReason::MaxIters && state.t < rule.max_iters) {
        auto next = detail::step(graph, stubborn, state);
        const double change = detail::mean_change(next.estimates, state.estimates);
        state = std::move(next);
        run.timeline.push_back(state.estimates);
        if (change < rule.tol) reason = StoppingReason::Converged;
    }
    run.result.hic = state.estimates;
    run.result.rounds_or_solves = state.t;
    run.result.stopping_reason = reason;
    run.result.argmax_node = require_argmax(run.result.hic);
    run.final_state = std::move(state);
    return run;
}

/// CSV with columns t, node_id, estimate; zero-anchored nodes are omitted.
inline void write_timeline_csv(std::ostream& out, const std::vector<std::vector<std::optional<double>>>& timeline) {
    out << "t,node_id,estimate\n";
    char buf[40];
    for (std::size_t t = 0; t < timeline.size(); ++t) {
        for (NodeId i = 0; i < timeline[t].size(); ++i) {
            if (!timeline[t][i]) continue;
            std::snprintf(buf, sizeof buf, "%.12g", *timeline[t][i]);
            out << (t + 1) << ',' << i << ',' << buf << '\n';
        }
    }
}

// ---------------------------------------------------------------------------
// Computation trees

/// Depth-limited non-backtracking unrolling of a graph from a root. Node 0 is
/// the root; nodes are stored level by level.
struct ComputationTree {
    struct Node {
        NodeId original;
        std::size_t level;
        std::optional<std::size_t> parent;
        double conductance;  // of the edge to the parent; unused for the root
    };
    std::vector<Node> nodes;

    WeightedGraph to_graph() const {
        std::vector<Edge> edges;
        edges.reserve(nodes.size());
        for (std::size_t k = 1; k < nodes.size(); ++k) edges.push_back({*nodes[k].parent, k, nodes[k].conductance});
        return WeightedGraph(nodes.size(), std::move(edges));
    }

    std::size_t depth() const { return nodes.empty() ? 0 : nodes.back().level; }
};

/// Level t holds one copy per walk of length t from the root that never
/// returns along the edge it just used.
inline ComputationTree build_computation_tree(const WeightedGraph& graph, NodeId root, std::size_t depth) {
    require_node(graph, root);
    ComputationTree tree;
    // parallel to tree.nodes: the edge used to reach each copy
    std::vector<std::optional<std::size_t>> via;
    tree.nodes.push_back({root, 0, std::nullopt, 0.0});
    via.push_back(std::nullopt);
    std::size_t level_begin = 0;
    for (std::size_t level = 1; level <= depth; ++level) {
        const std::size_t level_end = tree.nodes.size();
        for (std::size_t k = level_begin; k < level_end; ++k) {
            const NodeId x = tree.nodes[k].original;
            for (const auto& nb : graph.neighbors(x)) {
                if (via[k] && *via[k] == nb.edge) continue;
                tree.nodes.push_back({nb.node, level, k, graph.edge(nb.edge).conductance});
                via.push_back(nb.edge);
            }
        }
        level_begin = level_end;
        if (level_begin == tree.nodes.size()) break;
    }
    return tree;
}

/// Root centrality on the depth-limited computation tree. Anchors are copied
/// from the originals; frontier copies are plain regular leaves and so inject
/// (1, 1). Only the inward pass toward the root is needed.
inline double hic_on_computation_tree(const WeightedGraph& graph, std::span<const NodeId> zero_set, NodeId root,
                                      std::size_t depth) {
    const StubbornMask stubborn(graph, zero_set);
    if (stubborn[root]) throw Error(ErrorKind::InvalidConfig, "root is zero-anchored; its centrality is undefined");
    const auto tree = build_computation_tree(graph, root, depth);
    const auto count = tree.nodes.size();

    // Nodes are in level order, so children always follow their parent.
    std::vector<detail::MessageAccumulator> inbox(count);
    for (std::size_t k = count; k-- > 1;) {
        const auto& node = tree.nodes[k];
        const auto value = stubborn[node.original] ? detail::MessageValue{0.0, 0.0} : inbox[k].emit(node.conductance);
        inbox[*node.parent].add(node.conductance, value.w, value.h);
    }
    return inbox[0].centrality();
}

} // namespace hic

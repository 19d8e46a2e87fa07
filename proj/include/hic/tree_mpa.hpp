#pragma once

// Exact two-phase message passing on trees.
//
// The message i -> j carries (w, h): w is the voltage at i when j is held at 1
// and the zero-anchored nodes behind i are held at 0 (the network restricted
// to i's side of the edge, plus j); h is the centrality of i within that side.
// Both follow from the messages i receives from its other neighbours:
//
//   h = sum_k w_k h_k + 1
//   w = 1 / (1 + sum_k (1 - w_k) C_ik / C_ij)
//
// and a zero-anchored sender always emits (0, 0). Effective resistances are
// never formed; a side without anchors simply yields w = 1.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "hic/error.hpp"
#include "hic/graph.hpp"
#include "hic/result.hpp"

namespace hic {

struct DirectedMessage {
    NodeId from = 0;
    NodeId to = 0;
    double w = 0.0;
    double h = 0.0;
};

namespace detail {

struct MessageValue {
    double w;
    double h;
};

/// Folds inbound (w, h) pairs into an outgoing message.
class MessageAccumulator {
public:
    void add(double conductance, double w, double h) noexcept {
        weighted_h_ += w * h;
        leak_ += (1.0 - w) * conductance;
        ++terms_;
    }

    MessageValue emit(double out_conductance) const noexcept {
        const double leak = std::max(leak_, 0.0);
        return {1.0 / (1.0 + leak / out_conductance), weighted_h_ + 1.0};
    }

    /// Centrality estimate once every neighbour's message is in.
    double centrality() const noexcept { return weighted_h_ + 1.0; }
    std::size_t terms() const noexcept { return terms_; }

private:
    double weighted_h_ = 0.0;
    double leak_ = 0.0;
    std::size_t terms_ = 0;
};

} // namespace detail

/// One slot per arc (both directions of every edge).
class MessageState {
public:
    MessageState() = default;
    explicit MessageState(const WeightedGraph& graph)
        : slots_(graph.arc_count()), sent_(graph.arc_count(), 0), round_(graph.arc_count(), 0) {
        for (std::size_t a = 0; a < graph.arc_count(); ++a) {
            slots_[a].from = graph.arc_source(a);
            slots_[a].to = graph.arc_target(a);
        }
    }

    std::size_t size() const noexcept { return slots_.size(); }
    bool sent(std::size_t arc) const { return sent_.at(arc) != 0; }
    std::size_t sent_round(std::size_t arc) const { return round_.at(arc); }
    const DirectedMessage& message(std::size_t arc) const { return slots_.at(arc); }

    std::optional<DirectedMessage> find(const WeightedGraph& graph, NodeId from, NodeId to) const {
        auto e = graph.find_edge(from, to);
        if (!e) return std::nullopt;
        const auto a = graph.arc(*e, from);
        if (!sent(a)) return std::nullopt;
        return slots_[a];
    }

    void send(std::size_t arc, double w, double h, std::size_t round) {
        auto& slot = slots_.at(arc);
        slot.w = w;
        slot.h = h;
        sent_[arc] = 1;
        round_[arc] = round;
    }

    std::size_t sent_count() const noexcept {
        return static_cast<std::size_t>(std::count(sent_.begin(), sent_.end(), 1));
    }

private:
    std::vector<DirectedMessage> slots_;
    std::vector<char> sent_;
    std::vector<std::size_t> round_;
};

struct MpaStats {
    std::size_t rounds = 0;
    std::size_t messages_sent = 0;
    std::vector<std::size_t> per_node_ops;  // inbound terms folded by each node
};

/// Leaf messages, sent in round 1: (1, 1) from a regular leaf, (0, 0) from a
/// zero-anchored one.
inline MessageState init_leaf_messages(const WeightedGraph& tree, std::span<const NodeId> zero_set) {
    require_tree(tree);
    const StubbornMask stubborn(tree, zero_set);
    MessageState state(tree);
    for (NodeId i = 0; i < tree.node_count(); ++i) {
        if (tree.degree(i) != 1) continue;
        const auto& nb = tree.neighbors(i).front();
        const double v = stubborn[i] ? 0.0 : 1.0;
        state.send(tree.arc(nb.edge, i), v, v, 1);
    }
    return state;
}

/// The message i -> j computed from the messages i received from N_i \ {j}.
inline DirectedMessage message_update(const WeightedGraph& tree, std::span<const NodeId> zero_set, NodeId i, NodeId j,
                                      std::span<const DirectedMessage> inbound) {
    require_node(tree, i);
    require_node(tree, j);
    const auto out_edge = tree.find_edge(i, j);
    if (!out_edge) throw Error(ErrorKind::InvalidConfig, "no edge between the message endpoints");
    const StubbornMask stubborn(tree, zero_set);
    if (stubborn[i]) return {i, j, 0.0, 0.0};

    detail::MessageAccumulator acc;
    for (const auto& nb : tree.neighbors(i)) {
        if (nb.node == j) continue;
        auto it = std::find_if(inbound.begin(), inbound.end(),
                               [&](const DirectedMessage& m) { return m.from == nb.node && m.to == i; });
        if (it == inbound.end())
            throw Error(ErrorKind::MissingInbound,
                        "message " + std::to_string(nb.node) + "->" + std::to_string(i) + " not available");
        acc.add(tree.edge(nb.edge).conductance, it->w, it->h);
    }
    const auto value = acc.emit(tree.edge(*out_edge).conductance);
    return {i, j, value.w, value.h};
}

struct TreeMpaRun {
    HicResult result;
    MpaStats stats;
    MessageState messages;
};

namespace detail {

/// Synchronous schedule: an arc i -> j fires in the first round after all of
/// N_i \ {j} have delivered. Every arc fires exactly once. No precondition on
/// the zero set, so this also runs on computation trees without anchors.
inline TreeMpaRun propagate_tree(const WeightedGraph& tree, const StubbornMask& stubborn) {
    TreeMpaRun run;
    run.messages = MessageState(tree);
    run.stats.per_node_ops.assign(tree.node_count(), 0);
    std::vector<std::size_t> received(tree.node_count(), 0);
    std::vector<char> scheduled(tree.arc_count(), 0);

    auto fire = [&](std::size_t arc, std::size_t round) {
        const NodeId i = tree.arc_source(arc);
        const NodeId j = tree.arc_target(arc);
        if (stubborn[i]) {
            run.messages.send(arc, 0.0, 0.0, round);
            return;
        }
        MessageAccumulator acc;
        for (const auto& nb : tree.neighbors(i)) {
            if (nb.node == j) continue;
            const auto& in = run.messages.message(tree.arc(nb.edge, nb.node));
            acc.add(tree.edge(nb.edge).conductance, in.w, in.h);
        }
        run.stats.per_node_ops[i] += acc.terms();
        const auto value = acc.emit(tree.edge(arc / 2).conductance);
        run.messages.send(arc, value.w, value.h, round);
    };

    // Arcs out of i that have just become ready given received[i].
    auto ready_from = [&](NodeId i, std::vector<std::size_t>& out) {
        const auto d = tree.degree(i);
        if (received[i] + 1 < d) return;
        for (const auto& nb : tree.neighbors(i)) {
            const auto arc = tree.arc(nb.edge, i);
            if (scheduled[arc]) continue;
            // With one inbound missing, only the arc back toward it is ready.
            if (received[i] + 1 == d && !run.messages.sent(tree.arc(nb.edge, nb.node))) {
                scheduled[arc] = 1;
                out.push_back(arc);
            } else if (received[i] == d) {
                scheduled[arc] = 1;
                out.push_back(arc);
            }
        }
    };

    std::vector<std::size_t> current;
    for (NodeId i = 0; i < tree.node_count(); ++i) ready_from(i, current);
    std::size_t round = 0;
    while (!current.empty()) {
        ++round;
        std::sort(current.begin(), current.end());
        for (auto arc : current) fire(arc, round);
        std::vector<std::size_t> next;
        for (auto arc : current) ++received[tree.arc_target(arc)];
        for (auto arc : current) ready_from(tree.arc_target(arc), next);
        current = std::move(next);
    }
    run.stats.rounds = round;
    run.stats.messages_sent = run.messages.sent_count();

    run.result.hic.assign(tree.node_count(), std::nullopt);
    for (NodeId i = 0; i < tree.node_count(); ++i) {
        if (stubborn[i]) continue;
        MessageAccumulator acc;
        for (const auto& nb : tree.neighbors(i)) {
            const auto& in = run.messages.message(tree.arc(nb.edge, nb.node));
            acc.add(tree.edge(nb.edge).conductance, in.w, in.h);
        }
        run.stats.per_node_ops[i] += acc.terms();
        run.result.hic[i] = acc.centrality();
    }
    run.result.rounds_or_solves = run.stats.rounds;
    run.result.stopping_reason = StoppingReason::Exact;
    if (auto best = argmax_smallest_id(run.result.hic)) run.result.argmax_node = *best;
    return run;
}

} // namespace detail

/// Centrality of every regular node of a tree, with message/round accounting.
inline TreeMpaRun run_tree_mpa(const WeightedGraph& tree, std::span<const NodeId> zero_set) {
    require_tree(tree);
    if (zero_set.empty()) throw Error(ErrorKind::EmptyStubbornSet, "at least one zero-anchored node is required");
    const StubbornMask stubborn(tree, zero_set);
    auto run = detail::propagate_tree(tree, stubborn);
    run.result.argmax_node = require_argmax(run.result.hic);
    return run;
}

/// Voltage profile for source `ell` read off the final messages: each node's
/// voltage is the product of the w's along its path toward ell.
inline std::vector<double> tree_voltage_profile(const WeightedGraph& tree, const MessageState& messages, NodeId ell) {
    require_node(tree, ell);
    std::vector<double> voltage(tree.node_count(), 0.0);
    std::vector<char> seen(tree.node_count(), 0);
    std::queue<NodeId> frontier;
    voltage[ell] = 1.0;
    seen[ell] = 1;
    frontier.push(ell);
    while (!frontier.empty()) {
        const auto p = frontier.front();
        frontier.pop();
        for (const auto& nb : tree.neighbors(p)) {
            if (seen[nb.node]) continue;
            const auto arc = tree.arc(nb.edge, nb.node);
            if (!messages.sent(arc)) throw Error(ErrorKind::MissingInbound, "message toward the source was never sent");
            voltage[nb.node] = voltage[p] * messages.message(arc).w;
            seen[nb.node] = 1;
            frontier.push(nb.node);
        }
    }
    return voltage;
}

} // namespace hic

#pragma once

// Optimal placement of the unit-anchored node on trees: decompose at the
// zero-anchored nodes, prune each piece to the nodes that can be optimal, and
// evaluate the survivors with tree message passing.

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

#include "hic/error.hpp"
#include "hic/graph.hpp"
#include "hic/result.hpp"
#include "hic/tree_mpa.hpp"

namespace hic {

/// Forest obtained by splitting every zero-anchored node into leaves.
struct LeafNormalizedForest {
    WeightedGraph forest;
    std::vector<NodeId> zero_set;
    std::vector<NodeId> to_original;  // new id -> original id
};

/// Replaces each zero-anchored node of degree d by d leaf copies, one per
/// incident edge. Splitting an interior anchor disconnects the tree, so the
/// result is a forest; every piece holds one component of the regular forest
/// with its anchors as leaves, which is what tree_partition hands out
/// directly. Centralities of regular nodes are unchanged because every copy
/// sits at 0. Regular nodes keep their relative order and come first.
inline LeafNormalizedForest split_stubborn_to_leaves(const WeightedGraph& tree, std::span<const NodeId> zero_set) {
    require_tree(tree);
    const StubbornMask stubborn(tree, zero_set);
    LeafNormalizedForest out;
    std::vector<NodeId> local(tree.node_count());
    for (NodeId i = 0; i < tree.node_count(); ++i) {
        if (stubborn[i]) continue;
        local[i] = out.to_original.size();
        out.to_original.push_back(i);
    }
    std::vector<Edge> edges;
    auto fresh_copy = [&](NodeId s) {
        const NodeId id = out.to_original.size();
        out.to_original.push_back(s);
        out.zero_set.push_back(id);
        return id;
    };
    for (const auto& e : tree.edges()) {
        const NodeId u = stubborn[e.u] ? fresh_copy(e.u) : local[e.u];
        const NodeId v = stubborn[e.v] ? fresh_copy(e.v) : local[e.v];
        edges.push_back({u, v, e.conductance});
    }
    if (tree.node_count() == 1 && stubborn[0]) fresh_copy(0);
    out.forest = WeightedGraph(out.to_original.size(), std::move(edges));
    return out;
}

struct CandidateSets {
    std::vector<NodeId> k;        // regular nodes on some path between two anchors
    std::vector<NodeId> k_prime;  // members of k with degree >= 3
};

/// Nodes that can maximise the centrality on a unit-resistance tree whose
/// zero-anchored nodes are leaves (at least two of them).
inline CandidateSets candidate_set(const WeightedGraph& tree, std::span<const NodeId> zero_set) {
    require_tree(tree);
    const StubbornMask stubborn(tree, zero_set);
    if (stubborn.count() < 2) throw Error(ErrorKind::TooFewStubborn, "candidate pruning needs two zero-anchored leaves");
    for (NodeId i = 0; i < tree.node_count(); ++i)
        if (stubborn[i] && tree.degree(i) != 1)
            throw Error(ErrorKind::InvalidConfig, "zero-anchored node " + std::to_string(i) + " is not a leaf");

    // Root at 0; below[v] = anchors in v's subtree.
    const auto n = tree.node_count();
    std::vector<NodeId> parent(n, n), order;
    order.reserve(n);
    std::vector<char> seen(n, 0);
    order.push_back(0);
    seen[0] = 1;
    for (std::size_t k = 0; k < order.size(); ++k)
        for (const auto& nb : tree.neighbors(order[k]))
            if (!seen[nb.node]) {
                seen[nb.node] = 1;
                parent[nb.node] = order[k];
                order.push_back(nb.node);
            }
    std::vector<std::size_t> below(n, 0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        below[*it] += stubborn[*it] ? 1 : 0;
        if (parent[*it] != n) below[parent[*it]] += below[*it];
    }

    CandidateSets out;
    const auto total = stubborn.count();
    for (NodeId v = 0; v < n; ++v) {
        if (stubborn[v]) continue;
        std::size_t sides = 0;
        for (const auto& nb : tree.neighbors(v)) {
            const auto behind = nb.node == parent[v] ? total - below[v] : below[nb.node];
            if (behind > 0) ++sides;
        }
        if (sides >= 2) {
            out.k.push_back(v);
            if (tree.degree(v) >= 3) out.k_prime.push_back(v);
        }
    }
    return out;
}

struct OsapResult {
    NodeId argmax = 0;
    double value = 0.0;
    std::vector<NodeId> candidates;  // original ids, ascending
    std::size_t candidates_considered = 0;
    bool pruned = false;             // true if any component used K / K' pruning
};

/// Best placement on a tree. Per component of the regular forest: a single
/// adjacent anchor means its neighbour wins outright; with two or more anchors
/// and unit resistances only K' (or K when K' is empty) is examined; otherwise
/// every regular node is a candidate.
inline OsapResult osap_tree(const WeightedGraph& tree, std::span<const NodeId> zero_set) {
    require_tree(tree);
    if (zero_set.empty()) throw Error(ErrorKind::EmptyStubbornSet, "at least one zero-anchored node is required");
    // Each augmented piece already has its anchors as leaves: an anchor
    // touching one regular component twice would close a cycle.
    const auto partition = tree_partition(tree, zero_set);
    const StubbornMask anchors(tree, zero_set);

    OsapResult out;
    std::vector<std::optional<double>> scores(tree.node_count());
    for (const auto& comp : partition.components) {
        const auto sub = induced_subgraph(tree, comp.augmented);
        std::vector<NodeId> local_zero;
        for (auto id : comp.augmented)
            if (anchors[id]) local_zero.push_back(*sub.local(id));

        std::vector<NodeId> local_candidates;
        if (local_zero.size() == 1) {
            local_candidates.push_back(sub.graph.neighbors(local_zero.front()).front().node);
        } else if (sub.graph.unit_resistances()) {
            auto sets = candidate_set(sub.graph, local_zero);
            local_candidates = sets.k_prime.empty() ? sets.k : sets.k_prime;
            out.pruned = true;
        } else {
            for (auto id : comp.regular) local_candidates.push_back(*sub.local(id));
        }

        const auto run = run_tree_mpa(sub.graph, local_zero);
        for (auto c : local_candidates) {
            const NodeId original = sub.to_original[c];
            scores[original] = run.result.hic[c];
            out.candidates.push_back(original);
        }
    }
    std::sort(out.candidates.begin(), out.candidates.end());
    out.candidates_considered = out.candidates.size();
    out.argmax = require_argmax(scores);
    out.value = *scores[out.argmax];
    return out;
}

} // namespace hic

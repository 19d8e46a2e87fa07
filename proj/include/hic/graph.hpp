#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hic/error.hpp"

namespace hic {

/// Dense node index in [0, node_count).
using NodeId = std::size_t;

struct Edge {
    NodeId u = 0;
    NodeId v = 0;
    double conductance = 1.0;

    double resistance() const noexcept { return 1.0 / conductance; }
    NodeId other(NodeId x) const noexcept { return x == u ? v : u; }

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Unchecked edge list, as read from a file. May violate graph invariants;
/// validate() reports what is wrong with it.
struct EdgeList {
    std::size_t node_count = 0;
    std::vector<Edge> edges;

    friend bool operator==(const EdgeList&, const EdgeList&) = default;
};

struct ValidationReport {
    bool connected = false;
    std::vector<std::size_t> self_loops;     // indices into the edge list
    std::vector<std::size_t> duplicates;     // second and later occurrences
    std::vector<std::size_t> nonpositive;    // conductance <= 0 or not finite
    std::vector<std::size_t> out_of_range;   // endpoint >= node_count

    bool well_formed() const noexcept {
        return self_loops.empty() && duplicates.empty() && nonpositive.empty() && out_of_range.empty();
    }
    bool valid() const noexcept { return well_formed(); }

    std::vector<std::string> messages() const {
        std::vector<std::string> out;
        for (auto e : self_loops) out.push_back("self-loop at edge " + std::to_string(e));
        for (auto e : duplicates) out.push_back("duplicate edge " + std::to_string(e));
        for (auto e : nonpositive) out.push_back("nonpositive conductance at edge " + std::to_string(e));
        for (auto e : out_of_range) out.push_back("node id out of range at edge " + std::to_string(e));
        if (!connected) out.push_back("graph is not connected");
        return out;
    }
};

namespace detail {

// Connectivity over the edges whose endpoints are in range; used by validate()
// before the list has been turned into a graph.
inline bool edge_list_connected(const EdgeList& list) {
    const auto n = list.node_count;
    if (n <= 1) return true;
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::size_t components = n;
    for (const auto& e : list.edges) {
        if (e.u >= n || e.v >= n) continue;
        auto a = find(e.u), b = find(e.v);
        if (a != b) {
            parent[a] = b;
            --components;
        }
    }
    return components == 1;
}

} // namespace detail

inline ValidationReport validate(const EdgeList& list) {
    ValidationReport report;
    // (unordered pair, position in list) for every in-range edge
    std::vector<std::pair<std::pair<NodeId, NodeId>, std::size_t>> keyed;
    keyed.reserve(list.edges.size());
    for (std::size_t idx = 0; idx < list.edges.size(); ++idx) {
        const auto& e = list.edges[idx];
        if (e.u >= list.node_count || e.v >= list.node_count) {
            report.out_of_range.push_back(idx);
            continue;
        }
        if (e.u == e.v) report.self_loops.push_back(idx);
        if (!(e.conductance > 0.0) || e.conductance == std::numeric_limits<double>::infinity())
            report.nonpositive.push_back(idx);
        keyed.push_back({{std::min(e.u, e.v), std::max(e.u, e.v)}, idx});
    }
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t k = 1; k < keyed.size(); ++k)
        if (keyed[k].first == keyed[k - 1].first) report.duplicates.push_back(keyed[k].second);
    std::sort(report.duplicates.begin(), report.duplicates.end());
    report.connected = detail::edge_list_connected(list);
    return report;
}

/// Undirected electrical network (G, C): positive conductance per edge,
/// no self-loops, no parallel edges. Immutable after construction.
///
/// Each edge e = {u, v} also defines two arcs, 2e for u->v and 2e+1 for v->u,
/// which index per-direction message tables.
class WeightedGraph {
public:
    struct Neighbor {
        NodeId node;
        std::size_t edge;
    };

    WeightedGraph() = default;

    explicit WeightedGraph(std::size_t node_count) : node_count_(node_count), adjacency_(node_count) {}

    WeightedGraph(std::size_t node_count, std::vector<Edge> edges)
        : WeightedGraph(EdgeList{node_count, std::move(edges)}) {}

    explicit WeightedGraph(EdgeList list) : node_count_(list.node_count), adjacency_(list.node_count) {
        const auto report = validate(list);
        if (!report.well_formed()) throw Error(ErrorKind::InvalidGraph, report.messages().front());
        edges_ = std::move(list.edges);
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            adjacency_[edges_[e].u].push_back({edges_[e].v, e});
            adjacency_[edges_[e].v].push_back({edges_[e].u, e});
        }
    }

    std::size_t node_count() const noexcept { return node_count_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    std::size_t arc_count() const noexcept { return 2 * edges_.size(); }

    std::span<const Edge> edges() const noexcept { return edges_; }
    const Edge& edge(std::size_t e) const { return edges_.at(e); }

    std::span<const Neighbor> neighbors(NodeId i) const { return adjacency_.at(i); }
    std::size_t degree(NodeId i) const { return adjacency_.at(i).size(); }

    double weighted_degree(NodeId i) const {
        double total = 0.0;
        for (const auto& nb : neighbors(i)) total += edges_[nb.edge].conductance;
        return total;
    }

    /// Arc index for the direction from -> other endpoint of edge e.
    std::size_t arc(std::size_t e, NodeId from) const noexcept { return 2 * e + (edges_[e].u == from ? 0 : 1); }
    NodeId arc_source(std::size_t a) const noexcept { return a % 2 == 0 ? edges_[a / 2].u : edges_[a / 2].v; }
    NodeId arc_target(std::size_t a) const noexcept { return a % 2 == 0 ? edges_[a / 2].v : edges_[a / 2].u; }
    static constexpr std::size_t reverse_arc(std::size_t a) noexcept { return a ^ 1U; }

    std::optional<std::size_t> find_edge(NodeId u, NodeId v) const {
        if (u >= node_count_ || v >= node_count_) return std::nullopt;
        const auto& shorter = degree(u) <= degree(v) ? adjacency_[u] : adjacency_[v];
        const NodeId target = degree(u) <= degree(v) ? v : u;
        for (const auto& nb : shorter)
            if (nb.node == target) return nb.edge;
        return std::nullopt;
    }
    bool has_edge(NodeId u, NodeId v) const { return find_edge(u, v).has_value(); }

    bool unit_resistances() const noexcept {
        return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.conductance == 1.0; });
    }

    EdgeList edge_list() const { return {node_count_, edges_}; }

    friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
        return a.node_count_ == b.node_count_ && a.edges_ == b.edges_;
    }

private:
    std::size_t node_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Neighbor>> adjacency_;
};

inline ValidationReport validate(const WeightedGraph& graph) { return validate(graph.edge_list()); }

inline void require_node(const WeightedGraph& graph, NodeId id) {
    if (id >= graph.node_count())
        throw Error(ErrorKind::UnknownNode, "node " + std::to_string(id) + " not in graph of " +
                                                std::to_string(graph.node_count()) + " nodes");
}

/// Membership mask for the zero-anchored set S0.
class StubbornMask {
public:
    StubbornMask() = default;
    StubbornMask(const WeightedGraph& graph, std::span<const NodeId> zero_set) : mask_(graph.node_count(), 0) {
        for (auto s : zero_set) {
            require_node(graph, s);
            if (!mask_[s]) ++count_;
            mask_[s] = 1;
        }
    }

    bool operator[](NodeId i) const noexcept { return mask_[i] != 0; }
    std::size_t count() const noexcept { return count_; }
    std::size_t size() const noexcept { return mask_.size(); }
    bool empty() const noexcept { return count_ == 0; }

    std::vector<NodeId> regular_nodes() const {
        std::vector<NodeId> out;
        for (NodeId i = 0; i < mask_.size(); ++i)
            if (!mask_[i]) out.push_back(i);
        return out;
    }

private:
    std::vector<char> mask_;
    std::size_t count_ = 0;
};

/// S0 plus the optional unit-anchored node.
struct StubbornConfig {
    std::vector<NodeId> zero_set;
    std::optional<NodeId> one_node;

    void check(const WeightedGraph& graph) const {
        for (auto s : zero_set) require_node(graph, s);
        if (one_node) {
            require_node(graph, *one_node);
            if (std::find(zero_set.begin(), zero_set.end(), *one_node) != zero_set.end())
                throw Error(ErrorKind::InvalidConfig, "unit-anchored node is also zero-anchored");
        }
    }
};

// ---------------------------------------------------------------------------
// Structural queries

struct Components {
    std::vector<std::size_t> label;  // per node
    std::size_t count = 0;
};

inline Components connected_components(const WeightedGraph& graph) {
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    Components out{std::vector<std::size_t>(graph.node_count(), unset), 0};
    std::vector<NodeId> stack;
    for (NodeId start = 0; start < graph.node_count(); ++start) {
        if (out.label[start] != unset) continue;
        out.label[start] = out.count;
        stack.push_back(start);
        while (!stack.empty()) {
            auto x = stack.back();
            stack.pop_back();
            for (const auto& nb : graph.neighbors(x)) {
                if (out.label[nb.node] == unset) {
                    out.label[nb.node] = out.count;
                    stack.push_back(nb.node);
                }
            }
        }
        ++out.count;
    }
    return out;
}

inline bool is_connected(const WeightedGraph& graph) { return connected_components(graph).count <= 1; }

inline void require_connected(const WeightedGraph& graph) {
    if (!is_connected(graph)) throw Error(ErrorKind::DisconnectedGraph, "graph is not connected");
}

inline bool is_tree(const WeightedGraph& graph) {
    if (graph.node_count() == 0) return false;
    return graph.edge_count() + 1 == graph.node_count() && is_connected(graph);
}

inline void require_tree(const WeightedGraph& graph) {
    if (!is_tree(graph)) throw Error(ErrorKind::NotATree, "graph is not a tree");
}

/// Hop distances from source; unreachable nodes get max().
inline std::vector<std::size_t> hop_distances(const WeightedGraph& graph, NodeId source) {
    require_node(graph, source);
    std::vector<std::size_t> dist(graph.node_count(), std::numeric_limits<std::size_t>::max());
    std::queue<NodeId> frontier;
    dist[source] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
        auto x = frontier.front();
        frontier.pop();
        for (const auto& nb : graph.neighbors(x)) {
            if (dist[nb.node] == std::numeric_limits<std::size_t>::max()) {
                dist[nb.node] = dist[x] + 1;
                frontier.push(nb.node);
            }
        }
    }
    return dist;
}

inline std::size_t eccentricity(const WeightedGraph& graph, NodeId node) {
    const auto dist = hop_distances(graph, node);
    std::size_t worst = 0;
    for (auto d : dist) {
        if (d == std::numeric_limits<std::size_t>::max())
            throw Error(ErrorKind::DisconnectedGraph, "eccentricity undefined on a disconnected graph");
        worst = std::max(worst, d);
    }
    return worst;
}

/// Largest hop distance between any two nodes; conductances are ignored.
inline std::size_t diameter(const WeightedGraph& graph) {
    require_connected(graph);
    std::size_t best = 0;
    for (NodeId i = 0; i < graph.node_count(); ++i) best = std::max(best, eccentricity(graph, i));
    return best;
}

struct InducedSubgraph {
    WeightedGraph graph;
    std::vector<NodeId> to_original;                // new id -> old id
    std::vector<std::optional<NodeId>> to_local;   // old id -> new id

    std::optional<NodeId> local(NodeId original) const { return to_local.at(original); }
};

/// Subgraph on `nodes` (new ids follow ascending old id). Keeps exactly the
/// edges with both endpoints selected, in original edge order.
inline InducedSubgraph induced_subgraph(const WeightedGraph& graph, std::span<const NodeId> nodes) {
    InducedSubgraph out;
    out.to_local.assign(graph.node_count(), std::nullopt);
    std::vector<char> selected(graph.node_count(), 0);
    for (auto id : nodes) {
        require_node(graph, id);
        selected[id] = 1;
    }
    for (NodeId i = 0; i < graph.node_count(); ++i) {
        if (!selected[i]) continue;
        out.to_local[i] = out.to_original.size();
        out.to_original.push_back(i);
    }
    std::vector<Edge> kept;
    for (const auto& e : graph.edges())
        if (selected[e.u] && selected[e.v]) kept.push_back({*out.to_local[e.u], *out.to_local[e.v], e.conductance});
    out.graph = WeightedGraph(out.to_original.size(), std::move(kept));
    return out;
}

struct SubtreeComponent {
    std::vector<NodeId> regular;    // J_h, ascending
    std::vector<NodeId> augmented;  // J_h plus adjacent zero-set nodes, ascending
};

struct SubtreePartition {
    std::vector<SubtreeComponent> components;
};

/// Splits a tree at its zero-anchored nodes: one component per connected
/// piece of the forest induced on the regular nodes, each augmented with the
/// zero-set nodes touching it.
inline SubtreePartition tree_partition(const WeightedGraph& tree, std::span<const NodeId> zero_set) {
    require_tree(tree);
    const StubbornMask stubborn(tree, zero_set);
    constexpr auto unset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> label(tree.node_count(), unset);
    SubtreePartition out;
    std::vector<NodeId> stack;
    for (NodeId start = 0; start < tree.node_count(); ++start) {
        if (stubborn[start] || label[start] != unset) continue;
        const auto id = out.components.size();
        SubtreeComponent comp;
        std::vector<NodeId> touching;
        label[start] = id;
        stack.push_back(start);
        while (!stack.empty()) {
            auto x = stack.back();
            stack.pop_back();
            comp.regular.push_back(x);
            for (const auto& nb : tree.neighbors(x)) {
                if (stubborn[nb.node]) {
                    touching.push_back(nb.node);
                } else if (label[nb.node] == unset) {
                    label[nb.node] = id;
                    stack.push_back(nb.node);
                }
            }
        }
        std::sort(comp.regular.begin(), comp.regular.end());
        std::sort(touching.begin(), touching.end());
        touching.erase(std::unique(touching.begin(), touching.end()), touching.end());
        comp.augmented = comp.regular;
        comp.augmented.insert(comp.augmented.end(), touching.begin(), touching.end());
        std::sort(comp.augmented.begin(), comp.augmented.end());
        out.components.push_back(std::move(comp));
    }
    return out;
}

} // namespace hic

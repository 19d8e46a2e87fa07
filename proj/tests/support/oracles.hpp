#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's solvers or message passing; it only borrows the graph container.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "hic/graph.hpp"

namespace hic::oracle {

/// Centrality of every node through the Green's function of the Laplacian
/// grounded at S0: with G = L_RR^{-1} over R = I \ S0, the voltage for source
/// l is G(:, l) / G(l, l), so H(l) = sum_i G(i, l) / G(l, l).
inline std::vector<std::optional<double>> green_hic(const WeightedGraph& g, const std::vector<NodeId>& zero) {
    std::vector<char> anchored(g.node_count(), 0);
    for (auto s : zero) anchored[s] = 1;
    std::vector<NodeId> regular;
    std::vector<Eigen::Index> local(g.node_count(), -1);
    for (NodeId i = 0; i < g.node_count(); ++i)
        if (!anchored[i]) {
            local[i] = static_cast<Eigen::Index>(regular.size());
            regular.push_back(i);
        }
    const auto m = static_cast<Eigen::Index>(regular.size());
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(m, m);
    for (const auto& e : g.edges()) {
        if (local[e.u] >= 0) lap(local[e.u], local[e.u]) += e.conductance;
        if (local[e.v] >= 0) lap(local[e.v], local[e.v]) += e.conductance;
        if (local[e.u] >= 0 && local[e.v] >= 0) {
            lap(local[e.u], local[e.v]) -= e.conductance;
            lap(local[e.v], local[e.u]) -= e.conductance;
        }
    }
    const Eigen::MatrixXd green = lap.ldlt().solve(Eigen::MatrixXd::Identity(m, m));
    std::vector<std::optional<double>> out(g.node_count());
    for (Eigen::Index l = 0; l < m; ++l) out[regular[l]] = green.col(l).sum() / green(l, l);
    return out;
}

/// Voltages by Gauss-Seidel relaxation of the averaging rule.
inline std::vector<double> relaxed_voltage(const WeightedGraph& g, const std::vector<NodeId>& zero, NodeId one,
                                           double tol = 1e-14, std::size_t max_sweeps = 2'000'000) {
    std::vector<char> fixed(g.node_count(), 0);
    std::vector<double> x(g.node_count(), 0.0);
    for (auto s : zero) fixed[s] = 1;
    fixed[one] = 1;
    x[one] = 1.0;
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        double change = 0.0;
        for (NodeId i = 0; i < g.node_count(); ++i) {
            if (fixed[i]) continue;
            double num = 0.0, den = 0.0;
            for (const auto& nb : g.neighbors(i)) {
                num += g.edge(nb.edge).conductance * x[nb.node];
                den += g.edge(nb.edge).conductance;
            }
            const double v = num / den;
            change = std::max(change, std::abs(v - x[i]));
            x[i] = v;
        }
        if (change < tol) break;
    }
    return x;
}

/// Series law: total resistance along the unique tree path a -> b.
inline double path_resistance(const WeightedGraph& tree, NodeId a, NodeId b) {
    std::vector<std::optional<double>> dist(tree.node_count());
    std::vector<NodeId> stack{a};
    dist[a] = 0.0;
    while (!stack.empty()) {
        auto x = stack.back();
        stack.pop_back();
        for (const auto& nb : tree.neighbors(x))
            if (!dist[nb.node]) {
                dist[nb.node] = *dist[x] + tree.edge(nb.edge).resistance();
                stack.push_back(nb.node);
            }
    }
    return dist[b].value();
}

/// Nodes on the unique tree path a -> b, endpoints included.
inline std::vector<NodeId> tree_path(const WeightedGraph& tree, NodeId a, NodeId b) {
    std::vector<std::optional<NodeId>> parent(tree.node_count());
    std::vector<NodeId> stack{a};
    parent[a] = a;
    while (!stack.empty()) {
        auto x = stack.back();
        stack.pop_back();
        for (const auto& nb : tree.neighbors(x))
            if (!parent[nb.node]) {
                parent[nb.node] = x;
                stack.push_back(nb.node);
            }
    }
    std::vector<NodeId> path{b};
    while (path.back() != a) path.push_back(*parent[path.back()]);
    std::reverse(path.begin(), path.end());
    return path;
}

// ---------------------------------------------------------------------------
// Test-side random instances (std::mt19937_64; reproducible on this toolchain).

/// Random recursive tree, relabelled by a random permutation.
inline WeightedGraph random_tree(std::size_t n, std::mt19937_64& rng, double c_lo = 1.0, double c_hi = 1.0) {
    std::vector<NodeId> label(n);
    std::iota(label.begin(), label.end(), NodeId{0});
    std::shuffle(label.begin(), label.end(), rng);
    std::uniform_real_distribution<double> cond(c_lo, c_hi);
    std::vector<Edge> edges;
    for (NodeId i = 1; i < n; ++i) {
        const NodeId parent = std::uniform_int_distribution<NodeId>(0, i - 1)(rng);
        const double c = c_lo == c_hi ? c_lo : cond(rng);
        edges.push_back({label[i], label[parent], c});
    }
    return WeightedGraph(n, std::move(edges));
}

inline std::vector<NodeId> random_subset(std::size_t n, std::size_t count, std::mt19937_64& rng) {
    std::vector<NodeId> all(n);
    std::iota(all.begin(), all.end(), NodeId{0});
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(count);
    std::sort(all.begin(), all.end());
    return all;
}

inline std::vector<NodeId> leaves(const WeightedGraph& g) {
    std::vector<NodeId> out;
    for (NodeId i = 0; i < g.node_count(); ++i)
        if (g.degree(i) == 1) out.push_back(i);
    return out;
}

inline WeightedGraph cycle(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
    return WeightedGraph(n, std::move(edges));
}

/// Circulant graph: i ~ i +- o for every offset o (offsets < n/2, or n/2 once).
inline WeightedGraph circulant(std::size_t n, const std::vector<std::size_t>& offsets) {
    std::set<std::pair<NodeId, NodeId>> seen;
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i)
        for (auto o : offsets) {
            NodeId j = (i + o) % n;
            auto key = std::minmax(i, j);
            if (i != j && seen.insert(key).second) edges.push_back({key.first, key.second, 1.0});
        }
    return WeightedGraph(n, std::move(edges));
}

/// Random simple connected d-regular graph by the pairing model with restarts.
inline WeightedGraph random_regular(std::size_t n, std::size_t d, std::mt19937_64& rng) {
    for (;;) {
        std::vector<NodeId> points;
        for (NodeId i = 0; i < n; ++i)
            for (std::size_t k = 0; k < d; ++k) points.push_back(i);
        std::shuffle(points.begin(), points.end(), rng);
        std::set<std::pair<NodeId, NodeId>> seen;
        std::vector<Edge> edges;
        bool ok = true;
        for (std::size_t k = 0; k + 1 < points.size() && ok; k += 2) {
            auto key = std::minmax(points[k], points[k + 1]);
            ok = key.first != key.second && seen.insert(key).second;
            edges.push_back({key.first, key.second, 1.0});
        }
        if (!ok) continue;
        WeightedGraph g(n, std::move(edges));
        if (is_connected(g)) return g;
    }
}

/// Smallest-id argmax with the same relative tie window as the library.
inline NodeId argmax(const std::vector<std::optional<double>>& v, double tie = 1e-9) {
    double best = -1e300;
    for (const auto& x : v)
        if (x) best = std::max(best, *x);
    for (NodeId i = 0; i < v.size(); ++i)
        if (v[i] && *v[i] >= best - tie * std::max(1.0, std::abs(best))) return i;
    return v.size();
}

} // namespace hic::oracle

#pragma once

// Random graph families, baseline centralities and the error metrics used to
// compare iterative message passing against the exact solver.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "hic/error.hpp"
#include "hic/exact_solver.hpp"
#include "hic/general_mpa.hpp"
#include "hic/graph.hpp"
#include "hic/result.hpp"
#include "hic/rng.hpp"

namespace hic {

// ---------------------------------------------------------------------------
// Generators. Every family uses n as the node count and unit conductances.

struct ErdosRenyi {
    std::size_t n = 0;
    double p = 0.0;
};
struct WattsStrogatz {
    std::size_t n = 0;
    std::size_t k = 0;  // even; each node starts linked to k/2 on either side
    double beta = 0.0;
};
struct RandomTree {
    std::size_t n = 0;
};
struct Line {
    std::size_t n = 0;
};
struct Star {
    std::size_t n = 0;  // center 0 plus n - 1 leaves
};

struct GeneratorSpec {
    std::variant<ErdosRenyi, WattsStrogatz, RandomTree, Line, Star> kind;
    std::uint64_t seed = 0;

    void check() const {
        auto fail = [](const std::string& why) { throw Error(ErrorKind::InvalidSpec, why); };
        std::visit(
            [&](const auto& k) {
                if (k.n < 1) fail("n must be at least 1");
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, ErdosRenyi>) {
                    if (!(k.p >= 0.0 && k.p <= 1.0)) fail("p must lie in [0, 1]");
                } else if constexpr (std::is_same_v<K, WattsStrogatz>) {
                    if (!(k.beta >= 0.0 && k.beta <= 1.0)) fail("beta must lie in [0, 1]");
                    if (k.k % 2 != 0 || k.k >= k.n) fail("k must be even and smaller than n");
                }
            },
            kind);
    }
};

struct GeneratedGraph {
    WeightedGraph graph;
    std::size_t attempts = 1;  // samples drawn until a connected one appeared
    std::uint64_t seed_used = 0;
};

namespace detail {

inline constexpr std::size_t kMaxConnectAttempts = 10'000;

inline WeightedGraph sample_erdos_renyi(const ErdosRenyi& spec, Rng& rng) {
    std::vector<Edge> edges;
    for (NodeId i = 0; i < spec.n; ++i)
        for (NodeId j = i + 1; j < spec.n; ++j)
            if (rng.bernoulli(spec.p)) edges.push_back({i, j, 1.0});
    return WeightedGraph(spec.n, std::move(edges));
}

inline WeightedGraph sample_watts_strogatz(const WattsStrogatz& spec, Rng& rng) {
    const auto n = spec.n;
    std::vector<std::set<NodeId>> adj(n);
    std::vector<std::pair<NodeId, NodeId>> ring;
    for (NodeId i = 0; i < n; ++i)
        for (std::size_t m = 1; m <= spec.k / 2; ++m) {
            const NodeId j = (i + m) % n;
            ring.emplace_back(i, j);
            adj[i].insert(j);
            adj[j].insert(i);
        }
    for (auto& [i, j] : ring) {
        if (!rng.bernoulli(spec.beta)) continue;
        if (adj[i].size() + 1 >= n) continue;  // i already touches everyone
        NodeId target;
        do {
            target = rng.below(n);
        } while (target == i || adj[i].count(target));
        adj[i].erase(j);
        adj[j].erase(i);
        adj[i].insert(target);
        adj[target].insert(i);
        j = target;
    }
    std::vector<Edge> edges;
    for (const auto& [i, j] : ring) edges.push_back({i, j, 1.0});
    return WeightedGraph(n, std::move(edges));
}

/// Uniform labelled tree by decoding a random Pruefer sequence.
inline WeightedGraph sample_random_tree(std::size_t n, Rng& rng) {
    if (n == 1) return WeightedGraph(1);
    if (n == 2) return WeightedGraph(2, {{0, 1, 1.0}});
    std::vector<NodeId> code(n - 2);
    for (auto& c : code) c = rng.below(n);
    std::vector<std::size_t> degree(n, 1);
    for (auto c : code) ++degree[c];
    std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> leaves;
    for (NodeId i = 0; i < n; ++i)
        if (degree[i] == 1) leaves.push(i);
    std::vector<Edge> edges;
    for (auto c : code) {
        const auto leaf = leaves.top();
        leaves.pop();
        edges.push_back({leaf, c, 1.0});
        if (--degree[c] == 1) leaves.push(c);
    }
    const auto a = leaves.top();
    leaves.pop();
    edges.push_back({a, leaves.top(), 1.0});
    return WeightedGraph(n, std::move(edges));
}

} // namespace detail

inline WeightedGraph line_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
    return WeightedGraph(n, std::move(edges));
}

inline WeightedGraph star_graph(std::size_t n) {
    std::vector<Edge> edges;
    for (NodeId i = 1; i < n; ++i) edges.push_back({0, i, 1.0});
    return WeightedGraph(n, std::move(edges));
}

/// Deterministic for a given spec. Random families with possible isolated
/// pieces (Erdos-Renyi, Watts-Strogatz) are redrawn with seed + 1, seed + 2,
/// ... until the sample is connected.
inline GeneratedGraph generate(const GeneratorSpec& spec) {
    spec.check();
    return std::visit(
        [&](const auto& k) -> GeneratedGraph {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Line>) {
                return {line_graph(k.n), 1, spec.seed};
            } else if constexpr (std::is_same_v<K, Star>) {
                return {star_graph(k.n), 1, spec.seed};
            } else if constexpr (std::is_same_v<K, RandomTree>) {
                Rng rng(spec.seed);
                return {detail::sample_random_tree(k.n, rng), 1, spec.seed};
            } else {
                for (std::size_t attempt = 0; attempt < detail::kMaxConnectAttempts; ++attempt) {
                    Rng rng(spec.seed + attempt);
                    WeightedGraph g;
                    if constexpr (std::is_same_v<K, ErdosRenyi>)
                        g = detail::sample_erdos_renyi(k, rng);
                    else
                        g = detail::sample_watts_strogatz(k, rng);
                    if (is_connected(g)) return {std::move(g), attempt + 1, spec.seed + attempt};
                }
                throw Error(ErrorKind::InvalidSpec, "no connected sample after " +
                                                        std::to_string(detail::kMaxConnectAttempts) + " attempts");
            }
        },
        spec.kind);
}

/// `count` distinct nodes drawn uniformly, ascending.
inline std::vector<NodeId> choose_stubborn(std::size_t node_count, std::size_t count, std::uint64_t seed) {
    if (count > node_count) throw Error(ErrorKind::InvalidSpec, "more stubborn nodes requested than nodes");
    std::vector<NodeId> pool(node_count);
    std::iota(pool.begin(), pool.end(), NodeId{0});
    Rng rng(seed);
    for (std::size_t k = 0; k < count; ++k) std::swap(pool[k], pool[k + rng.below(node_count - k)]);
    pool.resize(count);
    std::sort(pool.begin(), pool.end());
    return pool;
}

// ---------------------------------------------------------------------------
// Baseline centralities

inline std::vector<double> degree_centrality(const WeightedGraph& graph) {
    std::vector<double> out(graph.node_count());
    for (NodeId i = 0; i < graph.node_count(); ++i) out[i] = static_cast<double>(graph.degree(i));
    return out;
}

/// Principal eigenvector of the conductance-weighted adjacency matrix, scaled
/// to unit maximum. Power iteration runs on A + 0.5 I so bipartite graphs do
/// not oscillate; the shift leaves the eigenvector unchanged.
inline std::vector<double> eigenvector_centrality(const WeightedGraph& graph, double tol = 1e-10,
                                                  std::size_t max_iters = 10'000) {
    require_connected(graph);
    const auto n = graph.node_count();
    std::vector<double> x(n, 1.0), y(n);
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        double peak = 0.0;
        for (NodeId i = 0; i < n; ++i) {
            double acc = 0.5 * x[i];
            for (const auto& nb : graph.neighbors(i)) acc += graph.edge(nb.edge).conductance * x[nb.node];
            y[i] = acc;
            peak = std::max(peak, acc);
        }
        double change = 0.0;
        for (NodeId i = 0; i < n; ++i) {
            y[i] /= peak;
            change = std::max(change, std::abs(y[i] - x[i]));
        }
        std::swap(x, y);
        if (change < tol) return x;
    }
    throw Error(ErrorKind::NoConvergence, "eigenvector power iteration did not converge");
}

// ---------------------------------------------------------------------------
// Error metrics, averaged over the evaluated (regular) nodes.

namespace detail {

inline void check_metric_inputs(std::span<const double> exact, std::span<const double> estimate,
                                std::span<const NodeId> regular_set) {
    if (exact.size() != estimate.size())
        throw Error(ErrorKind::DimensionMismatch, "exact and estimated vectors differ in length");
    for (auto i : regular_set)
        if (i >= exact.size()) throw Error(ErrorKind::DimensionMismatch, "regular node outside the value vectors");
}

/// Position (0-based) of each regular node when sorted by descending value,
/// ascending id on ties. Values within 1e-9 relative of each other are
/// bucketed together first so rounding noise cannot reorder true ties.
inline std::vector<std::size_t> rank_positions(std::span<const double> values, std::span<const NodeId> regular_set) {
    double scale = 0.0;
    for (auto i : regular_set) scale = std::max(scale, std::abs(values[i]));
    const double quantum = kTieTolerance * std::max(1.0, scale);
    std::vector<std::pair<double, NodeId>> keyed;
    keyed.reserve(regular_set.size());
    for (auto i : regular_set) keyed.emplace_back(std::round(values[i] / quantum), i);
    std::vector<std::size_t> order(keyed.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto a, auto b) {
        if (keyed[a].first != keyed[b].first) return keyed[a].first > keyed[b].first;
        return keyed[a].second < keyed[b].second;
    });
    std::vector<std::size_t> position(regular_set.size());
    for (std::size_t p = 0; p < order.size(); ++p) position[order[p]] = p;
    return position;
}

} // namespace detail

inline double mean_deviation_error(std::span<const double> exact, std::span<const double> estimate,
                                   std::span<const NodeId> regular_set) {
    detail::check_metric_inputs(exact, estimate, regular_set);
    if (regular_set.empty()) return 0.0;
    double total = 0.0;
    for (auto i : regular_set) total += std::abs(exact[i] - estimate[i]);
    return total / static_cast<double>(regular_set.size());
}

inline double mean_rank_error(std::span<const double> exact, std::span<const double> estimate,
                              std::span<const NodeId> regular_set) {
    detail::check_metric_inputs(exact, estimate, regular_set);
    if (regular_set.empty()) return 0.0;
    const auto a = detail::rank_positions(exact, regular_set);
    const auto b = detail::rank_positions(estimate, regular_set);
    double total = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        total += std::abs(static_cast<double>(a[k]) - static_cast<double>(b[k]));
    return total / static_cast<double>(regular_set.size());
}

/// Absent entries become NaN; metrics only read regular entries.
inline std::vector<double> dense_values(std::span<const std::optional<double>> values) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i].value_or(std::nan(""));
    return out;
}

// ---------------------------------------------------------------------------

struct ErrorReport {
    std::vector<double> e_dev;                 // e_dev[t - 1] after round t
    std::vector<double> e_rank;
    std::vector<NodeId> estimated_argmax;      // per round
    std::size_t rounds = 0;
    StoppingReason stopping_reason = StoppingReason::Converged;
    NodeId exact_argmax = 0;
    NodeId mpa_argmax = 0;
    double degree_rank_error = 0.0;
    double eigen_rank_error = 0.0;
    std::vector<std::optional<double>> exact;
    std::vector<std::optional<double>> estimate;  // final round
};

inline ErrorReport compare_run(const WeightedGraph& graph, std::span<const NodeId> zero_set,
                               const StoppingRule& rule = {}, const SolverOptions& options = {}) {
    const auto exact = hic_all_exact(graph, zero_set, options);
    const auto run = run_general_mpa(graph, zero_set, rule);
    const auto regular = StubbornMask(graph, zero_set).regular_nodes();
    const auto truth = dense_values(exact.hic);

    ErrorReport report;
    for (const auto& row : run.timeline) {
        const auto est = dense_values(row);
        report.e_dev.push_back(mean_deviation_error(truth, est, regular));
        report.e_rank.push_back(mean_rank_error(truth, est, regular));
        report.estimated_argmax.push_back(require_argmax(row));
    }
    report.rounds = run.result.rounds_or_solves;
    report.stopping_reason = run.result.stopping_reason;
    report.exact_argmax = exact.argmax_node;
    report.mpa_argmax = run.result.argmax_node;
    report.degree_rank_error = mean_rank_error(truth, degree_centrality(graph), regular);
    report.eigen_rank_error = mean_rank_error(truth, eigenvector_centrality(graph), regular);
    report.exact = exact.hic;
    report.estimate = run.result.hic;
    return report;
}

/// Rounds to 12 significant digits for printing.
inline double round_sig12(double v) {
    if (!std::isfinite(v) || v == 0.0) return v;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

inline void write_error_csv(std::ostream& out, const ErrorReport& report) {
    out << "t,e_dev,e_rank\n";
    char buf[80];
    for (std::size_t t = 0; t < report.e_dev.size(); ++t) {
        std::snprintf(buf, sizeof buf, "%zu,%.12g,%.12g\n", t + 1, report.e_dev[t], report.e_rank[t]);
        out << buf;
    }
}

inline nlohmann::ordered_json error_summary_json(const ErrorReport& report) {
    nlohmann::ordered_json j;
    j["exact_argmax"] = report.exact_argmax;
    j["mpa_argmax"] = report.mpa_argmax;
    j["degree_rank_error"] = round_sig12(report.degree_rank_error);
    j["eigen_rank_error"] = round_sig12(report.eigen_rank_error);
    j["rounds"] = report.rounds;
    j["stopping_reason"] = std::string(to_string(report.stopping_reason));
    j["final_e_dev"] = round_sig12(report.e_dev.empty() ? 0.0 : report.e_dev.back());
    j["final_e_rank"] = round_sig12(report.e_rank.empty() ? 0.0 : report.e_rank.back());
    return j;
}

} // namespace hic

#pragma once

// Ground truth for the influence centrality: conductance-normalised averaging
// dynamics, harmonic extension by direct solve, and per-node centrality by one
// solve per candidate source.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hic/error.hpp"
#include "hic/graph.hpp"
#include "hic/result.hpp"

namespace hic {

struct SolverOptions {
    double residual_tol = 1e-10;
    /// Regular-node count above which the averaging dynamics replace the dense LU.
    std::size_t dense_limit = 2000;
    double iterative_tol = 1e-10;
    std::size_t max_sweeps = 10'000'000;
};

/// Row-stochastic averaging weights: regular rows are C_ij / sum_k C_ik,
/// stubborn rows are identically zero.
class StochasticSystem {
public:
    struct Entry {
        NodeId node;
        double weight;
    };

    StochasticSystem() = default;

    StochasticSystem(const WeightedGraph& graph, std::span<const NodeId> stubborn)
        : rows_(graph.node_count()), stubborn_(graph.node_count(), 0) {
        for (auto s : stubborn) {
            require_node(graph, s);
            stubborn_[s] = 1;
        }
        for (NodeId i = 0; i < graph.node_count(); ++i) {
            if (stubborn_[i]) {
                stubborn_set_.push_back(i);
                continue;
            }
            regular_set_.push_back(i);
            const double total = graph.weighted_degree(i);
            for (const auto& nb : graph.neighbors(i))
                rows_[i].push_back({nb.node, graph.edge(nb.edge).conductance / total});
        }
    }

    std::size_t node_count() const noexcept { return rows_.size(); }
    std::span<const Entry> row(NodeId i) const { return rows_.at(i); }
    bool is_stubborn(NodeId i) const { return stubborn_.at(i) != 0; }
    const std::vector<NodeId>& regular_set() const noexcept { return regular_set_; }
    const std::vector<NodeId>& stubborn_set() const noexcept { return stubborn_set_; }

    double weight(NodeId i, NodeId j) const {
        for (const auto& entry : row(i))
            if (entry.node == j) return entry.weight;
        return 0.0;
    }

private:
    std::vector<std::vector<Entry>> rows_;
    std::vector<char> stubborn_;
    std::vector<NodeId> regular_set_;
    std::vector<NodeId> stubborn_set_;
};

inline StochasticSystem build_system(const WeightedGraph& graph, std::span<const NodeId> stubborn) {
    require_connected(graph);
    if (stubborn.empty()) throw Error(ErrorKind::EmptyStubbornSet, "at least one stubborn node is required");
    return StochasticSystem(graph, stubborn);
}

/// One synchronous averaging round: regular entries become sum_j Q_ij x_j,
/// stubborn entries are copied.
inline std::vector<double> dynamics_step(const StochasticSystem& system, std::span<const double> x) {
    if (x.size() != system.node_count())
        throw Error(ErrorKind::DimensionMismatch, "opinion vector has " + std::to_string(x.size()) +
                                                      " entries, system has " + std::to_string(system.node_count()));
    std::vector<double> next(x.begin(), x.end());
    for (auto i : system.regular_set()) {
        double acc = 0.0;
        for (const auto& entry : system.row(i)) acc += entry.weight * x[entry.node];
        next[i] = acc;
    }
    return next;
}

/// Voltages with S0 held at 0 and the unit-anchored node at 1.
struct VoltageProfile {
    std::vector<double> values;
    double residual = 0.0;  // inf-norm of (I - Q11) x_R - Q12 x_S

    double operator[](NodeId i) const { return values.at(i); }
    double sum() const {
        double total = 0.0;
        for (auto v : values) total += v;
        return total;
    }
};

namespace detail {

inline double harmonic_residual(const StochasticSystem& system, std::span<const double> x) {
    double worst = 0.0;
    for (auto i : system.regular_set()) {
        double acc = 0.0;
        for (const auto& entry : system.row(i)) acc += entry.weight * x[entry.node];
        worst = std::max(worst, std::abs(x[i] - acc));
    }
    return worst;
}

inline std::vector<double> solve_dense(const StochasticSystem& system, std::span<const double> anchored) {
    const auto& regular = system.regular_set();
    const auto m = static_cast<Eigen::Index>(regular.size());
    std::vector<Eigen::Index> local(system.node_count(), -1);
    for (Eigen::Index k = 0; k < m; ++k) local[regular[k]] = k;

    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        for (const auto& entry : system.row(regular[k])) {
            if (local[entry.node] >= 0)
                a(k, local[entry.node]) -= entry.weight;
            else
                b(k) += entry.weight * anchored[entry.node];
        }
    }
    const Eigen::VectorXd sol = a.partialPivLu().solve(b);

    std::vector<double> x(anchored.begin(), anchored.end());
    for (Eigen::Index k = 0; k < m; ++k) x[regular[k]] = sol(k);
    return x;
}

inline std::vector<double> solve_by_dynamics(const StochasticSystem& system, std::span<const double> anchored,
                                             const SolverOptions& options) {
    std::vector<double> x(anchored.begin(), anchored.end());
    for (std::size_t sweep = 0; sweep < options.max_sweeps; ++sweep) {
        auto next = dynamics_step(system, x);
        double change = 0.0;
        for (NodeId i = 0; i < x.size(); ++i) change = std::max(change, std::abs(next[i] - x[i]));
        x = std::move(next);
        if (change < options.iterative_tol) return x;
    }
    throw Error(ErrorKind::NoConvergence, "averaging dynamics did not settle");
}

} // namespace detail

/// Unique profile that matches the anchors and is harmonic at every regular
/// node.
inline VoltageProfile harmonic_extension(const WeightedGraph& graph, const StubbornConfig& config,
                                         const SolverOptions& options = {}) {
    config.check(graph);
    if (!config.one_node) throw Error(ErrorKind::InvalidConfig, "harmonic extension needs a unit-anchored node");
    require_connected(graph);

    std::vector<NodeId> anchors = config.zero_set;
    anchors.push_back(*config.one_node);
    const StochasticSystem system(graph, anchors);

    std::vector<double> anchored(graph.node_count(), 0.0);
    anchored[*config.one_node] = 1.0;

    VoltageProfile profile;
    profile.values = system.regular_set().size() <= options.dense_limit
                         ? detail::solve_dense(system, anchored)
                         : detail::solve_by_dynamics(system, anchored, options);
    profile.residual = detail::harmonic_residual(system, profile.values);
    if (!(profile.residual <= options.residual_tol))
        throw Error(ErrorKind::SingularSystem, "harmonic residual " + std::to_string(profile.residual) +
                                                   " exceeds tolerance");
    return profile;
}

/// w0 + (w1 - w0) W(i): the profile with anchors moved to w0 (on S0) and w1.
inline std::vector<double> voltage_rescale(const VoltageProfile& profile, double w0, double w1) {
    std::vector<double> out(profile.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = w0 + (w1 - w0) * profile.values[i];
    return out;
}

/// Sum of all voltages, the source's own unit value included.
inline double hic_exact(const WeightedGraph& graph, std::span<const NodeId> zero_set, NodeId ell,
                        const SolverOptions& options = {}) {
    return harmonic_extension(graph, StubbornConfig{{zero_set.begin(), zero_set.end()}, ell}, options).sum();
}

inline HicResult hic_all_exact(const WeightedGraph& graph, std::span<const NodeId> zero_set,
                               const SolverOptions& options = {}) {
    require_connected(graph);
    if (zero_set.empty()) throw Error(ErrorKind::EmptyStubbornSet, "at least one zero-anchored node is required");
    const StubbornMask mask(graph, zero_set);

    HicResult result;
    result.hic.assign(graph.node_count(), std::nullopt);
    for (NodeId ell = 0; ell < graph.node_count(); ++ell) {
        if (mask[ell]) continue;
        result.hic[ell] = hic_exact(graph, zero_set, ell, options);
        ++result.rounds_or_solves;
    }
    result.argmax_node = require_argmax(result.hic);
    result.stopping_reason = StoppingReason::Exact;
    return result;
}

} // namespace hic

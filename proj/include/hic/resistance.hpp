#pragma once

#include <optional>
#include <span>
#include <string>

#include "hic/exact_solver.hpp"
#include "hic/graph.hpp"

namespace hic {

/// Effective resistance, with "no connecting path" as its own state instead
/// of a floating-point infinity.
class EffectiveResistance {
public:
    static EffectiveResistance infinite() noexcept { return EffectiveResistance{}; }
    static EffectiveResistance finite(double ohms) noexcept { return EffectiveResistance{ohms}; }

    bool is_infinite() const noexcept { return !ohms_.has_value(); }
    double value() const {
        if (!ohms_) throw Error(ErrorKind::InvalidConfig, "effective resistance is infinite");
        return *ohms_;
    }
    /// Reciprocal, with infinity mapped to zero conductance.
    double conductance() const noexcept { return ohms_ ? 1.0 / *ohms_ : 0.0; }

    std::string str() const { return ohms_ ? std::to_string(*ohms_) : std::string("inf"); }

private:
    EffectiveResistance() = default;
    explicit EffectiveResistance(double ohms) : ohms_(ohms) {}
    std::optional<double> ohms_;
};

/// Resistance between the glued source set and target: the reciprocal of the
/// current entering at the target when sources sit at 0 and the target at 1.
inline EffectiveResistance effective_resistance(const WeightedGraph& graph, std::span<const NodeId> source_set,
                                                NodeId target, const SolverOptions& options = {}) {
    require_node(graph, target);
    if (source_set.empty()) throw Error(ErrorKind::EmptySourceSet, "source set is empty");
    for (auto s : source_set) {
        require_node(graph, s);
        if (s == target) throw Error(ErrorKind::InvalidConfig, "target belongs to the source set");
    }

    // Only the target's component carries current.
    const auto comps = connected_components(graph);
    const auto home = comps.label[target];
    std::vector<NodeId> members;
    for (NodeId i = 0; i < graph.node_count(); ++i)
        if (comps.label[i] == home) members.push_back(i);
    const auto sub = induced_subgraph(graph, members);

    StubbornConfig config;
    for (auto s : source_set)
        if (auto local = sub.local(s)) config.zero_set.push_back(*local);
    if (config.zero_set.empty()) return EffectiveResistance::infinite();
    const NodeId local_target = *sub.local(target);
    config.one_node = local_target;

    const auto voltage = harmonic_extension(sub.graph, config, options);
    double current = 0.0;
    for (const auto& nb : sub.graph.neighbors(local_target))
        current += (1.0 - voltage[nb.node]) * sub.graph.edge(nb.edge).conductance;
    return EffectiveResistance::finite(1.0 / current);
}

} // namespace hic

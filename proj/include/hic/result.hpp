#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hic/error.hpp"
#include "hic/graph.hpp"

namespace hic {

enum class StoppingReason { Exact, Converged, MaxIters };

constexpr std::string_view to_string(StoppingReason r) noexcept {
    switch (r) {
    case StoppingReason::Exact: return "exact";
    case StoppingReason::Converged: return "converged";
    case StoppingReason::MaxIters: return "max_iters";
    }
    return "Unknown";
}

/// Values within this relative distance of the maximum count as tied, so the
/// exact solver and the message-passing routes pick the same node despite
/// last-bit rounding differences.
inline constexpr double kTieTolerance = 1e-9;

/// Smallest id among the (near-)maximal present entries.
inline std::optional<NodeId> argmax_smallest_id(std::span<const std::optional<double>> values) {
    std::optional<double> best;
    for (const auto& v : values)
        if (v && (!best || *v > *best)) best = v;
    if (!best) return std::nullopt;
    const double cutoff = *best - kTieTolerance * std::max(1.0, std::abs(*best));
    for (NodeId i = 0; i < values.size(); ++i)
        if (values[i] && *values[i] >= cutoff) return i;
    return std::nullopt;
}

/// Per-node centrality; entries for zero-anchored nodes are absent.
struct HicResult {
    std::vector<std::optional<double>> hic;
    NodeId argmax_node = 0;
    std::size_t rounds_or_solves = 0;
    StoppingReason stopping_reason = StoppingReason::Exact;

    double max_value() const { return hic.at(argmax_node).value(); }
};

inline NodeId require_argmax(std::span<const std::optional<double>> values) {
    auto best = argmax_smallest_id(values);
    if (!best) throw Error(ErrorKind::NoRegularNodes, "every node is zero-anchored");
    return *best;
}

} // namespace hic

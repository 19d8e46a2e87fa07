#pragma once

// Command implementations behind the `hic` tool. Each takes a fully parsed
// RunConfig and returns the process exit status: 0 success, 2 usage or parse
// problems, 3 a graph the requested computation cannot accept, 1 anything
// else. Diagnostics go to `err`.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hic/error.hpp"
#include "hic/exact_solver.hpp"
#include "hic/experiments.hpp"
#include "hic/general_mpa.hpp"
#include "hic/graph.hpp"
#include "hic/graph_io.hpp"
#include "hic/osap.hpp"
#include "hic/tree_mpa.hpp"

namespace hic::cli {

enum class Command { Exact, TreeMpa, Mpa, Osap, Gen, Compare };
enum class HicConvention { WithSelfTerm, WithoutSelfTerm };

struct RunConfig {
    Command command = Command::Exact;
    std::string graph_path;
    std::vector<NodeId> stubborn_zero;
    std::optional<NodeId> source;
    double tol = 1e-5;
    std::size_t max_iters = 10'000;
    double residual_tol = 1e-10;
    std::uint64_t seed = 0;
    std::string output;         // empty: write to stdout
    std::string timeline_path;  // mpa only
    std::string csv_path;       // compare only
    HicConvention hic_convention = HicConvention::WithSelfTerm;

    // gen, and compare without --graph
    std::string gen_kind = "er";  // er | ws | tree | line | star
    std::size_t n = 15;
    double p = 0.2;
    std::size_t k = 4;
    double beta = 0.1;
    // compare without --stubborn-zero: this many nodes drawn with `seed`
    std::size_t stubborn_count = 3;
};

namespace detail {

inline int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::InvalidConfig:
    case ErrorKind::InvalidSpec:
    case ErrorKind::UnknownNode:
    case ErrorKind::EmptyStubbornSet:
    case ErrorKind::EmptySourceSet:
    case ErrorKind::TooFewStubborn:
    case ErrorKind::DimensionMismatch:
        return 2;
    case ErrorKind::InvalidGraph:
    case ErrorKind::DisconnectedGraph:
    case ErrorKind::NotATree:
    case ErrorKind::NoRegularNodes:
        return 3;
    default:
        return 1;
    }
}

inline double convention_offset(const RunConfig& config) {
    return config.hic_convention == HicConvention::WithoutSelfTerm ? 1.0 : 0.0;
}

inline nlohmann::ordered_json hic_map(const std::vector<std::optional<double>>& values, double offset) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (NodeId i = 0; i < values.size(); ++i)
        if (values[i]) j[std::to_string(i)] = round_sig12(*values[i] - offset);
    return j;
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
    if (path.empty()) {
        fallback << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorKind::InvalidConfig, "cannot write '" + path + "'");
    file << text;
}

inline void write_json(const RunConfig& config, const nlohmann::ordered_json& j, std::ostream& out) {
    write_text(config.output, j.dump(2) + "\n", out);
}

inline WeightedGraph load_graph(const RunConfig& config) {
    if (config.graph_path.empty()) throw Error(ErrorKind::InvalidConfig, "--graph is required");
    return read_graph_file(config.graph_path);
}

inline StoppingRule stopping_rule(const RunConfig& config) {
    StoppingRule rule{config.tol, config.max_iters};
    rule.check();
    return rule;
}

inline SolverOptions solver_options(const RunConfig& config) {
    SolverOptions options;
    options.residual_tol = config.residual_tol;
    return options;
}

inline GeneratorSpec generator_spec(const RunConfig& config) {
    GeneratorSpec spec;
    spec.seed = config.seed;
    const auto& kind = config.gen_kind;
    if (kind == "er")
        spec.kind = ErdosRenyi{config.n, config.p};
    else if (kind == "ws")
        spec.kind = WattsStrogatz{config.n, config.k, config.beta};
    else if (kind == "tree")
        spec.kind = RandomTree{config.n};
    else if (kind == "line")
        spec.kind = Line{config.n};
    else if (kind == "star")
        spec.kind = Star{config.n};
    else
        throw Error(ErrorKind::InvalidSpec, "unknown generator '" + kind + "'");
    spec.check();
    return spec;
}

} // namespace detail

inline int cmd_exact(const RunConfig& config, std::ostream& out) {
    const auto graph = detail::load_graph(config);
    const auto options = detail::solver_options(config);
    const double offset = detail::convention_offset(config);
    if (config.stubborn_zero.empty()) throw Error(ErrorKind::EmptyStubbornSet, "--stubborn-zero is required");
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    if (config.source) {
        const double value = hic_exact(graph, config.stubborn_zero, *config.source, options);
        j[std::to_string(*config.source)] = round_sig12(value - offset);
    } else {
        j = detail::hic_map(hic_all_exact(graph, config.stubborn_zero, options).hic, offset);
    }
    detail::write_json(config, j, out);
    return 0;
}

inline int cmd_tree_mpa(const RunConfig& config, std::ostream& out) {
    const auto graph = detail::load_graph(config);
    const auto run = run_tree_mpa(graph, config.stubborn_zero);
    nlohmann::ordered_json j;
    j["hic"] = detail::hic_map(run.result.hic, detail::convention_offset(config));
    j["argmax"] = run.result.argmax_node;
    j["rounds"] = run.stats.rounds;
    j["messages_sent"] = run.stats.messages_sent;
    detail::write_json(config, j, out);
    return 0;
}

inline int cmd_mpa(const RunConfig& config, std::ostream& out) {
    const auto rule = detail::stopping_rule(config);
    const auto graph = detail::load_graph(config);
    const auto run = run_general_mpa(graph, config.stubborn_zero, rule);
    const double offset = detail::convention_offset(config);
    nlohmann::ordered_json j;
    j["hic"] = detail::hic_map(run.result.hic, offset);
    j["argmax"] = run.result.argmax_node;
    j["rounds"] = run.result.rounds_or_solves;
    j["stopping_reason"] = std::string(to_string(run.result.stopping_reason));
    if (run.result.stopping_reason == StoppingReason::MaxIters)
        j["warning"] = "estimates did not settle within max_iters rounds";
    if (!config.timeline_path.empty()) {
        auto timeline = run.timeline;
        for (auto& row : timeline)
            for (auto& v : row)
                if (v) *v -= offset;
        std::ostringstream csv;
        write_timeline_csv(csv, timeline);
        detail::write_text(config.timeline_path, csv.str(), out);
    }
    detail::write_json(config, j, out);
    return 0;
}

/// Trees use decomposition plus pruning; other graphs take the argmax of one
/// converged iterative run.
inline int cmd_osap(const RunConfig& config, std::ostream& out) {
    const auto graph = detail::load_graph(config);
    if (config.stubborn_zero.empty()) throw Error(ErrorKind::EmptyStubbornSet, "--stubborn-zero is required");
    nlohmann::ordered_json j;
    if (is_tree(graph)) {
        const auto result = osap_tree(graph, config.stubborn_zero);
        j["argmax"] = result.argmax;
        j["value"] = round_sig12(result.value - detail::convention_offset(config));
        j["candidates_considered"] = result.candidates_considered;
        j["method"] = "tree";
    } else {
        const auto run = run_general_mpa(graph, config.stubborn_zero, detail::stopping_rule(config));
        j["argmax"] = run.result.argmax_node;
        j["value"] = round_sig12(run.result.max_value() - detail::convention_offset(config));
        j["candidates_considered"] = graph.node_count() - StubbornMask(graph, config.stubborn_zero).count();
        j["method"] = "mpa";
        j["stopping_reason"] = std::string(to_string(run.result.stopping_reason));
    }
    detail::write_json(config, j, out);
    return 0;
}

inline int cmd_gen(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const auto generated = generate(detail::generator_spec(config));
    std::ostringstream text;
    write_graph(text, generated.graph);
    detail::write_text(config.output, text.str(), out);
    auto& info = config.output.empty() ? err : out;
    info << "nodes " << generated.graph.node_count() << " edges " << generated.graph.edge_count() << " attempts "
         << generated.attempts << '\n';
    return 0;
}

inline int cmd_compare(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const auto rule = detail::stopping_rule(config);
    WeightedGraph graph;
    std::size_t attempts = 1;
    if (!config.graph_path.empty()) {
        graph = detail::load_graph(config);
    } else {
        auto generated = generate(detail::generator_spec(config));
        graph = std::move(generated.graph);
        attempts = generated.attempts;
    }
    auto zero = config.stubborn_zero;
    if (zero.empty()) zero = choose_stubborn(graph.node_count(), config.stubborn_count, config.seed);

    const auto report = compare_run(graph, zero, rule, detail::solver_options(config));
    auto j = error_summary_json(report);
    j["stubborn_zero"] = zero;
    j["nodes"] = graph.node_count();
    j["edges"] = graph.edge_count();
    j["generation_attempts"] = attempts;
    if (!config.csv_path.empty()) {
        std::ostringstream csv;
        write_error_csv(csv, report);
        detail::write_text(config.csv_path, csv.str(), out);
    }
    if (attempts > 1) err << "generator redrew " << attempts - 1 << " disconnected sample(s)\n";
    detail::write_json(config, j, out);
    return 0;
}

inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        switch (config.command) {
        case Command::Exact: return cmd_exact(config, out);
        case Command::TreeMpa: return cmd_tree_mpa(config, out);
        case Command::Mpa: return cmd_mpa(config, out);
        case Command::Osap: return cmd_osap(config, out);
        case Command::Gen: return cmd_gen(config, out, err);
        case Command::Compare: return cmd_compare(config, out, err);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return detail::exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

} // namespace hic::cli

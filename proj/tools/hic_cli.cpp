// hic: harmonic influence centrality from the command line.
//
//   hic exact    --graph g.txt --stubborn-zero 0,4 [--source 2]
//   hic tree-mpa --graph g.txt --stubborn-zero 0
//   hic mpa      --graph g.txt --stubborn-zero 0,1,2 [--tol 1e-5] [--max-iters N] [--timeline t.csv]
//   hic osap     --graph g.txt --stubborn-zero 0,4
//   hic gen      er --n 15 --p 0.2 --seed 7 [-o g.txt]
//   hic compare  (--graph g.txt | --preset er15 | er --n 500 --p 0.1) [--stubborn-count 3] [--csv e.csv]

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"

#include "hic/cli.hpp"

namespace {

using hic::cli::Command;
using hic::cli::HicConvention;
using hic::cli::RunConfig;

void add_common(CLI::App& sub, RunConfig& config) {
    sub.add_option("--graph,-g", config.graph_path, "Graph file ('n <count>' then 'e <u> <v> [conductance]')");
    sub.add_option("--stubborn-zero,-z", config.stubborn_zero, "Zero-anchored node ids, comma separated")
        ->delimiter(',');
    sub.add_option("--output,-o", config.output, "Write the result here instead of stdout");
    sub.add_option("--hic-convention", config.hic_convention,
                   "with-self-term (default) counts the source's own unit voltage; paper-eq4 leaves it out")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, HicConvention>{{"with-self-term", HicConvention::WithSelfTerm},
                                                 {"paper-eq4", HicConvention::WithoutSelfTerm}}));
}

void add_iteration(CLI::App& sub, RunConfig& config) {
    sub.add_option("--tol", config.tol, "Stop once the mean absolute change of estimates falls below this");
    sub.add_option("--max-iters", config.max_iters, "Round cap");
}

void add_generator(CLI::App& sub, RunConfig& config, bool kind_required) {
    auto* kind = sub.add_option("kind", config.gen_kind, "er | ws | tree | line | star")
                     ->check(CLI::IsMember({"er", "ws", "tree", "line", "star"}));
    if (kind_required) kind->required();
    sub.add_option("--n", config.n, "Node count");
    sub.add_option("--p", config.p, "Erdos-Renyi edge probability");
    sub.add_option("--k", config.k, "Watts-Strogatz ring degree (even)");
    sub.add_option("--beta", config.beta, "Watts-Strogatz rewiring probability");
    sub.add_option("--seed", config.seed, "Random seed (default: $HIC_SEED or 0)");
}

} // namespace

int main(int argc, char** argv) {
    RunConfig config;
    if (const char* env = std::getenv("HIC_SEED")) {
        try {
            config.seed = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "error: HIC_SEED is not an unsigned integer\n";
            return 2;
        }
    }

    CLI::App app{"Harmonic influence centrality with zero-anchored (stubborn) nodes"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "hic 1.0.0");

    auto* exact = app.add_subcommand("exact", "Exact centrality by one linear solve per node");
    add_common(*exact, config);
    exact->add_option("--source,-s", config.source, "Only report this node");
    exact->add_option("--residual-tol", config.residual_tol, "Largest accepted harmonic residual");

    auto* tree = app.add_subcommand("tree-mpa", "Exact message passing on a tree");
    add_common(*tree, config);

    auto* mpa = app.add_subcommand("mpa", "Iterative message passing on any connected graph");
    add_common(*mpa, config);
    add_iteration(*mpa, config);
    mpa->add_option("--timeline", config.timeline_path, "CSV of per-round estimates (t,node_id,estimate)");

    auto* osap = app.add_subcommand("osap", "Best node to anchor at 1");
    add_common(*osap, config);
    add_iteration(*osap, config);

    auto* gen = app.add_subcommand("gen", "Write a generated graph file");
    gen->add_option("--output,-o", config.output, "Graph file to write (default stdout)");
    add_generator(*gen, config, true);

    auto* compare = app.add_subcommand("compare", "Per-round error of iterative message passing vs exact");
    add_common(*compare, config);
    add_iteration(*compare, config);
    add_generator(*compare, config, false);
    compare->add_option("--stubborn-count", config.stubborn_count,
                        "Without --stubborn-zero, draw this many zero-anchored nodes using --seed");
    compare->add_option("--csv", config.csv_path, "CSV of t,e_dev,e_rank");
    compare->add_option_function<std::string>(
                "--preset",
                [&](const std::string& name) {
                    config.gen_kind = "er";
                    if (name == "er15") {
                        config.n = 15;
                        config.p = 0.2;
                    } else if (name == "er500-sparse") {
                        config.n = 500;
                        config.p = 0.012;
                    } else {
                        config.n = 500;
                        config.p = 0.1;
                    }
                },
                "er15 | er500-sparse | er500-dense")
        ->check(CLI::IsMember({"er15", "er500-sparse", "er500-dense"}));
    compare->footer("Error averages run over the non-anchored nodes, where the centrality is defined.");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (exact->parsed())
        config.command = Command::Exact;
    else if (tree->parsed())
        config.command = Command::TreeMpa;
    else if (mpa->parsed())
        config.command = Command::Mpa;
    else if (osap->parsed())
        config.command = Command::Osap;
    else if (gen->parsed())
        config.command = Command::Gen;
    else
        config.command = Command::Compare;

    return hic::cli::run(config, std::cout, std::cerr);
}

// Command-line front end: computes extended distances between measures of
// variable mass, runs metric-axiom property suites, searches for obstruction
// witnesses, and evaluates warped Dirac-cone distances.

#include <CLI11.hpp>

#include "masscone/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"masscone: extended Wasserstein-type distances for variable-mass measures"};
    app.require_subcommand(1);

    masscone::cli::RunConfig config;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", config.out_path, "Report path (stdout when omitted)");
        cmd->add_option("--format", config.format, "Report format: json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--seed", config.seed, "Random seed (fixed default for reproducibility)");
        cmd->add_option("--tolerance", config.tolerance, "Comparison tolerance");
        cmd->add_flag("--no-timestamp", config.no_timestamp,
                      "Omit the timestamp field (byte-identical reruns)");
        cmd->add_option("--threads", config.threads,
                        "Worker threads (default: MASSCONE_THREADS or hardware)");
    };

    auto* dist = app.add_subcommand("dist", "Distance between two measures under a metric spec");
    dist->add_option("--metric", config.metric_path, "Metric spec (.toml or .json)")->required();
    dist->add_option("--a", config.measure_a, "First measure (.json or .csv)")->required();
    dist->add_option("--b", config.measure_b, "Second measure (.json or .csv)")->required();
    add_common(dist);

    auto* axioms = app.add_subcommand("axioms", "Metric-axiom property suite");
    axioms->add_option("--metric", config.metric_path, "Metric spec (.toml or .json)")->required();
    axioms->add_option("--trials", config.trials, "Number of sampled triples");
    axioms->add_option("--dim", config.dim, "Sampler dimension (non-domain metrics)");
    add_common(axioms);

    auto* obstruct = app.add_subcommand("obstruct", "Obstruction searches and extension tests");
    obstruct->add_option("--config", config.config_path, "Obstruction config (.toml or .json)")
        ->required();
    add_common(obstruct);

    auto* warped = app.add_subcommand("warped", "Warped distance on the Dirac cone");
    warped->add_option("--config", config.config_path, "Warped run config (.toml or .json)")
        ->required();
    add_common(warped);

    auto* probe = app.add_subcommand("probe", "Fiber scaling probe: estimate f(m)");
    probe->add_option("--metric", config.metric_path, "Metric spec (.toml or .json)")->required();
    probe->add_option("--mass", config.probe_mass, "Fiber mass m");
    probe->add_option("--pairs", config.probe_pairs, "Number of probe pairs");
    probe->add_option("--dim", config.dim, "Probe dimension (non-warped metrics)");
    add_common(probe);

    CLI11_PARSE(app, argc, argv);

    if (dist->parsed()) config.command = masscone::cli::Command::dist;
    if (axioms->parsed()) config.command = masscone::cli::Command::axioms;
    if (obstruct->parsed()) config.command = masscone::cli::Command::obstruct;
    if (warped->parsed()) config.command = masscone::cli::Command::warped;
    if (probe->parsed()) config.command = masscone::cli::Command::probe;

    return masscone::cli::run(config);
}

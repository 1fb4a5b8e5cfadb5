#pragma once

#include <cstdint>
#include <string>

#include "masscone/rng.hpp"

namespace masscone::cli {

enum class Command { dist, axioms, obstruct, warped, probe };

/// One CLI invocation. Exit status contract: 0 clean, 1 witnesses found
/// (or an inconsistent fiber probe), 2 input or configuration errors.
struct RunConfig {
    Command command = Command::dist;
    std::string metric_path;     // dist, axioms, probe
    std::string config_path;     // obstruct, warped
    std::string measure_a;       // dist
    std::string measure_b;       // dist
    std::string out_path;        // empty = stdout
    std::string format = "json"; // "json" or "csv" (csv written alongside the json)
    std::uint64_t trials = 10000;
    std::uint64_t seed = kDefaultSeed;
    double tolerance = 1e-9;
    int dim = 1;                 // sampler / probe dimension
    double probe_mass = 1.0;     // probe
    std::size_t probe_pairs = 8; // probe
    bool no_timestamp = false;   // suppress the timestamp field for byte-identical reports
    int threads = 0;             // 0 = MASSCONE_THREADS or hardware default
};

int run(const RunConfig& config);

} // namespace masscone::cli

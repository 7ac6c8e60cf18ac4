#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "opflab/serialize.hpp"

namespace opflab {

// One run's knobs. Flags override config-file values, which override the
// OPFLAB_SEED environment fallback and the embedded defaults.
struct RunConfig {
    std::uint64_t seed = 20240001;
    int trials = 200;
    int assoc_trials = 1000;
    int d = 2;
    int n_max = 3;
    int a = 2, b = 2, c = 2;           // star dimensions
    int d_min = 2, d_max = 3;          // dims ranges
    int n_min = 1, n_range_max = 2;
    std::string star = "toy";
    std::string theory = "quantum";
    std::string kind = "licit";
    std::string out_path;
    std::string format = "json";       // "json" or "table"
    std::string replay_path;
    std::map<std::string, double> tol_overrides;

    void apply_tolerances() const;
    Json echo() const;
};

// `key = value` lines, '#' comments; unknown keys rejected.
RunConfig load_config_file(const std::string& path, RunConfig base);

struct CheckRecord {
    std::string name;
    std::string anchor;  // entry of docs/checks.md, or "plumbing"
    bool pass = false;
    double metric = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct Report {
    std::string command;
    Json config_echo;
    int version = 1;
    std::vector<CheckRecord> records;
    Json payload;        // command-specific: probe report, residual rows, ...
    double wall_ms = 0;  // table output only; never serialized

    bool all_pass() const;
};

// Deterministic function of (command, config, seed): no timing inside.
Json report_to_json(const Report& r);
std::string render_table(const Report& r);

Report run_dims(const RunConfig& cfg);
Report run_verify(const RunConfig& cfg);
Report run_probe(const RunConfig& cfg);
Report run_estimate(const RunConfig& cfg);
Report run_dynamics(const RunConfig& cfg);
Report run_distinguish(const RunConfig& cfg);

}  // namespace opflab

#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "slskit/framework.hpp"
#include "slskit/lti_system.hpp"

namespace slskit::cli {

/// Flat key=value run configuration. Unknown keys are rejected; numeric
/// values fail with the offending line and key named.
struct RunConfig {
    std::string system = "chain:10";    // chain:N | chain-measured:N,SIGMA | files:DIR
    std::string algorithm = "sls-sf";   // sls-sf | sls-of-lqg | iop
    int T = 20;
    int horizon = 25;
    std::string noise = "none";         // terms joined by '+': none |
                                        // impulse:T,NODE,MAG | gauss:SIGMA,SEED |
                                        // measgauss:SEED
    double alpha = 1.0;                 // objective multiplier
    double l1_phi_x = 0.0;              // elementwise l1 weights (sls-sf)
    double l1_phi_u = 0.0;
    double lqg_process_weight = 0.02;   // assumed per-state process noise (sls-of-lqg)
    double lqg_meas_weight = 0.1;       // assumed per-measurement noise
    std::string outdir = "out";
};

RunConfig parse_config_text(const std::string& text, const std::string& source_name);
RunConfig load_config_file(const std::filesystem::path& path);
std::string config_to_text(const RunConfig& cfg);

/// Canned configurations for the chain experiments.
RunConfig demo_config(const std::string& name);
std::vector<std::string> demo_names();

LTISystem build_system(const RunConfig& cfg);
std::unique_ptr<NoiseModel> build_noise(const std::string& spec, const SystemDims& dims);

/// Synthesize per the config and write <outdir>/params.txt plus
/// <outdir>/config.txt; prints the objective value and solve diagnostics.
int cmd_synth(const RunConfig& cfg);

/// Simulate a previously synthesized controller: reads the parameter file,
/// writes per-signal CSVs (x, y, u, w, zbar) and log-magnitude heatmaps
/// (x, y, u), and prints a summary.
int cmd_simulate(const RunConfig& cfg, const std::filesystem::path& params_file);

/// Named experiment: cmd_synth followed by cmd_simulate on the canned config,
/// plus a state-feedback baseline comparison for chain-iop.
int cmd_demo(const std::string& name, const std::string& outdir_override = "");

/// Full command-line entry; maps errors onto exit codes 2 (configuration),
/// 3 (infeasible / unstable plant), 4 (numerical failure).
int run_cli(const std::vector<std::string>& args);

}  // namespace slskit::cli

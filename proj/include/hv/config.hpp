#pragma once

#include <string>

#include "hv/generators.hpp"
#include "hv/pipeline.hpp"

namespace hv {

/// Run configuration: measure source, parameters, output location.  Loaded
/// from JSON; every field has a default so short configs stay short.
struct ExperimentConfig {
    std::string measure_file;  // empty -> use the generator spec
    GeneratorSpec generator;
    StopParams stop;
    double b0_x = 0.0, b0_y = 0.0, b0_r = 1.0;
    bool check_assumptions = false;
    std::string out_dir = "out";
    uint64_t seed = 1;

    DiscreteMeasure load_measure() const;
    Ball b0() const { return Ball(cpx(b0_x, b0_y), b0_r); }
};

ExperimentConfig load_config(const std::string& path);
std::string canonical_dump(const ExperimentConfig& cfg);
uint64_t config_hash(const ExperimentConfig& cfg);

/// Reproducibility manifest written at the end of a run.
struct RunManifest {
    uint64_t cfg_hash = 0;
    std::string tool_version;
    std::vector<std::pair<std::string, double>> stage_seconds;
    std::vector<std::string> outputs;
};

void write_manifest(const std::string& path, const RunManifest& m);

}  // namespace hv

#include "hv/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hv {

using nlohmann::json;

namespace {

GeneratorSpec generator_from_json(const json& j) {
    GeneratorSpec g;
    g.kind = j.value("kind", g.kind);
    g.spacing = j.value("spacing", g.spacing);
    g.half_length = j.value("half_length", g.half_length);
    g.m = j.value("m", g.m);
    g.base_angle = j.value("base_angle", g.base_angle);
    g.c = j.value("c", g.c);
    g.window_radius = j.value("window_radius", g.window_radius);
    g.vertex_x = j.value("vertex_x", g.vertex_x);
    g.vertex_y = j.value("vertex_y", g.vertex_y);
    g.level = j.value("level", g.level);
    g.shape = j.value("shape", g.shape);
    g.amplitude = j.value("amplitude", g.amplitude);
    g.center = j.value("center", g.center);
    g.width = j.value("width", g.width);
    g.slope = j.value("slope", g.slope);
    g.period = j.value("period", g.period);
    g.eta = j.value("eta", g.eta);
    g.modes = j.value("modes", g.modes);
    g.seed = j.value("seed", g.seed);
    return g;
}

}  // namespace

DiscreteMeasure ExperimentConfig::load_measure() const {
    if (!measure_file.empty()) return read_measure(measure_file);
    return generate(generator);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("load_config: cannot open " + path);
    json j;
    f >> j;
    ExperimentConfig cfg;
    cfg.measure_file = j.value("measure_file", cfg.measure_file);
    if (j.contains("generator")) cfg.generator = generator_from_json(j["generator"]);
    if (j.contains("stop")) {
        const json& s = j["stop"];
        cfg.stop.delta = s.value("delta", cfg.stop.delta);
        cfg.stop.epsilon = s.value("epsilon", cfg.stop.epsilon);
        cfg.stop.alpha = s.value("alpha", cfg.stop.alpha);
        cfg.stop.theta = s.value("theta", cfg.stop.theta);
        cfg.stop.k = s.value("k", cfg.stop.k);
        cfg.stop.theta_exponent = s.value("theta_exponent", cfg.stop.theta_exponent);
        cfg.stop.quad_tol_scale = s.value("quad_tol_scale", cfg.stop.quad_tol_scale);
        cfg.stop.t_per_octave = s.value("t_per_octave", cfg.stop.t_per_octave);
        cfg.stop.t_max = s.value("t_max", cfg.stop.t_max);
        cfg.stop.t_min_factor = s.value("t_min_factor", cfg.stop.t_min_factor);
    }
    cfg.b0_x = j.value("b0_x", cfg.b0_x);
    cfg.b0_y = j.value("b0_y", cfg.b0_y);
    cfg.b0_r = j.value("b0_r", cfg.b0_r);
    cfg.check_assumptions = j.value("check_assumptions", cfg.check_assumptions);
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.stop.validate();
    return cfg;
}

std::string canonical_dump(const ExperimentConfig& cfg) {
    json j;
    j["measure_file"] = cfg.measure_file;
    j["generator"] = {{"kind", cfg.generator.kind},
                      {"spacing", cfg.generator.spacing},
                      {"half_length", cfg.generator.half_length},
                      {"m", cfg.generator.m},
                      {"base_angle", cfg.generator.base_angle},
                      {"c", cfg.generator.c},
                      {"window_radius", cfg.generator.window_radius},
                      {"vertex_x", cfg.generator.vertex_x},
                      {"vertex_y", cfg.generator.vertex_y},
                      {"level", cfg.generator.level},
                      {"shape", cfg.generator.shape},
                      {"amplitude", cfg.generator.amplitude},
                      {"center", cfg.generator.center},
                      {"width", cfg.generator.width},
                      {"slope", cfg.generator.slope},
                      {"period", cfg.generator.period},
                      {"eta", cfg.generator.eta},
                      {"modes", cfg.generator.modes},
                      {"seed", cfg.generator.seed}};
    j["stop"] = {{"delta", cfg.stop.delta},
                 {"epsilon", cfg.stop.epsilon},
                 {"alpha", cfg.stop.alpha},
                 {"theta", cfg.stop.theta},
                 {"k", cfg.stop.k},
                 {"theta_exponent", cfg.stop.theta_exponent},
                 {"quad_tol_scale", cfg.stop.quad_tol_scale},
                 {"t_per_octave", cfg.stop.t_per_octave},
                 {"t_max", cfg.stop.t_max},
                 {"t_min_factor", cfg.stop.t_min_factor}};
    j["b0"] = {cfg.b0_x, cfg.b0_y, cfg.b0_r};
    j["check_assumptions"] = cfg.check_assumptions;
    j["seed"] = cfg.seed;
    return j.dump();
}

uint64_t config_hash(const ExperimentConfig& cfg) {
    // FNV-1a over the canonical dump
    std::string s = canonical_dump(cfg);
    uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

void write_manifest(const std::string& path, const RunManifest& m) {
    json j;
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(m.cfg_hash));
    j["config_hash"] = hex;
    j["tool_version"] = m.tool_version;
    json stages = json::object();
    for (auto& [name, secs] : m.stage_seconds) stages[name] = secs;
    j["stage_seconds"] = stages;
    j["outputs"] = m.outputs;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_manifest: cannot open " + path);
    f << j.dump(2) << "\n";
}

}  // namespace hv

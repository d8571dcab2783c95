#pragma once

#include <cstdint>
#include <string>

#include "hv/models.hpp"
#include "hv/sampled.hpp"

namespace hv {

/// Parameters for the synthetic measure generators.  Every generator is a
/// deterministic function of its parameters and the seed.
struct GeneratorSpec {
    std::string kind;  // segment | spike | cantor | lipschitz-graph | perturbed-line
    double spacing = 1e-3;
    double half_length = 1.0;  // segment / graph domain half width
    // spike
    int m = 3;
    double base_angle = 0.0;
    double c = 1.0;
    double window_radius = 2.0;
    double vertex_x = 0.0, vertex_y = 0.0;
    // cantor
    int level = 3;
    // lipschitz-graph profile: amplitude * shape((t - center)/width), or a
    // sawtooth of the given slope and period when shape == "saw"
    std::string shape = "bump";  // bump | saw | sine
    double amplitude = 0.0;
    double center = 0.0;
    double width = 1.0;
    double slope = 0.0;   // saw
    double period = 1.0;  // saw / sine
    // perturbed-line
    double eta = 0.0;
    int modes = 8;
    uint64_t seed = 1;
};

/// Profile A(t) described by the graph fields of the spec (bump / saw / sine).
SampledFunction graph_profile(const GeneratorSpec& spec, double step);

DiscreteMeasure generate(const GeneratorSpec& spec);

/// Four-corner Cantor iterate: 4^n atoms at the level-n cell centers of the
/// unit square, total mass normalized to the set diameter sqrt(2).
DiscreteMeasure cantor_measure(int level);

}  // namespace hv

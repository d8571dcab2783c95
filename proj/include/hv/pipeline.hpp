#pragma once

#include "hv/analysis.hpp"
#include "hv/modified_density.hpp"
#include "hv/whitney.hpp"

namespace hv {

/// Frame applied to put the input into the normalized position: B0 at the
/// origin with unit radius and density, the base line on the real axis.
struct Frame {
    cpx center{0.0, 0.0};
    double radius = 1.0;
    double rotation = 0.0;      // applied angle (radians, about the center)
    double weight_scale = 1.0;  // makes delta(B(0,1)) = 1
};

struct AssumptionChecks {
    bool ran = false;
    double alpha30_raw = 0.0;       // (a) flatness of 30 B0
    double out_mass = 0.0;          // (a) mu(10 B0 \ F)
    double max_mod_density = 0.0;   // (b) sampled sup of the modified density
    double mod_density_threshold = 0.0;
    double max_alpha_spike = 0.0;   // (c) sampled sup of the spike coefficient
    double op_norm = 0.0;           // (d) lower bound on the operator norm
    double max_band = 0.0;          // (e) sampled sup of band values
    int samples = 0;
};

struct PipelineResult {
    Frame frame;
    DiscreteMeasure normalized;
    double base_angle_original = 0.0;  // best line direction before rotation
    StoppingData stop;
    Partition part;
    WhitneyCover cover;
    LipschitzGraph graph;
    GraphReport report;
    Measure1D sigma;
    std::vector<GrowthViolation> growth;
    GBounds gbounds;
    AssumptionChecks assumptions;
};

struct PipelineOptions {
    bool check_assumptions = false;
    int assumption_samples = 4;
};

/// Normalize the input to the frame of the construction and run the full
/// stopping-time / graph pipeline.
PipelineResult run_construct(const DiscreteMeasure& input, const Ball& b0, const StopParams& params,
                             const PipelineOptions& opt = {});

}  // namespace hv

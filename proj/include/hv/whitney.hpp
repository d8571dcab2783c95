#pragma once

#include "hv/stopping.hpp"

namespace hv {

struct WhitneyInterval {
    int level = 0;     // dyadic level: [j 2^-level, (j+1) 2^-level)
    long index = 0;    // j
    double lo = 0.0, hi = 0.0;
    // approximating ball and line (affine map p -> a0 + a1 p)
    cpx ball_center{0.0, 0.0};
    double ball_radius = 0.0;
    double line_angle = 0.0;
    double a0 = 0.0, a1 = 0.0;
    bool flagged = false;  // no S-pair within budget, or no cone witness
    double flag_mass = 0.0;

    double diam() const { return hi - lo; }
    double center() const { return 0.5 * (lo + hi); }
};

struct WhitneyCover {
    std::vector<WhitneyInterval> intervals;  // sorted by lo
    int unresolved_points = 0;  // grid points whose interval fell below resolution
    int max_overlap_2x = 0;     // overlap count of the doubled intervals
    int max_overlap_10x = 0;    // overlap count of {10 I_i}
    int b3_violations = 0;      // 10 diam <= D <= 60 diam failures on 10I
};

/// Maximal dyadic intervals with diam <= (1/20) inf_I D over the sampled
/// domain where D > 0.
WhitneyCover whitney_cover(const StoppingData& sd, double domain_lo = -10.0,
                           double domain_hi = 10.0);

/// Attach balls and cone-witness lines to the intervals (Lemma-B.4-style
/// selection: an S-pair realizing the distance at the interval center,
/// inflated to at least the interval diameter).
void attach_interval_lines(WhitneyCover& cover, const DiscreteMeasure& mu, const StoppingData& sd,
                           const StopParams& p);

/// Knot representation of the assembled localized graph.
struct LipschitzGraph {
    double knot_lo = -4.0, knot_step = 1e-2;
    std::vector<double> raw;     // A before localization
    std::vector<double> values;  // localized: psi * A
    // provenance per knot: -1 uncovered/interpolated, -2 Z-cell average,
    // otherwise the dominating interval id
    std::vector<int> source;
    double lip_estimate = 0.0;
    double max_abs = 0.0;
    double second_derivative_ratio = 0.0;  // max |A''(p)| D(p) / lambda
    int z_conflicts = 0;  // Z cells whose values spread beyond the slope bound
    int interpolated_knots = 0;

    double value_at(double p) const;
    double derivative_l2_squared() const;
};

LipschitzGraph assemble_graph(const WhitneyCover& cover, const DiscreteMeasure& mu,
                              const StoppingData& sd, const Partition& part, const StopParams& p);

struct GraphReport {
    double mass_core = 0.0, mass_z = 0.0, mass_f1 = 0.0, mass_f2 = 0.0, mass_leak = 0.0;
    double lip = 0.0;
    double graph_support_radius = 0.0;   // max |p| with A(p) != 0
    double closeness_fraction = 0.0;     // mass fraction of F within the band
    double derivative_l2_squared = 0.0;
    double max_height = 0.0;
    double height_band = 0.0;            // sqrt(eps)/alpha reference
    double second_derivative_ratio = 0.0;
    int flagged_intervals = 0;
    double flagged_mass = 0.0;
    int leak_count = 0;
};

GraphReport graph_report(const LipschitzGraph& graph, const WhitneyCover& cover,
                         const DiscreteMeasure& mu, const StoppingData& sd, const Partition& part,
                         const StopParams& p);

}  // namespace hv

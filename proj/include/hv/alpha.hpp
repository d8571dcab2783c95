#pragma once

#include <optional>
#include <string>

#include "hv/measure.hpp"
#include "hv/models.hpp"
#include "hv/transport_lp.hpp"

namespace hv {

enum class AlphaStatus { optimal, degenerate, infeasible_guard };

inline const char* to_string(AlphaStatus s) {
    switch (s) {
        case AlphaStatus::optimal: return "optimal";
        case AlphaStatus::degenerate: return "degenerate";
        default: return "infeasible-guard";
    }
}

struct AlphaResult {
    /// Density-normalized coefficient: raw / delta_mu(B).  Invariant under a
    /// global rescaling of the weights of mu.
    double value = 0.0;
    /// Raw coefficient of the definition (sup of the normalized dual pairing).
    double raw = 0.0;
    /// delta_mu(B) used for the normalization.
    double density_scale = 1.0;
    /// c_{mu,nu} of the best witness.
    double normalization = 0.0;
    std::optional<SpikeMeasure> witness;  // best model (line == m = 1)
    AlphaStatus status = AlphaStatus::optimal;
    /// Documented slack: quadrature of the model + any aggregation of mu.
    double tolerance = 0.0;
    bool grid_boundary_hit = false;  // vertex search stopped at the t-grid edge
    /// Set when the search was settled by the certified geometric lower
    /// bound alone (every candidate already exceeded the caller's reject
    /// threshold); .raw is then a lower bound on the true coefficient.
    bool lower_bound_only = false;

    bool ok() const { return status != AlphaStatus::infeasible_guard; }
};

struct AlphaOptions {
    int n_max = 3000;           // combined atom guard for exact evaluations
    double model_spacing = 0.0;  // 0 -> automatic (matches data spacing if known)
    double data_spacing_hint = 0.0;
    // search controls
    int angle_seed = 64;        // full-circle seed grid
    double angle_tol = 1e-4;    // golden-section termination (radians)
    int vertex_grid = 12;       // geometric vertex offsets per ray for alpha_spike
    // search-stage shortcuts: aggregate windows above this atom count onto a
    // grid cell folded into .tolerance (the final evaluation never aggregates)
    int search_cap = 700;
    bool final_aggregate = false;  // allow aggregation in the final evaluation
};

/// c_{mu,nu} on the ball: ratio of phi-weighted masses, 0 when nu carries no
/// phi-mass.
double normalization_c(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Ball& b);

/// Transportation coefficient between two discrete measures on B (the dual
/// Lipschitz program of the definition, solved exactly as a min-cost
/// transport with a boundary sink).
AlphaResult alpha_pair(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Ball& b,
                       const AlphaOptions& opt = {});

enum class LineMode { search, fixed, cone };

struct LineQuery {
    LineMode mode = LineMode::search;
    double fixed_angle = 0.0;  // fixed mode
    double cone_center = 0.0;  // cone mode: window around this direction
    double cone_half_width = 0.0;
    /// Early-accept threshold on the raw value: the search stops as soon as a
    /// line passes (used by the stopping-time membership tests); <0 disables.
    double accept_raw = -1.0;
    /// Scale on the candidate's own quadrature/aggregation tolerance added to
    /// accept_raw when testing for early acceptance.
    double accept_tol_scale = 0.0;
};

/// Coefficient with respect to line measures through c(B).
AlphaResult alpha_line(const DiscreteMeasure& mu, const Ball& b, const LineQuery& q = {},
                       const AlphaOptions& opt = {});

/// Coefficient with respect to the k-spike class (m | k, vertex constrained
/// so that c(B) lies on the support).
AlphaResult alpha_spike(const DiscreteMeasure& mu, const Ball& b, int k,
                        const AlphaOptions& opt = {});

}  // namespace hv

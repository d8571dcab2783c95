#pragma once

#include <optional>

#include "hv/geometry.hpp"
#include "hv/sampled.hpp"

namespace hv {

struct PvBand {
    double r1 = 0.0;  // inner scale
    double r2 = 1.0;  // outer scale; value is zero when r2 <= r1
};

struct PvOptions {
    double u_step = 0.0;       // 0 -> knot step of A
    double range = 0.0;        // 0 -> graph span + 8
    double requested_tol = 0.0;  // >0 -> flag when the grid-halving estimate exceeds it
};

struct PvResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool step_too_coarse = false;
};

/// Principal value of the normal kernel component along the graph of A at
/// parameter t: integral of K_perp_k(At - As) J(s) ds with J = sqrt(1+A'^2),
/// computed by symmetric-pair quadrature on a uniform u-grid (midpoints
/// (j-1/2) du, so the singular odd part cancels pairwise).  The optional band
/// multiplies the integrand by psi(d/r1) - psi(d/r2).
PvResult pv_graph_transform(const SampledFunction& A, double t, int k,
                            std::optional<PvBand> band = std::nullopt, const PvOptions& opt = {});

struct PvNormResult {
    double l2_squared = 0.0;   // integral of |pv|^2 J dt over the knot range
    double lp_norm(double p) const;  // only 2 and 4 supported via stored moments
    double l4_fourth = 0.0;
    double max_error_estimate = 0.0;
};

/// L^2 (and L^4) norms of the pv transform over the graph, by trapezoid on
/// the knot grid; `band_of_t` when set supplies per-knot band scales.
PvNormResult pv_norm_over_graph(const SampledFunction& A, int k,
                                const std::function<std::optional<PvBand>(double)>& band_of_t,
                                const PvOptions& opt = {}, int knot_stride = 1);

}  // namespace hv

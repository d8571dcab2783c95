#pragma once

#include <optional>
#include <vector>

#include "hv/kernel_series.hpp"
#include "hv/kernels.hpp"
#include "hv/measure.hpp"
#include "hv/pv_transform.hpp"
#include "hv/stopping.hpp"

namespace hv {

/// g(t) = eta_{sqrt(lambda) D(t)} * sigma; unavailable where D(t) = 0.
std::optional<double> smoothed_density(const Measure1D& sigma, const StoppingData& sd, double lambda,
                                       double t);

struct GrowthViolation {
    double p = 0.0, r = 0.0, mass = 0.0, bound = 0.0;
};

/// sigma(B(p,r)) <= (1 + C alpha^2) 2r over the lemma's scale window
/// r in (eps^{1/4} D(p), 1).
std::vector<GrowthViolation> sigma_growth_check(const Measure1D& sigma, const StoppingData& sd,
                                                double eps, double alpha, double growth_c = 10.0,
                                                int p_samples = 512, int r_per_octave = 4);

struct GBounds {
    double max_g = 0.0;
    double l2_deviation = 0.0;  // ||chi_{8 I0} (g - 1)||_2
    int undefined_points = 0;   // D(t) = 0 flags
};

GBounds g_bounds_check(const Measure1D& sigma, const StoppingData& sd, double lambda,
                       double window = 8.0, int samples = 2048);

/// T-perp band value at an F atom with the inner scale l(x) = D(pi(x))/10.
double band_operator_normal(const DiscreteMeasure& mu, const StoppingData& sd, cpx x, int k);

/// PV quadrature of the tail kernel sum over odd l >= 3 of
/// c_{k,l} (A(t)-A(s))^l / (t-s)^{l+1}; requires ||A'||_inf <= 0.4.
double commutator_tail(const SampledFunction& A, double t, int k, int series_order = 41,
                       const PvOptions& opt = {});

struct LowerBoundLedger {
    double lhs = 0.0;               // squared L2(Gamma) norm of the pv transform
    double grad_l2_squared = 0.0;   // ||A'||_{L2}^2
    double grad_sup = 0.0;          // ||A'||_inf
    double max_error_estimate = 0.0;
};

/// Ingredients of the desk-scale kernel lower bound; requires
/// ||A'||_inf <= slope_guard (default 0.05 by the small-constant regime).
LowerBoundLedger lower_bound_ledger(const SampledFunction& A, int k, double slope_guard = 0.05,
                                    const PvOptions& opt = {}, int knot_stride = 1);

}  // namespace hv

#pragma once

#include <vector>

#include "hv/measure.hpp"

namespace hv {

/// m-spike model: linear density c on the union of the m lines
/// e^{i pi n / m} D + vertex, n = 0..m-1, where D has direction `base_angle`.
/// m = 1 is a plain line measure.  Within the k-spike class, m must divide k.
struct SpikeMeasure {
    cpx vertex{0.0, 0.0};
    double base_angle = 0.0;  // in [0, pi/m)
    int m = 1;
    double c = 1.0;

    SpikeMeasure() = default;
    SpikeMeasure(cpx v, double angle, int rays, double density);

    double ray_angle(int n) const { return base_angle + kPi * n / m; }
    std::vector<Line> lines() const;

    double distance_to_support(cpx p) const;
    /// Distance from p to the union of the lines other than line n
    /// (+infinity when m == 1).
    double distance_to_other_lines(cpx p, int n) const;

    /// Exact mass of the open ball (sum of chord lengths times c).
    double ball_mass(const Ball& b) const;
    double ball_density(const Ball& b) const { return ball_mass(b) / (2.0 * b.radius); }

    /// Exact integral of f(|p - z|) over the support against arclength,
    /// with f piecewise linear given by the transport cutoff; used for
    /// normalization checks in tests.
    double total_mass_in_window(const Ball& window) const;
};

/// Midpoint quadrature of the model on `window`.  The lattice is anchored at
/// the vertex (atoms at vertex +/- (j+1/2)*spacing along each line), so the
/// atom positions do not depend on the window and two quadratures of the same
/// model at the same spacing coincide bitwise on their overlap.
/// Total mass is within c*m*spacing of the exact mass on the window.
DiscreteMeasure discretize_model(const SpikeMeasure& nu, const Ball& window, double spacing);

/// Density ratio of the model: equals m exactly.
double density_ratio_spike(const SpikeMeasure& nu);
/// sup over k-spike models: equals k.
double density_ratio_class(int k);

struct LambdaEstimate {
    double value = 0.0;
    bool converged = true;
    double last_change = 0.0;
};

/// Largest relative flat scale of the model (numerical two-variable
/// optimization; scale invariance reduces the outer infimum to r = 1 with the
/// probe point on one ray at distance d from the vertex).  The 120t
/// neighbourhood of the chosen sub-ball must meet a single line.
LambdaEstimate lambda_constant(const SpikeMeasure& nu, int grid = 96, double tol = 1e-4);

/// min over m | k of lambda for the m-spike; cached per k.
double lambda_k(int k);

}  // namespace hv

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hv/alpha.hpp"

namespace hv {

/// Stopping-time parameters.  The asymptotic hierarchy is realized concretely
/// as eps <= theta^4 <= alpha^8 <= delta^16, validated on load.
struct StopParams {
    double delta = 0.4;
    double epsilon = 1e-8;
    double alpha = 0.1;
    double theta = 1e-2;
    int k = 3;
    int theta_exponent = 2;  // Main-Lemma density threshold 1 + theta^exponent
    /// Scale on the documented discreteness tolerances added to the flatness
    /// threshold of the membership test; 0 restores the literal test (which no
    /// quadrature data can pass at small epsilon).
    double quad_tol_scale = 1.0;
    int t_per_octave = 4;
    double t_max = 12.0;
    double t_min_factor = 4.0;  // times the nearest-neighbour spacing
    AlphaOptions alpha_opt;

    void validate() const;
    double lambda() const { return std::sqrt(epsilon) / delta; }
};

struct Membership {
    bool member = false;
    double density = 0.0;
    double alpha_raw = 0.0;
    double threshold = 0.0;
    std::optional<SpikeMeasure> witness;  // m = 1 line when member
};

/// Sampled stopping-time region over F cap closed B(0,1) after the
/// normalization (B0 = B(0,1), D0 = the real axis, delta_mu(B0) = 1).
struct StoppingData {
    std::vector<int> f_atoms;     // indices into mu: F = atoms of 10 B0
    std::vector<int> core;        // indices into f_atoms: F cap closed B0
    std::vector<double> t_grid;
    double t_min = 0.0;
    bool monotone_ok = true;
    int monotone_violations = 0;
    int monotone_checked = 0;

    std::vector<double> height;        // h per core atom (grid sup of non-members)
    std::vector<double> first_member;  // smallest member scale (0 on Z, inf if none)

    std::vector<double> d_at_f;  // d(x) for every F atom

    double knot_lo = -10.0, knot_step = 1e-2;
    std::vector<double> D_grid;  // D(p) on the knot grid over pi(10 B0)

    int h_ge_d_violations = 0;
    double max_height = 0.0;
};

/// Labels of the scale partition.
enum class FLabel : int8_t { Z = 0, F1 = 1, F2 = 2, Leak = 3 };

struct Partition {
    std::vector<FLabel> label;  // per core atom
    double mass_z = 0.0, mass_f1 = 0.0, mass_f2 = 0.0, mass_leak = 0.0;
    double mass_core = 0.0;
    int leak_count = 0;
};

/// Def-7.2-style membership test at (x, t): density >= delta and a cone line
/// (angle window alpha about the base direction) with alpha_{mu,D}(B(x,t))
/// within epsilon plus the documented discreteness tolerance.
Membership in_s_total(const DiscreteMeasure& mu, const SpatialIndex& idx, cpx x, double t,
                      const StopParams& p, double data_spacing);

/// Heights by bisection on the scale grid (membership is verified monotone on
/// a subsample first; when the verification fails the heights fall back to a
/// descending scan for the largest non-member).
StoppingData build_stopping(const DiscreteMeasure& mu, const StopParams& p);

Partition partition_scales(const DiscreteMeasure& mu, const StoppingData& sd, const StopParams& p);

/// d(x) = inf over sampled S pairs of |X - x| + t.
double dist_d(const StoppingData& sd, const DiscreteMeasure& mu, cpx x);
/// D(p) on the knot grid is stored in StoppingData; this evaluates by linear
/// interpolation (1-Lipschitz between knots).
double dist_D(const StoppingData& sd, double p);

}  // namespace hv

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hv/geometry.hpp"

namespace hv {

struct Atom {
    cpx pos{0.0, 0.0};
    double w = 0.0;
};

/// Finite weighted atom set in the plane.  Duplicate positions are allowed
/// and their masses sum.  All weights must be strictly positive and finite.
struct DiscreteMeasure {
    std::vector<Atom> atoms;

    double total_mass() const;
    void validate() const;

    DiscreteMeasure scaled_weights(double s) const;
    DiscreteMeasure translated(cpx dz) const;
    DiscreteMeasure rotated(double theta, cpx pivot = cpx(0, 0)) const;
    /// Dilation about `pivot`: positions scale by s, weights by s (so that
    /// line-like densities are preserved).
    DiscreteMeasure dilated(double s, cpx pivot = cpx(0, 0)) const;
};

/// Mass and density mu(B)/(2r) of an open ball.  Atoms on the boundary are
/// excluded.
struct BallDensity {
    double mass = 0.0;
    double density = 0.0;
};
BallDensity density(const DiscreteMeasure& mu, const Ball& b);

/// Uniform-bin spatial index for repeated window/ball queries.
class SpatialIndex {
   public:
    explicit SpatialIndex(const DiscreteMeasure& mu);

    double ball_mass(const Ball& b) const;
    /// Indices of atoms with |pos - b.center| < b.radius.
    std::vector<int> ball_atoms(const Ball& b) const;
    /// Median nearest-neighbour distance over a deterministic sample.
    double median_nn_spacing() const;

    const DiscreteMeasure& measure() const { return *mu_; }

   private:
    const DiscreteMeasure* mu_;
    double cell_ = 1.0;
    double x0_ = 0.0, y0_ = 0.0;
    int nx_ = 1, ny_ = 1;
    std::vector<std::vector<int>> bins_;
    mutable double nn_cache_ = -1.0;

    int bin_of(cpx p) const;
};

/// Densities delta_mu(B(x,r)) along a descending scale grid.
std::vector<std::pair<double, double>> density_profile(const DiscreteMeasure& mu, cpx x,
                                                       const std::vector<double>& scales);

/// One-dimensional measure on the line (positions kept sorted).
struct Measure1D {
    std::vector<double> pos;
    std::vector<double> w;
    // prefix[i] = sum of w[0..i-1] in sorted order
    std::vector<double> prefix;

    void finalize();  // sorts by position, builds prefix sums
    double total_mass() const { return prefix.empty() ? 0.0 : prefix.back(); }
    /// Mass of the open interval (c - r, c + r).
    double interval_mass(double c, double r) const;
};

/// sigma = pi_#(mu|subset): projects the selected atoms to the first
/// coordinate.  Total mass is preserved exactly (sum order follows the
/// subset order).
Measure1D pushforward_projection(const DiscreteMeasure& mu, const std::vector<int>& subset);

/// Snap atoms to a square grid of side `cell`, summing weights per cell.
/// Each atom moves by at most cell/sqrt(2); callers fold that displacement
/// into their transport tolerances.
DiscreteMeasure aggregate(const DiscreteMeasure& mu, double cell);

/// Restriction to atoms with |pos - b.center| < b.radius.
DiscreteMeasure restrict_to_ball(const DiscreteMeasure& mu, const Ball& b);

// Measure file: header "x y w", one atom per line, '#' comments,
// 17 significant digits on write.
void write_measure(const std::string& path, const DiscreteMeasure& mu);
DiscreteMeasure read_measure(const std::string& path);

}  // namespace hv

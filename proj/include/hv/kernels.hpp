#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hv/cutoffs.hpp"
#include "hv/measure.hpp"

namespace hv {

enum class KernelPart { full, normal };

/// K_k(z) = z^k / |z|^{k+1}; the normal part keeps Im(z^k)/|z|^{k+1}.
cpx kernel(int k, cpx z);
double kernel_normal(int k, cpx z);

struct TruncationOptions {
    bool smooth = true;  // smooth cutoff (canonical) vs hard |z-w| > r
};

/// Smoothly truncated transform at scale r: sum of Psi(|z-w|/r) K_k(z-w) w_i.
/// With `upper` given, the band value T_r - T_upper (zero when upper <= r).
cpx truncated_transform(const DiscreteMeasure& mu, cpx z, double r, int k,
                        std::optional<double> upper = std::nullopt,
                        const TruncationOptions& opt = {});
double truncated_transform_normal(const DiscreteMeasure& mu, cpx z, double r, int k,
                                  std::optional<double> upper = std::nullopt,
                                  const TruncationOptions& opt = {});

/// max over the scale grid of |T_r|.
double maximal_transform(const DiscreteMeasure& mu, cpx z, int k, const std::vector<double>& r_grid);

/// Default grid for the maximal transform: geometric between a quarter of the
/// smallest pairwise gap and twice the diameter.
std::vector<double> default_r_grid(const DiscreteMeasure& mu, int per_octave = 4);

struct OperatorNormEstimate {
    double value = 0.0;   // max over the grid of the spectral norms
    double best_r = 0.0;
    bool converged = true;
    int iterations_used = 0;
};

/// Lower bound on the maximal-operator norm: for each r, the spectral norm of
/// M(r)_{ij} = Psi(|x_i-x_j|/r) K_k(x_i-x_j) sqrt(w_i w_j) (zero diagonal),
/// by power iteration with a fixed seed.
OperatorNormEstimate operator_norm_estimate(const DiscreteMeasure& mu, int k,
                                            const std::vector<double>& r_grid, int iterations = 300,
                                            int n_max = 3000, uint64_t seed = 12345);

}  // namespace hv

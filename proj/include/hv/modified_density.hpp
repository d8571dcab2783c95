#pragma once

#include <optional>

#include "hv/alpha.hpp"

namespace hv {

struct ModifiedDensityResult {
    double value = 0.0;  // 0 when no candidate ball qualifies
    std::optional<Ball> witness;
    int candidates_tested = 0;  // alpha evaluations spent
    double alpha_of_witness = 0.0;
};

struct ModifiedDensityOptions {
    int center_cap = 48;        // centers sampled from supp(mu) inside B(x,r)
    int radii_per_octave = 16;  // geometric radius grid density
    AlphaOptions alpha;
};

/// inf of delta_mu(B) over balls B inside B(x,r) that are dense
/// (delta_mu(B) >= delta_mu(B(x,r)) / (2 D_k)), not too small
/// (r(B) >= lambda_k r / 2) and flat (alpha_mu(30B) <= eps * delta_mu(B), up
/// to the documented model-quadrature tolerance).  Candidate centers are the
/// atoms of mu themselves.
ModifiedDensityResult modified_density(const DiscreteMeasure& mu, const Ball& b, double eps, int k,
                                       const ModifiedDensityOptions& opt = {});

}  // namespace hv

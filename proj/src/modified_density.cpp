#include "hv/modified_density.hpp"

#include <algorithm>
#include <cmath>

namespace hv {

ModifiedDensityResult modified_density(const DiscreteMeasure& mu, const Ball& b, double eps, int k,
                                       const ModifiedDensityOptions& opt) {
    ModifiedDensityResult out;
    const double lam = lambda_k(k);
    const double dk = density_ratio_class(k);
    const double base_density = density(mu, b).density;
    const double density_floor = base_density / (2.0 * dk);
    const double radius_floor = 0.5 * lam * b.radius;

    SpatialIndex idx(mu);
    std::vector<int> inside = idx.ball_atoms(b);
    if (inside.empty()) return out;

    // deterministic stride subsample of the candidate centers
    std::vector<int> centers;
    size_t stride = std::max<size_t>(1, inside.size() / opt.center_cap);
    for (size_t i = 0; i < inside.size(); i += stride) centers.push_back(inside[i]);

    struct Cand {
        Ball ball;
        double dens;
    };
    std::vector<Cand> cands;
    const double ratio = std::pow(2.0, 1.0 / opt.radii_per_octave);
    for (int ci : centers) {
        cpx z = mu.atoms[ci].pos;
        double reach = b.radius - std::abs(z - b.center);  // containment bound on s
        for (double s = radius_floor; s <= reach; s *= ratio) {
            Ball cand(z, s);
            double d = idx.ball_mass(cand) / (2.0 * s);
            if (d < density_floor) continue;
            cands.push_back({cand, d});
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& c) { return a.dens < c.dens; });

    AlphaOptions aopt = opt.alpha;
    aopt.final_aggregate = true;
    for (const Cand& cand : cands) {
        LineQuery q;
        q.mode = LineMode::search;
        double threshold = eps * cand.dens;
        q.accept_raw = threshold;
        ++out.candidates_tested;
        AlphaResult a = alpha_line(mu, cand.ball.scaled(30.0), q, aopt);
        if (!a.ok()) continue;
        if (a.raw <= threshold + a.tolerance) {
            out.value = cand.dens;
            out.witness = cand.ball;
            out.alpha_of_witness = a.raw;
            return out;
        }
    }
    return out;  // empty set: value 0 per the definition
}

}  // namespace hv

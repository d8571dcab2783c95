#include "hv/stopping.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "hv/cutoffs.hpp"

namespace hv {

void StopParams::validate() const {
    auto in01 = [](double v) { return v > 0.0 && v < 1.0; };
    if (!in01(delta) || !in01(epsilon) || !in01(alpha) || !in01(theta))
        throw std::invalid_argument("StopParams: delta, epsilon, alpha, theta must lie in (0,1)");
    if (k < 1 || k % 2 == 0) throw std::invalid_argument("StopParams: k must be odd");
    double t4 = std::pow(theta, 4.0), a8 = std::pow(alpha, 8.0), d16 = std::pow(delta, 16.0);
    if (!(epsilon <= t4 * (1.0 + 1e-12)) || !(t4 <= a8 * (1.0 + 1e-12)) ||
        !(a8 <= d16 * (1.0 + 1e-12)))
        throw std::invalid_argument("StopParams: hierarchy eps <= theta^4 <= alpha^8 <= delta^16 violated");
    if (theta_exponent != 1 && theta_exponent != 2)
        throw std::invalid_argument("StopParams: theta_exponent must be 1 or 2");
}

namespace {

// data-quadrature tolerance of the flatness value at scale t: moving every
// atom by half the local spacing perturbs the dual pairing by at most
// (2/t^2)(s/2) * phi-mass of the window
double data_tolerance(const DiscreteMeasure& mu, const SpatialIndex& idx, cpx x, double t,
                      double spacing) {
    double pm = 0.0;
    for (int i : idx.ball_atoms(Ball(x, 4.0 * t)))
        pm += mu.atoms[i].w * phi(std::abs(mu.atoms[i].pos - x) / t);
    return (2.0 / (t * t)) * 0.5 * spacing * pm;
}

}  // namespace

Membership in_s_total(const DiscreteMeasure& mu, const SpatialIndex& idx, cpx x, double t,
                      const StopParams& p, double data_spacing) {
    Membership out;
    if (!(t > 0.0) || t >= 20.0) throw std::invalid_argument("in_s_total: t out of (0,20)");
    auto bd = density(mu, Ball(x, t));
    out.density = bd.density;
    if (bd.density < p.delta) return out;

    double tol_data = data_tolerance(mu, idx, x, t, data_spacing);
    out.threshold = p.epsilon + p.quad_tol_scale * tol_data;

    LineQuery q;
    q.mode = LineMode::cone;
    q.cone_center = 0.0;  // the normalized frame puts D0 on the real axis
    q.cone_half_width = p.alpha;
    q.accept_raw = out.threshold;
    AlphaOptions opt = p.alpha_opt;
    opt.final_aggregate = true;
    opt.data_spacing_hint = data_spacing;
    AlphaResult a = alpha_line(mu, Ball(x, t), q, opt);
    out.alpha_raw = a.raw;
    if (!a.ok()) return out;
    if (a.lower_bound_only) return out;  // certified reject
    if (a.raw <= out.threshold + p.quad_tol_scale * a.tolerance) {
        out.member = true;
        out.witness = a.witness;
        out.threshold += p.quad_tol_scale * a.tolerance;
    }
    return out;
}

StoppingData build_stopping(const DiscreteMeasure& mu, const StopParams& p) {
    StoppingData sd;
    SpatialIndex idx(mu);
    double nn = idx.median_nn_spacing();
    if (nn <= 0.0) nn = 1e-3;
    sd.t_min = p.t_min_factor * nn;
    if (sd.t_min >= p.t_max) throw std::invalid_argument("build_stopping: t_min above t_max");

    for (int i = 0; i < static_cast<int>(mu.atoms.size()); ++i)
        if (std::abs(mu.atoms[i].pos) <= 10.0) sd.f_atoms.push_back(i);
    for (int fi = 0; fi < static_cast<int>(sd.f_atoms.size()); ++fi)
        if (std::abs(mu.atoms[sd.f_atoms[fi]].pos) <= 1.0) sd.core.push_back(fi);

    // geometric scale grid
    double ratio = std::pow(2.0, 1.0 / p.t_per_octave);
    for (double t = sd.t_min; t < p.t_max; t *= ratio) sd.t_grid.push_back(t);
    sd.t_grid.push_back(p.t_max);
    const int nt = static_cast<int>(sd.t_grid.size());

    auto member_at = [&](cpx x, int ti) {
        return in_s_total(mu, idx, x, sd.t_grid[ti], p, nn).member;
    };

    // monotone verification on a deterministic subsample of the core
    {
        int sample = std::min<int>(16, static_cast<int>(sd.core.size()));
        int stride = sample > 0 ? std::max<size_t>(1, sd.core.size() / sample) : 1;
        for (size_t s = 0; s < sd.core.size(); s += stride) {
            cpx x = mu.atoms[sd.f_atoms[sd.core[s]]].pos;
            bool seen_member = false;
            for (int ti = 0; ti < nt; ++ti) {
                bool m = member_at(x, ti);
                if (m) seen_member = true;
                if (!m && seen_member) ++sd.monotone_violations;
                ++sd.monotone_checked;
            }
        }
        sd.monotone_ok =
            sd.monotone_violations <= std::max(1, sd.monotone_checked / 20);
    }

    const int ncore = static_cast<int>(sd.core.size());
    sd.height.assign(ncore, 0.0);
    sd.first_member.assign(ncore, 0.0);

    auto solve_atom = [&](int c) {
        cpx x = mu.atoms[sd.f_atoms[sd.core[c]]].pos;
        if (sd.monotone_ok) {
            if (member_at(x, 0)) {
                sd.height[c] = 0.0;  // member at the resolution floor: discrete Z
                sd.first_member[c] = 0.0;
                return;
            }
            if (!member_at(x, nt - 1)) {
                sd.height[c] = p.t_max;
                sd.first_member[c] = std::numeric_limits<double>::infinity();
                return;
            }
            int lo = 0, hi = nt - 1;  // grid[lo] non-member, grid[hi] member
            while (hi - lo > 1) {
                int mid = (lo + hi) / 2;
                if (member_at(x, mid))
                    hi = mid;
                else
                    lo = mid;
            }
            sd.height[c] = sd.t_grid[lo];
            sd.first_member[c] = sd.t_grid[hi];
        } else {
            // descending scan for the largest non-member
            int first_non = -1;
            for (int ti = nt - 1; ti >= 0; --ti) {
                if (!member_at(x, ti)) {
                    first_non = ti;
                    break;
                }
            }
            if (first_non < 0) {
                sd.height[c] = 0.0;
                sd.first_member[c] = 0.0;
            } else if (first_non == nt - 1) {
                sd.height[c] = p.t_max;
                sd.first_member[c] = std::numeric_limits<double>::infinity();
            } else {
                sd.height[c] = sd.t_grid[first_non];
                sd.first_member[c] = sd.t_grid[first_non + 1];
            }
        }
    };

    // heights are independent; deterministic result regardless of schedule
    {
        unsigned hw = std::thread::hardware_concurrency();
        int nthreads = std::max(1u, std::min<unsigned>(hw, 8));
        if (ncore < 32) nthreads = 1;
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&]() {
                for (;;) {
                    int c = next.fetch_add(1);
                    if (c >= ncore) return;
                    solve_atom(c);
                }
            });
        for (auto& th : pool) th.join();
    }

    for (int c = 0; c < ncore; ++c) sd.max_height = std::max(sd.max_height, sd.height[c]);

    // distance functions over the sampled region
    sd.d_at_f.assign(sd.f_atoms.size(), 0.0);
    for (size_t fi = 0; fi < sd.f_atoms.size(); ++fi) {
        cpx x = mu.atoms[sd.f_atoms[fi]].pos;
        double best = 1e300;
        for (int c = 0; c < ncore; ++c) {
            double ts = sd.first_member[c];
            if (!std::isfinite(ts)) continue;
            cpx X = mu.atoms[sd.f_atoms[sd.core[c]]].pos;
            best = std::min(best, std::abs(X - x) + ts);
        }
        sd.d_at_f[fi] = best;
    }

    // h >= d on the core
    for (int c = 0; c < ncore; ++c)
        if (sd.height[c] + 1e-12 < sd.d_at_f[sd.core[c]] && sd.height[c] > 0.0)
            ++sd.h_ge_d_violations;

    // D on the knot grid over pi(10 B0)
    sd.knot_lo = -10.0;
    sd.knot_step = std::clamp(sd.t_min / 2.0, 1e-4, 1e-2);
    int nknots = static_cast<int>(std::floor(20.0 / sd.knot_step)) + 1;
    sd.D_grid.assign(nknots, 1e300);
    for (int c = 0; c < ncore; ++c) {
        double ts = sd.first_member[c];
        if (!std::isfinite(ts)) continue;
        double px = mu.atoms[sd.f_atoms[sd.core[c]]].pos.real();
        // D(p) <= |p - px| + ts: relax over the grid in two sweeps
        int j0 = std::clamp(static_cast<int>((px - sd.knot_lo) / sd.knot_step), 0, nknots - 1);
        double base = std::fabs(sd.knot_lo + j0 * sd.knot_step - px) + ts;
        if (base < sd.D_grid[j0]) sd.D_grid[j0] = base;
        int j1 = std::clamp(j0 + 1, 0, nknots - 1);
        double base1 = std::fabs(sd.knot_lo + j1 * sd.knot_step - px) + ts;
        if (base1 < sd.D_grid[j1]) sd.D_grid[j1] = base1;
    }
    for (int j = 1; j < nknots; ++j)
        sd.D_grid[j] = std::min(sd.D_grid[j], sd.D_grid[j - 1] + sd.knot_step);
    for (int j = nknots - 2; j >= 0; --j)
        sd.D_grid[j] = std::min(sd.D_grid[j], sd.D_grid[j + 1] + sd.knot_step);

    return sd;
}

double dist_d(const StoppingData& sd, const DiscreteMeasure& mu, cpx x) {
    double best = 1e300;
    for (size_t c = 0; c < sd.core.size(); ++c) {
        double ts = sd.first_member[c];
        if (!std::isfinite(ts)) continue;
        cpx X = mu.atoms[sd.f_atoms[sd.core[c]]].pos;
        best = std::min(best, std::abs(X - x) + ts);
    }
    return best;
}

double dist_D(const StoppingData& sd, double p) {
    if (sd.D_grid.empty()) return 1e300;
    double u = (p - sd.knot_lo) / sd.knot_step;
    int n = static_cast<int>(sd.D_grid.size());
    if (u <= 0.0) return sd.D_grid.front() + (sd.knot_lo - p);
    if (u >= n - 1) return sd.D_grid.back() + (p - (sd.knot_lo + (n - 1) * sd.knot_step));
    int j = static_cast<int>(u);
    double frac = u - j;
    return sd.D_grid[j] * (1.0 - frac) + sd.D_grid[j + 1] * frac;
}

Partition partition_scales(const DiscreteMeasure& mu, const StoppingData& sd, const StopParams& p) {
    Partition part;
    SpatialIndex idx(mu);
    double nn = idx.median_nn_spacing();
    part.label.assign(sd.core.size(), FLabel::Leak);
    for (size_t c = 0; c < sd.core.size(); ++c) {
        int ai = sd.f_atoms[sd.core[c]];
        double w = mu.atoms[ai].w;
        part.mass_core += w;
        double h = sd.height[c];
        if (h <= 0.0) {
            part.label[c] = FLabel::Z;
            part.mass_z += w;
            continue;
        }
        auto bd = density(mu, Ball(mu.atoms[ai].pos, h));
        if (bd.density <= p.delta) {
            part.label[c] = FLabel::F1;
            part.mass_f1 += w;
            continue;
        }
        // off-cone flat line exists?
        double tol_data = 0.0;
        {
            double pm = 0.0;
            cpx x = mu.atoms[ai].pos;
            for (int i : idx.ball_atoms(Ball(x, 4.0 * h)))
                pm += mu.atoms[i].w * phi(std::abs(mu.atoms[i].pos - x) / h);
            tol_data = (2.0 / (h * h)) * 0.5 * nn * pm;
        }
        LineQuery q;
        q.mode = LineMode::cone;
        q.cone_center = kPi / 2.0;
        q.cone_half_width = kPi / 2.0 - p.alpha;
        q.accept_raw = p.epsilon + p.quad_tol_scale * tol_data;
        AlphaOptions opt = p.alpha_opt;
        opt.final_aggregate = true;
        opt.data_spacing_hint = nn;
        AlphaResult a = alpha_line(mu, Ball(mu.atoms[ai].pos, h), q, opt);
        if (a.ok() && !a.lower_bound_only &&
            a.raw <= q.accept_raw + p.quad_tol_scale * a.tolerance) {
            part.label[c] = FLabel::F2;
            part.mass_f2 += w;
        } else {
            part.label[c] = FLabel::Leak;  // discrete trichotomy leakage, reported
            part.mass_leak += w;
            ++part.leak_count;
        }
    }
    return part;
}

}  // namespace hv

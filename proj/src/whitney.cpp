#include "hv/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace hv {

namespace {

// sparse-table range minimum over the D grid
struct RangeMin {
    std::vector<std::vector<double>> table;
    explicit RangeMin(const std::vector<double>& v) {
        int n = static_cast<int>(v.size());
        int levels = 1;
        while ((1 << levels) <= n) ++levels;
        table.assign(levels, v);
        for (int l = 1; l < levels; ++l)
            for (int i = 0; i + (1 << l) <= n; ++i)
                table[l][i] = std::min(table[l - 1][i], table[l - 1][i + (1 << (l - 1))]);
    }
    double query(int lo, int hi) const {  // inclusive
        if (hi < lo) return 1e300;
        int len = hi - lo + 1;
        int l = 0;
        while ((2 << l) <= len) ++l;
        return std::min(table[l][lo], table[l][hi - (1 << l) + 1]);
    }
};

}  // namespace

WhitneyCover whitney_cover(const StoppingData& sd, double domain_lo, double domain_hi) {
    WhitneyCover cover;
    const int n = static_cast<int>(sd.D_grid.size());
    if (n == 0) return cover;
    RangeMin rm(sd.D_grid);

    auto grid_min = [&](double lo, double hi) {
        int a = std::clamp(static_cast<int>(std::ceil((lo - sd.knot_lo) / sd.knot_step)), 0, n - 1);
        int b = std::clamp(static_cast<int>(std::floor((hi - sd.knot_lo) / sd.knot_step)), 0, n - 1);
        return rm.query(a, b);
    };

    std::set<std::pair<int, long>> seen;
    for (int j = 0; j < n; ++j) {
        double p = sd.knot_lo + j * sd.knot_step;
        if (p < domain_lo || p > domain_hi) continue;
        double Dp = sd.D_grid[j];
        if (!(Dp > 0.0) || Dp >= 1e200) continue;
        // smallest dyadic level whose diameter could satisfy the bound
        double target = Dp / 20.0;
        if (target < 2.0 * sd.knot_step) {
            ++cover.unresolved_points;  // below sampling resolution
            continue;
        }
        int level = static_cast<int>(std::ceil(-std::log2(target)));
        // candidate must contain p and satisfy diam <= (1/20) inf_I D;
        // the level above may already fail, so descend until it holds
        for (int guard = 0; guard < 60; ++guard) {
            double diam = std::pow(2.0, -level);
            long idx = static_cast<long>(std::floor(p / diam));
            double lo = idx * diam, hi = lo + diam;
            if (diam <= grid_min(lo, hi) / 20.0) break;
            ++level;
        }
        // grow to maximality
        for (int guard = 0; guard < 60; ++guard) {
            int up = level - 1;
            double diam = std::pow(2.0, -up);
            long idx = static_cast<long>(std::floor(p / diam));
            double lo = idx * diam, hi = lo + diam;
            if (diam <= grid_min(lo, hi) / 20.0)
                level = up;
            else
                break;
        }
        double diam = std::pow(2.0, -level);
        if (diam < 2.0 * sd.knot_step) {
            ++cover.unresolved_points;
            continue;
        }
        long idx = static_cast<long>(std::floor(p / diam));
        if (seen.insert({level, idx}).second) {
            WhitneyInterval I;
            I.level = level;
            I.index = idx;
            I.lo = idx * diam;
            I.hi = I.lo + diam;
            cover.intervals.push_back(I);
        }
    }
    std::sort(cover.intervals.begin(), cover.intervals.end(),
              [](const WhitneyInterval& a, const WhitneyInterval& b) { return a.lo < b.lo; });

    // post-hoc certificates: 10 diam <= D(p) <= 60 diam on the sampled 10I,
    // and the overlap counts of the doubled and tenfold intervals
    for (const auto& I : cover.intervals) {
        double d = I.diam();
        double lo = I.center() - 5.0 * d, hi = I.center() + 5.0 * d;
        for (double p = std::max(lo, sd.knot_lo); p <= std::min(hi, domain_hi); p += sd.knot_step) {
            double Dp = dist_D(sd, p);
            if (Dp >= 1e200) continue;
            if (Dp < 10.0 * d - 1e-12 || Dp > 60.0 * d + 1e-12) {
                ++cover.b3_violations;
                break;
            }
        }
    }
    {
        std::vector<std::pair<double, int>> events;
        std::vector<std::pair<double, int>> events10;
        for (const auto& I : cover.intervals) {
            double c = I.center(), d = I.diam();
            events.push_back({c - d, +1});
            events.push_back({c + d, -1});
            events10.push_back({c - 5.0 * d, +1});
            events10.push_back({c + 5.0 * d, -1});
        }
        auto max_overlap = [](std::vector<std::pair<double, int>>& ev) {
            std::sort(ev.begin(), ev.end());
            int cur = 0, best = 0;
            for (auto& [x, s] : ev) {
                cur += s;
                best = std::max(best, cur);
            }
            return best;
        };
        cover.max_overlap_2x = max_overlap(events);
        cover.max_overlap_10x = max_overlap(events10);
    }
    return cover;
}

void attach_interval_lines(WhitneyCover& cover, const DiscreteMeasure& mu, const StoppingData& sd,
                           const StopParams& p) {
    SpatialIndex idx(mu);
    double nn = idx.median_nn_spacing();
    for (auto& I : cover.intervals) {
        double pc = I.center();
        // S-pair realizing D at the interval center
        double best = 1e300;
        int best_c = -1;
        for (size_t c = 0; c < sd.core.size(); ++c) {
            double ts = sd.first_member[c];
            if (!std::isfinite(ts)) continue;
            cpx X = mu.atoms[sd.f_atoms[sd.core[c]]].pos;
            double v = std::fabs(X.real() - pc) + ts;
            if (v < best) {
                best = v;
                best_c = static_cast<int>(c);
            }
        }
        if (best_c < 0 || best > 120.0 * I.diam()) {
            I.flagged = true;
            continue;
        }
        cpx X = mu.atoms[sd.f_atoms[sd.core[best_c]]].pos;
        // inflate the ball so its window reaches the interval: the fitted
        // line is then used where it was fitted instead of extrapolated
        double reach = std::fabs(X.real() - pc) + I.diam();
        double t = std::max({sd.first_member[best_c], I.diam(), reach});
        I.ball_center = X;
        I.ball_radius = t;

        Membership mb = in_s_total(mu, idx, X, t, p, nn);
        if (!mb.member || !mb.witness) {
            I.flagged = true;  // discrete leakage: excluded from assembly
            continue;
        }
        // refine the witness direction to the cone minimizer: the membership
        // early-accept only certifies a passing line, the interval map needs
        // the best one
        {
            LineQuery q;
            q.mode = LineMode::cone;
            q.cone_center = 0.0;
            q.cone_half_width = p.alpha;
            AlphaOptions aopt = p.alpha_opt;
            aopt.final_aggregate = true;
            aopt.data_spacing_hint = nn;
            AlphaResult refined = alpha_line(mu, Ball(X, t), q, aopt);
            if (refined.ok() && refined.witness) mb.witness = refined.witness;
        }
        I.line_angle = mb.witness->base_angle;
        // affine map through the ball center with the witness slope
        double ang = Line::normalize_angle(I.line_angle);
        double slope = std::tan(ang < kPi / 2.0 ? ang : ang - kPi);
        I.a1 = slope;
        I.a0 = X.imag() - slope * X.real();
    }
    // flagged intervals stay in the cover for reporting but carry the mass of
    // the F atoms over their doubled footprint
    for (auto& I : cover.intervals) {
        if (!I.flagged) continue;
        double lo = I.center() - I.diam(), hi = I.center() + I.diam();
        for (int fi : sd.f_atoms) {
            double px = mu.atoms[fi].pos.real();
            if (px >= lo && px <= hi) I.flag_mass += mu.atoms[fi].w;
        }
    }
}

namespace {

// C^2 ramp equal to 1 on I and supported on 2I
double bump_on(const WhitneyInterval& I, double x) {
    double half = 0.5 * I.diam();
    double c = I.center();
    double a = std::fabs(x - c);
    if (a >= 2.0 * half) return 0.0;
    if (a <= half) return 1.0;
    double u = (a - half) / half;  // in (0,1)
    return 1.0 - u * u * (3.0 - 2.0 * u);
}

double smooth_window(double x) {
    // 1 on [-1.5, 1.5], C^2 ramp to 0 at +-2
    double a = std::fabs(x);
    if (a <= 1.5) return 1.0;
    if (a >= 2.0) return 0.0;
    double u = (a - 1.5) / 0.5;
    return 1.0 - u * u * (3.0 - 2.0 * u);
}

}  // namespace

double LipschitzGraph::value_at(double p) const {
    if (values.empty()) return 0.0;
    double u = (p - knot_lo) / knot_step;
    int n = static_cast<int>(values.size());
    if (u <= 0.0 || u >= n - 1) return 0.0;
    int j = static_cast<int>(u);
    double frac = u - j;
    return values[j] * (1.0 - frac) + values[j + 1] * frac;
}

double LipschitzGraph::derivative_l2_squared() const {
    double acc = 0.0;
    for (size_t j = 0; j + 1 < values.size(); ++j) {
        double d = (values[j + 1] - values[j]) / knot_step;
        acc += d * d * knot_step;
    }
    return acc;
}

LipschitzGraph assemble_graph(const WhitneyCover& cover, const DiscreteMeasure& mu,
                              const StoppingData& sd, const Partition& part, const StopParams& p) {
    LipschitzGraph g;
    g.knot_lo = -4.0;
    g.knot_step = sd.knot_step;
    int n = static_cast<int>(std::floor(8.0 / g.knot_step)) + 1;
    g.raw.assign(n, 0.0);
    g.values.assign(n, 0.0);
    g.source.assign(n, -1);

    // Z-cell averages: atoms of Z binned to knot cells
    std::vector<double> zw(n, 0.0), zwy(n, 0.0), zymin(n, 1e300), zymax(n, -1e300);
    for (size_t c = 0; c < sd.core.size(); ++c) {
        if (part.label[c] != FLabel::Z) continue;
        cpx x = mu.atoms[sd.f_atoms[sd.core[c]]].pos;
        double u = (x.real() - g.knot_lo) / g.knot_step;
        int j = static_cast<int>(std::lround(u));
        if (j < 0 || j >= n) continue;
        double w = mu.atoms[sd.f_atoms[sd.core[c]]].w;
        zw[j] += w;
        zwy[j] += w * x.imag();
        zymin[j] = std::min(zymin[j], x.imag());
        zymax[j] = std::max(zymax[j], x.imag());
    }

    // interval lookup: for each knot the covering doubled intervals
    for (int j = 0; j < n; ++j) {
        double pj = g.knot_lo + j * g.knot_step;
        if (zw[j] > 0.0) {
            if (zymax[j] - zymin[j] > 2.0 * p.alpha * g.knot_step + 1e-12) {
                // conflicting values inside one cell: excluded, filled by
                // interpolation below
                ++g.z_conflicts;
            } else {
                g.raw[j] = zwy[j] / zw[j];
                g.source[j] = -2;
                continue;
            }
        }
        double bsum = 0.0, vsum = 0.0;
        int dominant = -1;
        double dominant_w = 0.0;
        for (size_t ii = 0; ii < cover.intervals.size(); ++ii) {
            const auto& I = cover.intervals[ii];
            if (I.flagged) continue;
            double b = bump_on(I, pj);
            if (b <= 0.0) continue;
            bsum += b;
            vsum += b * (I.a0 + I.a1 * pj);
            if (b > dominant_w) {
                dominant_w = b;
                dominant = static_cast<int>(ii);
            }
        }
        if (bsum > 0.0) {
            g.raw[j] = vsum / bsum;
            g.source[j] = dominant;
        } else {
            g.source[j] = -1;  // fill by interpolation below
        }
    }

    // linear interpolation across uncovered gaps (zero beyond the data)
    {
        int prev = -1;
        for (int j = 0; j < n; ++j) {
            if (g.source[j] != -1) {
                if (prev >= 0 && prev + 1 < j) {
                    for (int q = prev + 1; q < j; ++q) {
                        double frac = static_cast<double>(q - prev) / (j - prev);
                        g.raw[q] = g.raw[prev] * (1.0 - frac) + g.raw[j] * frac;
                        ++g.interpolated_knots;
                    }
                } else if (prev < 0) {
                    for (int q = 0; q < j; ++q) g.raw[q] = g.raw[j];
                }
                prev = j;
            }
        }
        if (prev >= 0)
            for (int q = prev + 1; q < n; ++q) g.raw[q] = g.raw[prev];
    }

    // localization
    for (int j = 0; j < n; ++j) {
        double pj = g.knot_lo + j * g.knot_step;
        g.values[j] = smooth_window(pj) * g.raw[j];
    }

    for (int j = 0; j + 1 < n; ++j)
        g.lip_estimate =
            std::max(g.lip_estimate, std::fabs(g.values[j + 1] - g.values[j]) / g.knot_step);
    for (int j = 0; j < n; ++j) g.max_abs = std::max(g.max_abs, std::fabs(g.values[j]));

    double lam = p.lambda();
    for (int j = 1; j + 1 < n; ++j) {
        double pj = g.knot_lo + j * g.knot_step;
        double Dp = dist_D(sd, pj);
        if (!(Dp > 0.0) || Dp >= 1e200) continue;
        double dd = (g.values[j + 1] - 2.0 * g.values[j] + g.values[j - 1]) /
                    (g.knot_step * g.knot_step);
        g.second_derivative_ratio = std::max(g.second_derivative_ratio, std::fabs(dd) * Dp / lam);
    }
    return g;
}

GraphReport graph_report(const LipschitzGraph& graph, const WhitneyCover& cover,
                         const DiscreteMeasure& mu, const StoppingData& sd, const Partition& part,
                         const StopParams& p) {
    GraphReport r;
    r.mass_core = part.mass_core;
    r.mass_z = part.mass_z;
    r.mass_f1 = part.mass_f1;
    r.mass_f2 = part.mass_f2;
    r.mass_leak = part.mass_leak;
    r.leak_count = part.leak_count;
    r.lip = graph.lip_estimate;
    r.derivative_l2_squared = graph.derivative_l2_squared();
    r.max_height = sd.max_height;
    r.height_band = std::sqrt(p.epsilon) / p.alpha;
    r.second_derivative_ratio = graph.second_derivative_ratio;
    for (size_t j = 0; j < graph.values.size(); ++j)
        if (graph.values[j] != 0.0)
            r.graph_support_radius =
                std::max(r.graph_support_radius, std::fabs(graph.knot_lo + j * graph.knot_step));

    for (const auto& I : cover.intervals)
        if (I.flagged) {
            ++r.flagged_intervals;
            r.flagged_mass += I.flag_mass;
        }

    // closeness: mass fraction of F atoms within the graph band
    double lam = p.lambda();
    double close = 0.0, total = 0.0;
    const double c_close = 10.0;  // frozen band constant
    for (size_t fi = 0; fi < sd.f_atoms.size(); ++fi) {
        const Atom& a = mu.atoms[sd.f_atoms[fi]];
        total += a.w;
        double Dp = dist_D(sd, a.pos.real());
        double band = c_close * lam * (Dp >= 1e200 ? 0.0 : Dp) +
                      2.0 * p.alpha * graph.knot_step + 1e-12;
        if (std::fabs(a.pos.imag() - graph.value_at(a.pos.real())) <= band) close += a.w;
    }
    r.closeness_fraction = total > 0.0 ? close / total : 0.0;
    return r;
}

}  // namespace hv

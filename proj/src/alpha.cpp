#include "hv/alpha.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <unordered_map>

#include "hv/cutoffs.hpp"

namespace hv {

namespace {

struct Window {
    cpx z;
    double r = 1.0;
    std::vector<cpx> pos;
    std::vector<double> w;
    double phi_mass = 0.0;
    double mass = 0.0;
    double agg_cell = 0.0;  // grid cell if the atoms were aggregated
};

Window make_window(const DiscreteMeasure& mu, const Ball& b) {
    Window win;
    win.z = b.center;
    win.r = b.radius;
    double r4 = 4.0 * b.radius;
    for (const auto& a : mu.atoms) {
        double d = std::abs(a.pos - b.center);
        if (d >= r4) continue;
        win.pos.push_back(a.pos);
        win.w.push_back(a.w);
        win.mass += a.w;
        win.phi_mass += a.w * phi(d / b.radius);
    }
    return win;
}

Window aggregate_window(const Window& win, int cap) {
    if (static_cast<int>(win.pos.size()) <= cap) return win;
    double cell = 8.0 * win.r / 1024.0;
    Window out;
    for (;;) {
        DiscreteMeasure tmp;
        tmp.atoms.reserve(win.pos.size());
        for (size_t i = 0; i < win.pos.size(); ++i) tmp.atoms.push_back({win.pos[i], win.w[i]});
        DiscreteMeasure agg = aggregate(tmp, cell);
        if (static_cast<int>(agg.atoms.size()) <= cap || cell > 8.0 * win.r) {
            out.z = win.z;
            out.r = win.r;
            out.agg_cell = cell;
            out.mass = 0.0;
            out.phi_mass = 0.0;
            for (const auto& a : agg.atoms) {
                double d = std::abs(a.pos - win.z);
                if (d >= 4.0 * win.r) continue;  // cell averaging can push atoms out
                out.pos.push_back(a.pos);
                out.w.push_back(a.w);
                out.mass += a.w;
                out.phi_mass += a.w * phi(d / win.r);
            }
            return out;
        }
        cell *= 2.0;
    }
}

struct PairKey {
    uint64_t a, b;
    bool operator==(const PairKey& o) const { return a == o.a && b == o.b; }
};
struct PairKeyHash {
    size_t operator()(const PairKey& k) const {
        uint64_t h = k.a * 0x9e3779b97f4a7c15ULL;
        h ^= k.b + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return static_cast<size_t>(h);
    }
};

uint64_t bits_of(double x) {
    uint64_t u;
    std::memcpy(&u, &x, sizeof u);
    return u;
}

struct RawSolve {
    double raw = 0.0;
    double c = 0.0;
    AlphaStatus status = AlphaStatus::optimal;
    bool upper_bound = false;  // solve stopped once the accept bound was met
};

// The dual-Lipschitz program over the atoms of mu and nu in B(z,4r):
// variables f_i, objective (1/r) sum phi_i f_i (mu_i - c nu_i), constraints
// |f_i - f_j| <= |x_i - x_j|/r and |f_i| <= (4r - |x_i - z|)/r.  The feasible
// set is symmetric under f -> -f, so the signed sup equals the plain max,
// and by LP duality the optimum is the min-cost transport between the
// positive and negative parts of the objective weights with an absorbing
// boundary priced at the distance-to-boundary bound.
RawSolve solve_raw(const Window& wmu, const std::vector<cpx>& nu_pos,
                   const std::vector<double>& nu_w, int n_max, long pivot_budget = -1,
                   double early_stop_cost = -1e300) {
    RawSolve out;
    const cpx z = wmu.z;
    const double r = wmu.r;
    const double inv_r = 1.0 / r;

    double phi_nu = 0.0;
    for (size_t i = 0; i < nu_pos.size(); ++i) {
        double d = std::abs(nu_pos[i] - z);
        if (d < 4.0 * r) phi_nu += nu_w[i] * phi(d / r);
    }
    out.c = (phi_nu != 0.0) ? wmu.phi_mass / phi_nu : 0.0;

    // merge bitwise-equal positions (quadratures of the same lattice cancel)
    std::unordered_map<PairKey, int, PairKeyHash> index;
    std::vector<cpx> pos;
    std::vector<double> objw;
    auto add = [&](cpx p, double contribution) {
        PairKey key{bits_of(p.real()), bits_of(p.imag())};
        auto [it, inserted] = index.try_emplace(key, static_cast<int>(pos.size()));
        if (inserted) {
            pos.push_back(p);
            objw.push_back(0.0);
        }
        objw[it->second] += contribution;
    };
    for (size_t i = 0; i < wmu.pos.size(); ++i) {
        double d = std::abs(wmu.pos[i] - z);
        add(wmu.pos[i], inv_r * phi(d / r) * wmu.w[i]);
    }
    for (size_t i = 0; i < nu_pos.size(); ++i) {
        double d = std::abs(nu_pos[i] - z);
        if (d >= 4.0 * r) continue;
        add(nu_pos[i], -out.c * inv_r * phi(d / r) * nu_w[i]);
    }

    double amax = 0.0;
    for (double a : objw) amax = std::max(amax, std::fabs(a));
    if (amax == 0.0) return out;

    const double prune = 1e-14 * amax;
    std::vector<int> src, snk;
    double pruned_slack = 0.0;
    for (int i = 0; i < static_cast<int>(pos.size()); ++i) {
        double bnd = (4.0 * r - std::abs(pos[i] - z)) * inv_r;
        if (std::fabs(objw[i]) <= prune) {
            pruned_slack += std::fabs(objw[i]) * bnd;
            continue;
        }
        (objw[i] > 0.0 ? src : snk).push_back(i);
    }
    if (static_cast<int>(src.size() + snk.size()) > n_max) {
        out.status = AlphaStatus::infeasible_guard;
        return out;
    }
    if (src.empty() && snk.empty()) {
        out.raw = pruned_slack;
        return out;
    }

    // sort by the principal axis for a good staircase start
    {
        double mx = 0, my = 0, wsum = 0;
        for (int i : src) {
            mx += pos[i].real();
            my += pos[i].imag();
            wsum += 1;
        }
        for (int i : snk) {
            mx += pos[i].real();
            my += pos[i].imag();
            wsum += 1;
        }
        mx /= wsum;
        my /= wsum;
        double sxx = 0, sxy = 0, syy = 0;
        auto accum = [&](int i) {
            double dx = pos[i].real() - mx, dy = pos[i].imag() - my;
            sxx += dx * dx;
            sxy += dx * dy;
            syy += dy * dy;
        };
        for (int i : src) accum(i);
        for (int i : snk) accum(i);
        double ang = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
        cpx dir(std::cos(ang), std::sin(ang));
        auto proj_cmp = [&](int a, int b) {
            double pa = pos[a].real() * dir.real() + pos[a].imag() * dir.imag();
            double pb = pos[b].real() * dir.real() + pos[b].imag() * dir.imag();
            return pa < pb;
        };
        std::sort(src.begin(), src.end(), proj_cmp);
        std::sort(snk.begin(), snk.end(), proj_cmp);
    }

    const int ms = static_cast<int>(src.size());
    const int ns = static_cast<int>(snk.size());
    std::vector<double> supply(ms + 1), demand(ns + 1);
    std::vector<cpx> spos(ms), tpos(ns);
    std::vector<double> sbnd(ms), tbnd(ns);
    double ssum = 0.0, tsum = 0.0;
    for (int i = 0; i < ms; ++i) {
        supply[i] = objw[src[i]];
        ssum += supply[i];
        spos[i] = pos[src[i]];
        sbnd[i] = (4.0 * r - std::abs(spos[i] - z)) * inv_r;
    }
    for (int j = 0; j < ns; ++j) {
        demand[j] = -objw[snk[j]];
        tsum += demand[j];
        tpos[j] = pos[snk[j]];
        tbnd[j] = (4.0 * r - std::abs(tpos[j] - z)) * inv_r;
    }
    supply[ms] = tsum;  // boundary source feeds the sinks
    demand[ns] = ssum;  // boundary sink absorbs the sources

    auto cost = [&](int i, int j) -> double {
        if (i == ms) return j == ns ? 0.0 : tbnd[j];
        if (j == ns) return sbnd[i];
        return std::abs(spos[i] - tpos[j]) * inv_r;
    };
    TransportResult t = solve_transport(supply, demand, cost, pivot_budget, early_stop_cost);
    out.raw = t.cost + pruned_slack;
    out.upper_bound = t.early_stopped;
    if (t.status == LpStatus::iteration_limit)
        out.status = AlphaStatus::infeasible_guard;
    else if (t.status == LpStatus::degenerate)
        out.status = AlphaStatus::degenerate;
    return out;
}

double model_spacing_for(const Window& win, const AlphaOptions& opt) {
    if (opt.model_spacing > 0.0) return opt.model_spacing;
    double hint = opt.data_spacing_hint;
    if (hint <= 0.0 && win.pos.size() >= 2) {
        // cheap spacing estimate: median gap along the principal axis would
        // need a sort; nearest-neighbour over a sample is enough here
        DiscreteMeasure tmp;
        size_t stride = std::max<size_t>(1, win.pos.size() / 256);
        for (size_t i = 0; i < win.pos.size(); i += stride) tmp.atoms.push_back({win.pos[i], win.w[i]});
        SpatialIndex idx(tmp);
        hint = idx.median_nn_spacing();
    }
    double lo = 8.0 * win.r / 16384.0, hi = win.r / 64.0;
    if (hint <= 0.0) return win.r / 128.0;
    return std::clamp(hint, lo, hi);
}

// Tolerance of a midpoint model quadrature at the given spacing: moving each
// model atom by spacing/2 perturbs the dual pairing by at most
// (2/r^2) * (spacing/2) * (model mass in the window).
double model_tolerance(double spacing, double model_mass, double r) {
    return (2.0 / (r * r)) * 0.5 * spacing * model_mass;
}

double aggregation_tolerance(const Window& win) {
    if (win.agg_cell <= 0.0) return 0.0;
    return (2.0 / (win.r * win.r)) * (win.agg_cell / std::sqrt(2.0)) * win.mass;
}

struct Candidate {
    SpikeMeasure model;
    double raw = 1e300;
    double c = 0.0;
    AlphaStatus status = AlphaStatus::optimal;
    double tol = 0.0;
    bool upper_bound = false;
};

Candidate eval_model(const Window& win, const SpikeMeasure& model, double spacing, int n_max,
                     long pivot_budget = -1, double accept_raw = -1.0,
                     double accept_tol_scale = 0.0) {
    Candidate cand;
    cand.model = model;
    DiscreteMeasure nu = discretize_model(model, Ball(win.z, 4.0 * win.r), spacing);
    std::vector<cpx> npos(nu.atoms.size());
    std::vector<double> nw(nu.atoms.size());
    double nu_mass = 0.0;
    for (size_t i = 0; i < nu.atoms.size(); ++i) {
        npos[i] = nu.atoms[i].pos;
        nw[i] = nu.atoms[i].w;
        nu_mass += nw[i];
    }
    cand.tol = model_tolerance(spacing, nu_mass, win.r) + aggregation_tolerance(win);
    double early = accept_raw >= 0.0 ? accept_raw + accept_tol_scale * cand.tol : -1e300;
    RawSolve s = solve_raw(win, npos, nw, n_max, pivot_budget, early);
    cand.raw = s.raw;
    cand.c = s.c;
    cand.status = s.status;
    cand.upper_bound = s.upper_bound;
    return cand;
}

// Certified lower bound on the raw coefficient for a model supported on a
// set S: test the feasible function f(y) = min(dist(y, S), 4r - |y - z|)/r,
// which vanishes on supp(nu) and on the window boundary, so
// alpha >= (1/r) integral of phi f dmu.  Exact for any discretization of nu.
double geometric_lower_bound(const Window& win, const SpikeMeasure& model) {
    double acc = 0.0;
    const double r = win.r;
    for (size_t i = 0; i < win.pos.size(); ++i) {
        double d = std::abs(win.pos[i] - win.z);
        double pv = phi(d / r);
        if (pv == 0.0) continue;
        double f = std::min(model.distance_to_support(win.pos[i]), 4.0 * r - d) / r;
        acc += pv * win.w[i] * f;
    }
    return acc / r;
}

AlphaResult finish(const DiscreteMeasure& mu, const Ball& b, const Candidate& cand) {
    AlphaResult res;
    res.raw = cand.raw;
    res.normalization = cand.c;
    res.witness = cand.model;
    res.status = cand.status;
    res.tolerance = cand.tol;
    double d = density(mu, b).density;
    res.density_scale = d > 0.0 ? d : 1.0;
    res.value = res.raw / res.density_scale;
    return res;
}

}  // namespace

double normalization_c(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Ball& b) {
    double pm = 0.0, pn = 0.0;
    for (const auto& a : mu.atoms) {
        double d = std::abs(a.pos - b.center);
        if (d < 4.0 * b.radius) pm += a.w * phi(d / b.radius);
    }
    for (const auto& a : nu.atoms) {
        double d = std::abs(a.pos - b.center);
        if (d < 4.0 * b.radius) pn += a.w * phi(d / b.radius);
    }
    return pn != 0.0 ? pm / pn : 0.0;
}

AlphaResult alpha_pair(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const Ball& b,
                       const AlphaOptions& opt) {
    Window wmu = make_window(mu, b);
    std::vector<cpx> npos;
    std::vector<double> nw;
    double r4 = 4.0 * b.radius;
    for (const auto& a : nu.atoms) {
        if (std::abs(a.pos - b.center) >= r4) continue;
        npos.push_back(a.pos);
        nw.push_back(a.w);
    }
    if (opt.final_aggregate &&
        static_cast<int>(wmu.pos.size() + npos.size()) > opt.n_max) {
        wmu = aggregate_window(wmu, std::max(64, opt.n_max / 2));
        if (static_cast<int>(npos.size()) > opt.n_max / 2) {
            DiscreteMeasure tmp;
            for (size_t i = 0; i < npos.size(); ++i) tmp.atoms.push_back({npos[i], nw[i]});
            DiscreteMeasure agg = aggregate(tmp, 8.0 * b.radius / 1024.0);
            npos.clear();
            nw.clear();
            for (const auto& a : agg.atoms) {
                npos.push_back(a.pos);
                nw.push_back(a.w);
            }
        }
    }
    RawSolve s = solve_raw(wmu, npos, nw, opt.n_max);
    AlphaResult res;
    res.raw = s.raw;
    res.normalization = s.c;
    res.status = s.status;
    res.tolerance = aggregation_tolerance(wmu);
    double d = density(mu, b).density;
    res.density_scale = d > 0.0 ? d : 1.0;
    res.value = res.raw / res.density_scale;
    return res;
}

AlphaResult alpha_line(const DiscreteMeasure& mu, const Ball& b, const LineQuery& q,
                       const AlphaOptions& opt) {
    Window full = make_window(mu, b);
    double spacing = model_spacing_for(full, opt);

    auto line_at = [&](double ang) { return SpikeMeasure(b.center, ang, 1, 1.0); };

    if (q.mode == LineMode::fixed) {
        Window win = full;
        bool over = static_cast<int>(win.pos.size()) > opt.n_max;
        double sp = spacing;
        if (over && opt.final_aggregate) {
            win = aggregate_window(win, opt.search_cap);
            sp = std::max(spacing, 8.0 * b.radius / opt.search_cap);
        }
        Candidate cand = eval_model(win, line_at(q.fixed_angle), sp, opt.n_max);
        return finish(mu, b, cand);
    }

    double lo, hi;
    if (q.mode == LineMode::cone) {
        if (!(q.cone_half_width > 0.0)) {
            AlphaResult res;
            res.status = AlphaStatus::infeasible_guard;  // empty cone
            return res;
        }
        lo = q.cone_center - q.cone_half_width;
        hi = q.cone_center + q.cone_half_width;
    } else {
        lo = 0.0;
        hi = kPi;
    }

    int seeds = (q.mode == LineMode::cone)
                    ? std::max(5, static_cast<int>(opt.angle_seed * (hi - lo) / kPi))
                    : opt.angle_seed;
    double step = (hi - lo) / seeds;

    // certified reject shortcut: if even the lower bound exceeds the accept
    // threshold across a fine angle grid, no line in the window qualifies
    if (q.accept_raw >= 0.0) {
        int fine = 4 * seeds + 1;
        double fstep = (hi - lo) / (fine - 1);
        double lb_min = 1e300;
        for (int s = 0; s < fine; ++s)
            lb_min = std::min(lb_min, geometric_lower_bound(full, line_at(lo + s * fstep)));
        // Lipschitz-in-angle slack of the bound
        double lb_lip = 4.0 * full.phi_mass / b.radius;
        if (lb_min - fstep * lb_lip > q.accept_raw) {
            AlphaResult res;
            res.raw = lb_min - fstep * lb_lip;
            res.lower_bound_only = true;
            double d = density(mu, b).density;
            res.density_scale = d > 0.0 ? d : 1.0;
            res.value = res.raw / res.density_scale;
            return res;
        }
    }

    // search stage runs on a capped window with a matching model resolution;
    // the winner is re-evaluated at full resolution
    Window search_win = aggregate_window(full, opt.search_cap);
    double search_spacing =
        search_win.agg_cell > 0.0 ? std::max(spacing, 8.0 * b.radius / 512.0) : spacing;

    auto eval_angle = [&](double ang, const Window& win) {
        return eval_model(win, line_at(ang), search_spacing, opt.n_max + 100000, -1, q.accept_raw,
                          q.accept_tol_scale);
    };

    // rank the seeds by the certified bound, then solve in that order
    std::vector<std::pair<double, double>> ranked;  // (lower bound, angle)
    for (int s = 0; s < seeds + (q.mode == LineMode::cone ? 1 : 0); ++s) {
        double ang = lo + s * step;
        ranked.push_back({geometric_lower_bound(full, line_at(ang)), ang});
    }
    std::sort(ranked.begin(), ranked.end());

    Candidate best;
    double best_ang = ranked.front().second;
    bool accepted = false;
    int lp_budget = std::max(4, seeds / 8);
    for (int s = 0; s < static_cast<int>(ranked.size()); ++s) {
        if (s >= lp_budget && (best.raw < 1e300 || ranked[s].first > best.raw)) break;
        Candidate cand = eval_angle(ranked[s].second, search_win);
        if (cand.raw < best.raw) {
            best = cand;
            best_ang = ranked[s].second;
        }
        if (q.accept_raw >= 0.0 && cand.raw <= q.accept_raw + q.accept_tol_scale * cand.tol) {
            best = cand;
            best_ang = ranked[s].second;
            accepted = true;
            break;
        }
    }

    // golden-section refinement around the best seed
    if (!accepted && (q.accept_raw < 0.0 || best.raw > q.accept_raw)) {
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = best_ang - step, c = best_ang + step;
        double x1 = c - gr * (c - a), x2 = a + gr * (c - a);
        Candidate f1 = eval_angle(x1, search_win), f2 = eval_angle(x2, search_win);
        while (c - a > opt.angle_tol &&
               std::fabs(f1.raw - f2.raw) > 0.005 * std::min(f1.raw, f2.raw) + 1e-14) {
            if (f1.raw <= f2.raw) {
                c = x2;
                x2 = x1;
                f2 = f1;
                x1 = c - gr * (c - a);
                f1 = eval_angle(x1, search_win);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (c - a);
                f2 = eval_angle(x2, search_win);
            }
        }
        if (f1.raw < best.raw) {
            best = f1;
            best_ang = x1;
        }
        if (f2.raw < best.raw) {
            best = f2;
            best_ang = x2;
        }
    }

    // final evaluation at full resolution: skipped when the caller's accept
    // bound is already met (the accepted value and tolerance stand); always
    // for modest windows; budgeted for identity-like winners whose lattices
    // cancel; otherwise the aggregated value stands with its tolerance
    if (search_win.agg_cell > 0.0 && !accepted) {
        long full_nodes = static_cast<long>(full.pos.size()) +
                          static_cast<long>(8.0 * b.radius / spacing);
        if (full_nodes <= 6000 && static_cast<int>(full.pos.size()) <= opt.n_max) {
            Candidate fin = eval_model(full, line_at(best_ang), spacing, opt.n_max);
            if (fin.status != AlphaStatus::infeasible_guard) best = fin;
        } else if (best.raw <= 2.0 * best.tol && full_nodes <= 12000 &&
                   static_cast<int>(full.pos.size()) <= opt.n_max) {
            Candidate fin = eval_model(full, line_at(best_ang), spacing, opt.n_max, 80000);
            if (fin.status != AlphaStatus::infeasible_guard) best = fin;
        } else if (!opt.final_aggregate) {
            best.status = AlphaStatus::infeasible_guard;
        }
    }
    return finish(mu, b, best);
}

AlphaResult alpha_spike(const DiscreteMeasure& mu, const Ball& b, int k, const AlphaOptions& opt) {
    if (k < 1 || k % 2 == 0) throw std::invalid_argument("alpha_spike: k must be odd");

    // m = 1 branch: plain line search
    AlphaResult best = alpha_line(mu, b, LineQuery{}, opt);

    Window full = make_window(mu, b);
    double spacing = model_spacing_for(full, opt);
    Window screen = aggregate_window(full, 220);
    double screen_spacing = std::max(spacing, 8.0 * b.radius / 256.0);
    Window search_win = aggregate_window(full, opt.search_cap);
    double search_spacing =
        search_win.agg_cell > 0.0 ? std::max(spacing, 8.0 * b.radius / opt.search_cap) : spacing;

    // signed geometric vertex offsets, 0 first
    std::vector<double> offs = {0.0};
    for (int g = 0; g < opt.vertex_grid; ++g) {
        double t = 8.0 * b.radius * std::pow(2.0, -(opt.vertex_grid - 1 - g));
        offs.push_back(t);
        offs.push_back(-t);
    }
    double max_off = 8.0 * b.radius;

    bool boundary_hit = false;
    for (int m = 3; m <= k; m += 2) {
        if (k % m != 0) continue;
        int seeds = std::max(10, opt.angle_seed / (2 * m));
        double period = kPi / m;

        struct Pick {
            double ang, off, lb;
            int ray;
        };
        // rank the whole (angle, ray, offset) grid by the certified bound
        std::vector<Pick> grid;
        grid.reserve(static_cast<size_t>(seeds) * m * offs.size());
        for (int s = 0; s < seeds; ++s) {
            double ang = (s + 0.5) * period / seeds;
            for (int ray = 0; ray < m; ++ray) {
                cpx u = std::polar(1.0, ang + period * ray);
                for (double t : offs) {
                    SpikeMeasure cand_model(b.center - t * u, ang, m, 1.0);
                    grid.push_back({ang, t, geometric_lower_bound(full, cand_model), ray});
                }
            }
        }
        std::sort(grid.begin(), grid.end(), [](const Pick& a, const Pick& c) { return a.lb < c.lb; });

        // exact screen of the most promising grid points
        struct Scored {
            Pick p;
            double raw;
        };
        std::vector<Scored> scored;
        int screen_budget = 24;
        for (const Pick& p : grid) {
            if (static_cast<int>(scored.size()) >= screen_budget) break;
            cpx u = std::polar(1.0, p.ang + period * p.ray);
            Candidate cand = eval_model(screen, SpikeMeasure(b.center - p.off * u, p.ang, m, 1.0),
                                        screen_spacing, 1 << 30);
            scored.push_back({p, cand.raw});
        }
        std::sort(scored.begin(), scored.end(),
                  [](const Scored& a, const Scored& c) { return a.raw < c.raw; });
        scored.resize(std::min<size_t>(scored.size(), 2));

        for (const Scored& sc : scored) {
            const Pick& p = sc.p;
            // golden refinement of the base angle at fixed vertex offset
            const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
            double astep = period / seeds;
            double aa = p.ang - astep, cc = p.ang + astep;
            auto eval_ang = [&](double ang) {
                cpx uu = std::polar(1.0, ang + period * p.ray);
                return eval_model(search_win, SpikeMeasure(b.center - p.off * uu, ang, m, 1.0),
                                  search_spacing, 1 << 30);
            };
            Candidate fbest = eval_ang(p.ang);
            double bang = p.ang;
            double x1 = cc - gr * (cc - aa), x2 = aa + gr * (cc - aa);
            Candidate f1 = eval_ang(x1), f2 = eval_ang(x2);
            while (cc - aa > opt.angle_tol &&
                   std::fabs(f1.raw - f2.raw) > 0.005 * std::min(f1.raw, f2.raw) + 1e-14) {
                if (f1.raw <= f2.raw) {
                    cc = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = cc - gr * (cc - aa);
                    f1 = eval_ang(x1);
                } else {
                    aa = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = aa + gr * (cc - aa);
                    f2 = eval_ang(x2);
                }
            }
            if (f1.raw < fbest.raw) {
                fbest = f1;
                bang = x1;
            }
            if (f2.raw < fbest.raw) {
                fbest = f2;
                bang = x2;
            }
            if (fbest.raw < best.raw) {
                // re-evaluate the winner at full resolution when viable
                Candidate fin = fbest;
                long full_nodes = static_cast<long>(full.pos.size()) +
                                  static_cast<long>(8.0 * b.radius / spacing) * m;
                bool cheap = full_nodes <= 6000 || fbest.raw <= 2.0 * fbest.tol;
                if (search_win.agg_cell > 0.0 && cheap &&
                    static_cast<int>(full.pos.size()) <= opt.n_max) {
                    cpx uu = std::polar(1.0, bang + period * p.ray);
                    Candidate f = eval_model(full, SpikeMeasure(b.center - p.off * uu, bang, m, 1.0),
                                             spacing, opt.n_max, 80000);
                    if (f.status != AlphaStatus::infeasible_guard) fin = f;
                }
                if (fin.raw < best.raw) {
                    if (std::fabs(p.off) >= max_off * (1.0 - 1e-12)) boundary_hit = true;
                    best = finish(mu, b, fin);
                }
            }
        }
    }
    best.grid_boundary_hit = best.grid_boundary_hit || boundary_hit;
    return best;
}

}  // namespace hv

#include "hv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hv/cutoffs.hpp"

namespace hv {

std::optional<double> smoothed_density(const Measure1D& sigma, const StoppingData& sd, double lambda,
                                       double t) {
    double Dt = dist_D(sd, t);
    if (!(Dt > 0.0) || Dt >= 1e200) return std::nullopt;
    double p = std::sqrt(lambda) * Dt;
    // a smoothing window below the atomic resolution of sigma is flagged like
    // the D = 0 case: the convolution is not meaningful there
    if (!sigma.pos.empty() && sigma.pos.size() > 1) {
        double gap = (sigma.pos.back() - sigma.pos.front()) / (sigma.pos.size() - 1);
        if (p < 4.0 * gap) return std::nullopt;
    }
    // only positions within p of t contribute (supp eta~ in [0,1])
    double acc = 0.0;
    auto lo = std::lower_bound(sigma.pos.begin(), sigma.pos.end(), t - p);
    auto hi = std::upper_bound(sigma.pos.begin(), sigma.pos.end(), t + p);
    for (auto it = lo; it != hi; ++it) {
        size_t i = it - sigma.pos.begin();
        acc += eta_p(p, t - sigma.pos[i]) * sigma.w[i];
    }
    return acc;
}

std::vector<GrowthViolation> sigma_growth_check(const Measure1D& sigma, const StoppingData& sd,
                                                double eps, double alpha, double growth_c,
                                                int p_samples, int r_per_octave) {
    std::vector<GrowthViolation> out;
    if (sigma.pos.empty()) return out;
    double lo = sigma.pos.front(), hi = sigma.pos.back();
    // atomic sigma cannot satisfy a <= 2r bound below its own resolution; the
    // scale window starts at a granularity floor where the quantization error
    // sits inside the alpha^2 slack
    double gap = sigma.pos.size() > 1 ? (hi - lo) / (sigma.pos.size() - 1) : 1e-3;
    double floor_r = 16.0 * gap;
    double bound_factor = 1.0 + growth_c * alpha * alpha;
    double ratio = std::pow(2.0, 1.0 / r_per_octave);
    for (int s = 0; s <= p_samples; ++s) {
        double p = lo + (hi - lo) * s / p_samples;
        double Dp = dist_D(sd, p);
        double r_lo = std::pow(eps, 0.25) * (Dp >= 1e200 ? 0.0 : Dp);
        r_lo = std::max(r_lo, floor_r);
        for (double r = r_lo; r < 1.0; r *= ratio) {
            double mass = sigma.interval_mass(p, r);
            double bound = bound_factor * 2.0 * r;
            if (mass > bound) out.push_back({p, r, mass, bound});
        }
    }
    return out;
}

GBounds g_bounds_check(const Measure1D& sigma, const StoppingData& sd, double lambda, double window,
                       int samples) {
    GBounds out;
    double acc = 0.0;
    double dt = 2.0 * window / samples;
    for (int s = 0; s <= samples; ++s) {
        double t = -window + s * dt;
        auto g = smoothed_density(sigma, sd, lambda, t);
        if (!g) {
            ++out.undefined_points;
            continue;
        }
        out.max_g = std::max(out.max_g, *g);
        double dev = *g - 1.0;
        double wgt = (s == 0 || s == samples) ? 0.5 : 1.0;
        acc += wgt * dev * dev * dt;
    }
    out.l2_deviation = std::sqrt(acc);
    return out;
}

double band_operator_normal(const DiscreteMeasure& mu, const StoppingData& sd, cpx x, int k) {
    double Dp = dist_D(sd, x.real());
    if (Dp >= 1e200) return 0.0;
    double ell = Dp / 10.0;
    if (ell <= 0.0) return 0.0;
    return truncated_transform_normal(mu, x, ell, k, 1.0);
}

double commutator_tail(const SampledFunction& A, double t, int k, int series_order,
                       const PvOptions& opt) {
    if (A.max_abs_derivative() > 0.4)
        throw std::invalid_argument("commutator_tail: ||A'||_inf beyond the series domain");
    KernelSeries series = kernel_series(k, series_order);
    double du = opt.u_step > 0.0 ? opt.u_step : A.h;
    double range = opt.range > 0.0 ? opt.range : (A.t_end() - A.t0) + 8.0;
    long steps = static_cast<long>(std::ceil(range / du));
    double at = A(t);
    double acc = 0.0;
    for (long j = 1; j <= steps; ++j) {
        double u = (static_cast<double>(j) - 0.5) * du;
        for (int sign = -1; sign <= 1; sign += 2) {
            double s = t + sign * u;
            double diff = at - A(s);
            double ts = t - s;
            double base = diff / ts;
            // sum over odd l >= 3 of c_{k,l} (diff/ts)^l / ts
            double pw = base * base * base;
            double term = 0.0;
            for (int l = 3; l <= series.truncation; l += 2) {
                term += series.coefficient(l) * pw;
                pw *= base * base;
            }
            acc += term / ts * du;
        }
    }
    return acc;
}

LowerBoundLedger lower_bound_ledger(const SampledFunction& A, int k, double slope_guard,
                                    const PvOptions& opt, int knot_stride) {
    LowerBoundLedger out;
    out.grad_sup = A.max_abs_derivative();
    if (out.grad_sup > slope_guard)
        throw std::invalid_argument("lower_bound_ledger: ||A'||_inf beyond the slope guard");
    out.grad_l2_squared = A.derivative_l2_squared();
    PvNormResult norms = pv_norm_over_graph(A, k, nullptr, opt, knot_stride);
    out.lhs = norms.l2_squared;
    out.max_error_estimate = norms.max_error_estimate;
    return out;
}

}  // namespace hv

#include "hv/pv_transform.hpp"

#include <cmath>

#include "hv/cutoffs.hpp"
#include "hv/kernels.hpp"

namespace hv {

namespace {

struct GraphEval {
    const SampledFunction* A;
    std::vector<double> dknots;

    explicit GraphEval(const SampledFunction& a) : A(&a), dknots(a.derivative_knots()) {}

    double value(double s) const { return (*A)(s); }

    double slope(double s) const {
        if (dknots.empty()) return 0.0;
        double u = (s - A->t0) / A->h;
        if (u <= 0.0 || u >= static_cast<double>(dknots.size() - 1)) return 0.0;
        int j = static_cast<int>(u);
        double frac = u - j;
        return dknots[j] * (1.0 - frac) + dknots[j + 1] * frac;
    }

    double jac(double s) const {
        double d = slope(s);
        return std::sqrt(1.0 + d * d);
    }
};

double single_scale(const GraphEval& g, double t, int k, const std::optional<PvBand>& band,
                    double du, double range) {
    double at = g.value(t);
    long steps = static_cast<long>(std::ceil(range / du));
    double acc = 0.0;
    for (long j = 1; j <= steps; ++j) {
        double u = (static_cast<double>(j) - 0.5) * du;
        for (int sign = -1; sign <= 1; sign += 2) {
            double s = t + sign * u;
            double as = g.value(s);
            cpx d(t - s, at - as);
            double ad = std::abs(d);
            if (ad == 0.0) continue;
            double cut = 1.0;
            if (band) {
                if (band->r2 <= band->r1) return 0.0;
                cut = psi(ad / band->r1) - psi(ad / band->r2);
                if (cut == 0.0) continue;
            }
            double kk = kernel_normal(k, d);
            acc += cut * kk * g.jac(s) * du;
        }
    }
    return acc;
}

}  // namespace

PvResult pv_graph_transform(const SampledFunction& A, double t, int k, std::optional<PvBand> band,
                            const PvOptions& opt) {
    PvResult out;
    if (band && band->r2 <= band->r1) return out;  // zero band convention
    GraphEval g(A);
    double du = opt.u_step > 0.0 ? opt.u_step : A.h;
    double range = opt.range > 0.0 ? opt.range : (A.t_end() - A.t0) + 8.0;
    out.value = single_scale(g, t, k, band, du, range);
    double coarse = single_scale(g, t, k, band, 2.0 * du, range);
    out.error_estimate = std::fabs(out.value - coarse);
    if (opt.requested_tol > 0.0 && out.error_estimate > opt.requested_tol) out.step_too_coarse = true;
    return out;
}

double PvNormResult::lp_norm(double p) const {
    if (p == 2.0) return std::sqrt(l2_squared);
    if (p == 4.0) return std::pow(l4_fourth, 0.25);
    return 0.0;
}

PvNormResult pv_norm_over_graph(const SampledFunction& A, int k,
                                const std::function<std::optional<PvBand>(double)>& band_of_t,
                                const PvOptions& opt, int knot_stride) {
    PvNormResult out;
    GraphEval g(A);
    int n = static_cast<int>(A.values.size());
    if (n < 2) return out;
    int stride = std::max(1, knot_stride);
    double prev2 = 0.0, prev4 = 0.0, prev_t = A.t0;
    bool have_prev = false;
    for (int j = 0; j < n; j += stride) {
        double t = A.t0 + j * A.h;
        std::optional<PvBand> band = band_of_t ? band_of_t(t) : std::nullopt;
        PvResult pv = pv_graph_transform(A, t, k, band, opt);
        out.max_error_estimate = std::max(out.max_error_estimate, pv.error_estimate);
        double jac = g.jac(t);
        double v2 = pv.value * pv.value * jac;
        double v4 = v2 * pv.value * pv.value;
        if (have_prev) {
            double dt = t - prev_t;
            out.l2_squared += 0.5 * (prev2 + v2) * dt;
            out.l4_fourth += 0.5 * (prev4 + v4) * dt;
        }
        prev2 = v2;
        prev4 = v4;
        prev_t = t;
        have_prev = true;
    }
    return out;
}

}  // namespace hv

#include "hv/generators.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace hv {

namespace {

// Smoothed zigzag with the requested slope: |A'| <= slope everywhere,
// A' = +/-slope away from the turning points.
double saw_shape(double t, double slope, double period) {
    double u = std::fmod(t / period, 1.0);
    if (u < 0.0) u += 1.0;
    double tri = (u < 0.5) ? u : 1.0 - u;     // in [0, 1/2]
    return slope * period * tri;
}

double sine_shape(double t, double period) { return std::sin(2.0 * kPi * t / period); }

}  // namespace

SampledFunction graph_profile(const GeneratorSpec& spec, double step) {
    double lo = -spec.half_length, hi = spec.half_length;
    if (spec.shape == "bump") {
        double a = spec.amplitude, c0 = spec.center, w = spec.width;
        return SampledFunction::sample(lo, hi, step,
                                       [=](double t) { return a * bump_shape((t - c0) / w); });
    }
    if (spec.shape == "saw") {
        double s = spec.slope, p = spec.period, L = spec.half_length;
        return SampledFunction::sample(lo, hi, step, [=](double t) {
            // taper to zero near the ends so the support is compact
            double edge = std::min(1.0, std::max(0.0, (L - std::fabs(t)) / (0.1 * L)));
            return saw_shape(t, s, p) * edge;
        });
    }
    if (spec.shape == "sine") {
        double a = spec.amplitude, p = spec.period, L = spec.half_length;
        return SampledFunction::sample(lo, hi, step, [=](double t) {
            double edge = std::min(1.0, std::max(0.0, (L - std::fabs(t)) / (0.1 * L)));
            return a * sine_shape(t, p) * edge;
        });
    }
    throw std::invalid_argument("graph_profile: unknown shape " + spec.shape);
}

DiscreteMeasure cantor_measure(int level) {
    if (level < 0 || level > 12) throw std::invalid_argument("cantor_measure: level must be in [0,12]");
    std::vector<cpx> cells = {cpx(0.0, 0.0)};
    double side = 1.0;
    const cpx corners[4] = {cpx(0, 0), cpx(0.75, 0), cpx(0, 0.75), cpx(0.75, 0.75)};
    for (int g = 0; g < level; ++g) {
        std::vector<cpx> next;
        next.reserve(cells.size() * 4);
        for (cpx base : cells)
            for (const cpx& corner : corners) next.push_back(base + corner * side);
        cells.swap(next);
        side *= 0.25;
    }
    DiscreteMeasure mu;
    mu.atoms.reserve(cells.size());
    double w = std::sqrt(2.0) / static_cast<double>(cells.size());
    cpx half(side / 2.0, side / 2.0);
    for (cpx base : cells) mu.atoms.push_back({base + half, w});
    return mu;
}

DiscreteMeasure generate(const GeneratorSpec& spec) {
    if (spec.kind == "segment") {
        if (!(spec.spacing > 0.0)) throw std::invalid_argument("generate: spacing must be positive");
        DiscreteMeasure mu;
        long n = static_cast<long>(std::llround(2.0 * spec.half_length / spec.spacing));
        mu.atoms.reserve(n + 1);
        for (long kk = 0; kk <= n; ++kk)
            mu.atoms.push_back({cpx(-spec.half_length + kk * spec.spacing, 0.0), spec.spacing});
        return mu;
    }
    if (spec.kind == "spike") {
        SpikeMeasure nu(cpx(spec.vertex_x, spec.vertex_y), spec.base_angle, spec.m, spec.c);
        return discretize_model(nu, Ball(cpx(spec.vertex_x, spec.vertex_y), spec.window_radius),
                                spec.spacing);
    }
    if (spec.kind == "cantor") return cantor_measure(spec.level);
    if (spec.kind == "lipschitz-graph") {
        SampledFunction A = graph_profile(spec, spec.spacing);
        auto dA = A.derivative_knots();
        DiscreteMeasure mu;
        mu.atoms.reserve(A.values.size());
        // arclength quadrature of t -> (t, A(t)) at the knot midpoints
        for (size_t j = 0; j + 1 < A.values.size(); ++j) {
            double t = A.t0 + (j + 0.5) * A.h;
            double a = 0.5 * (A.values[j] + A.values[j + 1]);
            double slope = (A.values[j + 1] - A.values[j]) / A.h;
            mu.atoms.push_back({cpx(t, a), A.h * std::sqrt(1.0 + slope * slope)});
        }
        (void)dA;
        return mu;
    }
    if (spec.kind == "perturbed-line") {
        std::mt19937_64 rng(spec.seed);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        int modes = std::max(1, spec.modes);
        std::vector<double> amp(modes), phase(modes);
        for (int j = 0; j < modes; ++j) {
            amp[j] = unif(rng) / (j + 1.0);
            phase[j] = 2.0 * kPi * unif(rng);
        }
        double L = spec.half_length;
        auto field = [&](double t) {
            double v = 0.0;
            for (int j = 0; j < modes; ++j) v += amp[j] * std::sin((j + 1) * kPi * t / L + phase[j]);
            return v;
        };
        // normalize the field sup to 1
        double sup = 0.0;
        long n = static_cast<long>(std::llround(2.0 * L / spec.spacing));
        for (long kk = 0; kk <= n; ++kk) sup = std::max(sup, std::fabs(field(-L + kk * spec.spacing)));
        if (sup == 0.0) sup = 1.0;
        DiscreteMeasure mu;
        mu.atoms.reserve(n + 1);
        for (long kk = 0; kk <= n; ++kk) {
            double t = -L + kk * spec.spacing;
            mu.atoms.push_back({cpx(t, spec.eta * field(t) / sup), spec.spacing});
        }
        return mu;
    }
    throw std::invalid_argument("generate: unknown kind " + spec.kind);
}

}  // namespace hv

#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace hv {

/// Real function sampled on a uniform knot grid t0 + j*h, j = 0..n-1, with
/// linear interpolation between knots and zero extension outside.
struct SampledFunction {
    double t0 = 0.0;
    double h = 1.0;
    std::vector<double> values;

    static SampledFunction sample(double lo, double hi, double step,
                                  const std::function<double(double)>& f) {
        if (!(step > 0.0) || !(hi > lo)) throw std::invalid_argument("SampledFunction: bad grid");
        SampledFunction s;
        s.t0 = lo;
        s.h = step;
        int n = static_cast<int>(std::floor((hi - lo) / step)) + 1;
        s.values.resize(n);
        for (int j = 0; j < n; ++j) s.values[j] = f(lo + j * step);
        return s;
    }

    double t_end() const { return t0 + h * (values.size() - 1); }

    double operator()(double t) const {
        if (values.empty()) return 0.0;
        double u = (t - t0) / h;
        if (u <= 0.0 || u >= static_cast<double>(values.size() - 1)) {
            // zero extension, but keep the endpoint values at the knots
            if (u == 0.0) return values.front();
            if (u == static_cast<double>(values.size() - 1)) return values.back();
            return 0.0;
        }
        int j = static_cast<int>(u);
        double frac = u - j;
        return values[j] * (1.0 - frac) + values[j + 1] * frac;
    }

    /// Central-difference derivative at knots, one-sided at the ends;
    /// linearly interpolated (zero outside).
    std::vector<double> derivative_knots() const {
        int n = static_cast<int>(values.size());
        std::vector<double> d(n, 0.0);
        if (n < 2) return d;
        d[0] = (values[1] - values[0]) / h;
        d[n - 1] = (values[n - 1] - values[n - 2]) / h;
        for (int j = 1; j + 1 < n; ++j) d[j] = (values[j + 1] - values[j - 1]) / (2.0 * h);
        return d;
    }

    double max_abs_derivative() const {
        double best = 0.0;
        for (size_t j = 0; j + 1 < values.size(); ++j)
            best = std::max(best, std::fabs(values[j + 1] - values[j]) / h);
        return best;
    }

    /// Trapezoid integral of |A'|^2 over the knot range.
    double derivative_l2_squared() const {
        auto d = derivative_knots();
        double acc = 0.0;
        for (size_t j = 0; j + 1 < d.size(); ++j)
            acc += 0.5 * (d[j] * d[j] + d[j + 1] * d[j + 1]) * h;
        return acc;
    }
};

/// C^2 bump: 1 at the center, smoothstep-squared falloff, support [-1,1].
inline double bump_shape(double u) {
    double a = std::fabs(u);
    if (a >= 1.0) return 0.0;
    double v = 1.0 - a;          // linear tent
    double s = v * v * (3.0 - 2.0 * v);  // smoothstep of the tent
    return s;
}

}  // namespace hv

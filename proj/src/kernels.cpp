#include "hv/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace hv {

namespace {

cpx int_pow(cpx z, int k) {
    cpx acc(1.0, 0.0);
    cpx base = z;
    int e = k;
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

}  // namespace

cpx kernel(int k, cpx z) {
    if (k < 1 || k % 2 == 0) throw std::invalid_argument("kernel: k must be odd positive");
    double az = std::abs(z);
    if (az == 0.0) throw std::invalid_argument("kernel: z must be nonzero");
    return int_pow(z, k) / std::pow(az, k + 1);
}

double kernel_normal(int k, cpx z) { return kernel(k, z).imag(); }

cpx truncated_transform(const DiscreteMeasure& mu, cpx z, double r, int k,
                        std::optional<double> upper, const TruncationOptions& opt) {
    if (!(r > 0.0)) throw std::invalid_argument("truncated_transform: r must be positive");
    if (upper) {
        if (!(*upper > r)) return cpx(0.0, 0.0);  // zero band convention
        cpx lo = truncated_transform(mu, z, r, k, std::nullopt, opt);
        cpx hi = truncated_transform(mu, z, *upper, k, std::nullopt, opt);
        return lo - hi;
    }
    cpx acc(0.0, 0.0);
    for (const auto& a : mu.atoms) {
        cpx d = z - a.pos;
        double ad = std::abs(d);
        if (ad == 0.0) continue;  // Psi support excludes the center
        double cut = opt.smooth ? psi(ad / r) : (ad > r ? 1.0 : 0.0);
        if (cut == 0.0) continue;
        acc += cut * kernel(k, d) * a.w;
    }
    return acc;
}

double truncated_transform_normal(const DiscreteMeasure& mu, cpx z, double r, int k,
                                  std::optional<double> upper, const TruncationOptions& opt) {
    return truncated_transform(mu, z, r, k, upper, opt).imag();
}

double maximal_transform(const DiscreteMeasure& mu, cpx z, int k,
                         const std::vector<double>& r_grid) {
    double best = 0.0;
    for (double r : r_grid) best = std::max(best, std::abs(truncated_transform(mu, z, r, k)));
    return best;
}

std::vector<double> default_r_grid(const DiscreteMeasure& mu, int per_octave) {
    std::vector<double> grid;
    if (mu.atoms.size() < 2) return {1.0};
    SpatialIndex idx(mu);
    double gap = idx.median_nn_spacing();
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& a : mu.atoms) {
        xmin = std::min(xmin, a.pos.real());
        xmax = std::max(xmax, a.pos.real());
        ymin = std::min(ymin, a.pos.imag());
        ymax = std::max(ymax, a.pos.imag());
    }
    double diam = std::hypot(xmax - xmin, ymax - ymin);
    if (gap <= 0.0) gap = diam > 0.0 ? diam * 1e-3 : 1.0;
    if (diam <= 0.0) diam = gap;
    double lo = gap / 4.0, hi = 2.0 * diam;
    double ratio = std::pow(2.0, 1.0 / per_octave);
    for (double r = lo; r <= hi * (1.0 + 1e-12); r *= ratio) grid.push_back(r);
    return grid;
}

OperatorNormEstimate operator_norm_estimate(const DiscreteMeasure& mu, int k,
                                            const std::vector<double>& r_grid, int iterations,
                                            int n_max, uint64_t seed) {
    OperatorNormEstimate out;
    const int n = static_cast<int>(mu.atoms.size());
    if (n <= 1) return out;
    if (n > n_max) throw std::invalid_argument("operator_norm_estimate: atom count exceeds guard");

    std::vector<double> sw(n);
    for (int i = 0; i < n; ++i) sw[i] = std::sqrt(mu.atoms[i].w);

    std::vector<cpx> M(static_cast<size_t>(n) * n);
    std::vector<cpx> x(n), y(n), w(n);

    for (double r : r_grid) {
        for (int i = 0; i < n; ++i) {
            M[static_cast<size_t>(i) * n + i] = cpx(0.0, 0.0);
            for (int j = i + 1; j < n; ++j) {
                cpx d = mu.atoms[i].pos - mu.atoms[j].pos;
                double ad = std::abs(d);
                cpx val(0.0, 0.0);
                if (ad > 0.0) {
                    double cut = psi(ad / r);
                    if (cut != 0.0) val = cut * kernel(k, d);
                }
                M[static_cast<size_t>(i) * n + j] = val * (sw[i] * sw[j]);
                // odd kernel: K(-d) = -K(d)
                M[static_cast<size_t>(j) * n + i] = -val * (sw[i] * sw[j]);
            }
        }
        // power iteration on M* M with a fixed seed
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        for (int i = 0; i < n; ++i) x[i] = cpx(unif(rng), unif(rng));
        double norm_prev = 0.0;
        bool conv = false;
        int used = 0;
        for (int it = 0; it < iterations; ++it) {
            ++used;
            // y = M x
            for (int i = 0; i < n; ++i) {
                cpx acc(0.0, 0.0);
                const cpx* row = &M[static_cast<size_t>(i) * n];
                for (int j = 0; j < n; ++j) acc += row[j] * x[j];
                y[i] = acc;
            }
            // w = M^* y  (conjugate transpose)
            for (int j = 0; j < n; ++j) {
                cpx acc(0.0, 0.0);
                for (int i = 0; i < n; ++i) acc += std::conj(M[static_cast<size_t>(i) * n + j]) * y[i];
                w[j] = acc;
            }
            double nw = 0.0;
            for (int j = 0; j < n; ++j) nw += std::norm(w[j]);
            nw = std::sqrt(nw);
            if (nw == 0.0) {
                norm_prev = 0.0;
                conv = true;
                break;
            }
            for (int j = 0; j < n; ++j) x[j] = w[j] / nw;
            double est = std::sqrt(nw);  // ||M*M x|| -> sigma_max^2
            if (it > 2 && std::fabs(est - norm_prev) <= 1e-6 * std::max(est, 1e-300)) {
                norm_prev = est;
                conv = true;
                break;
            }
            norm_prev = est;
        }
        out.iterations_used = std::max(out.iterations_used, used);
        if (!conv) out.converged = false;
        if (norm_prev > out.value) {
            out.value = norm_prev;
            out.best_r = r;
        }
    }
    return out;
}

}  // namespace hv

#include "hv/models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace hv {

SpikeMeasure::SpikeMeasure(cpx v, double angle, int rays, double density)
    : vertex(v), base_angle(angle), m(rays), c(density) {
    if (m < 1) throw std::invalid_argument("SpikeMeasure: m must be positive");
    if (!(c > 0.0)) throw std::invalid_argument("SpikeMeasure: density must be positive");
    double period = kPi / m;
    base_angle = std::fmod(base_angle, period);
    if (base_angle < 0.0) base_angle += period;
}

std::vector<Line> SpikeMeasure::lines() const {
    std::vector<Line> out;
    out.reserve(m);
    for (int n = 0; n < m; ++n) out.emplace_back(vertex, ray_angle(n));
    return out;
}

double SpikeMeasure::distance_to_support(cpx p) const {
    double best = 1e300;
    for (int n = 0; n < m; ++n) best = std::min(best, Line(vertex, ray_angle(n)).distance_to(p));
    return best;
}

double SpikeMeasure::distance_to_other_lines(cpx p, int skip) const {
    double best = 1e300;
    for (int n = 0; n < m; ++n) {
        if (n == skip) continue;
        best = std::min(best, Line(vertex, ray_angle(n)).distance_to(p));
    }
    return best;
}

double SpikeMeasure::ball_mass(const Ball& b) const {
    double mass = 0.0;
    for (int n = 0; n < m; ++n) {
        double d = Line(vertex, ray_angle(n)).distance_to(b.center);
        if (d < b.radius) mass += 2.0 * std::sqrt(b.radius * b.radius - d * d);
    }
    return c * mass;
}

double SpikeMeasure::total_mass_in_window(const Ball& window) const { return ball_mass(window); }

DiscreteMeasure discretize_model(const SpikeMeasure& nu, const Ball& window, double spacing) {
    if (!(spacing > 0.0)) throw std::invalid_argument("discretize_model: spacing must be positive");
    if (!(spacing < window.radius / 10.0))
        throw std::invalid_argument("discretize_model: spacing must be < window.radius/10");
    DiscreteMeasure out;
    for (int n = 0; n < nu.m; ++n) {
        Line ln(nu.vertex, nu.ray_angle(n));
        double d = ln.distance_to(window.center);
        if (d >= window.radius) continue;
        double half = std::sqrt(window.radius * window.radius - d * d);
        // foot of the window center on the line, in arclength from the vertex
        cpx u = ln.direction();
        double s0 = (window.center - nu.vertex).real() * u.real() +
                    (window.center - nu.vertex).imag() * u.imag();
        double lo = s0 - half, hi = s0 + half;
        // vertex-anchored midpoint lattice: s = (j + 1/2) * spacing, j integer
        long jlo = static_cast<long>(std::ceil(lo / spacing - 0.5));
        long jhi = static_cast<long>(std::floor(hi / spacing - 0.5));
        for (long j = jlo; j <= jhi; ++j) {
            double s = (static_cast<double>(j) + 0.5) * spacing;
            cpx p = nu.vertex + s * u;
            if (std::abs(p - window.center) < window.radius)
                out.atoms.push_back({p, nu.c * spacing});
        }
    }
    return out;
}

double density_ratio_spike(const SpikeMeasure& nu) { return static_cast<double>(nu.m); }

double density_ratio_class(int k) {
    if (k < 1 || k % 2 == 0) throw std::invalid_argument("density_ratio_class: k must be odd positive");
    return static_cast<double>(k);
}

namespace {

// Feasible flat scale at probe (x on ray 0 at distance d from the vertex,
// r = 1): best t over z on the support with B(z,t) inside B(x,1) and the
// 120t-ball around z meeting one line only.
double best_flat_scale(const SpikeMeasure& nu, double d, int grid) {
    if (nu.m == 1) return 1.0;  // z = x, any t < r works
    cpx x = nu.vertex + d * Line(nu.vertex, nu.ray_angle(0)).direction();
    auto value_at = [&](int n, const cpx& u, double rho) {
        cpx z = nu.vertex + rho * u;
        double room = 1.0 - std::abs(z - x);
        if (room <= 0.0) return 0.0;
        double sep = nu.distance_to_other_lines(z, n) / 120.0;
        return std::min(room, sep);
    };
    double best = 0.0;
    for (int n = 0; n < nu.m; ++n) {
        cpx u = Line(nu.vertex, nu.ray_angle(n)).direction();
        // z = vertex + rho * u, rho signed; |z - x| <= 1 required, so rho is
        // confined to an interval around the projection of x onto the line
        double proj = (x - nu.vertex).real() * u.real() + (x - nu.vertex).imag() * u.imag();
        double step = 1.0 / grid;
        double best_rho = proj;
        double best_n = 0.0;
        for (int g = -grid; g <= grid; ++g) {
            double rho = proj + g * step;
            double v = value_at(n, u, rho);
            if (v > best_n) {
                best_n = v;
                best_rho = rho;
            }
        }
        // zoom around the coarse winner
        for (int pass = 0; pass < 3; ++pass) {
            double lo = best_rho - step, hi = best_rho + step;
            step = (hi - lo) / 64.0;
            for (double rho = lo; rho <= hi + step / 2; rho += step) {
                double v = value_at(n, u, rho);
                if (v > best_n) {
                    best_n = v;
                    best_rho = rho;
                }
            }
        }
        best = std::max(best, best_n);
    }
    return best;
}

}  // namespace

LambdaEstimate lambda_constant(const SpikeMeasure& nu, int grid, double tol) {
    LambdaEstimate est;
    if (nu.m == 1) {
        est.value = 1.0;
        return est;
    }
    auto sweep = [&](int g) {
        double worst = 1e300;
        // d = 0 plus a geometric grid out to far distances; the infimum over
        // probe positions is attained near the vertex but we scan broadly
        std::vector<double> ds = {0.0};
        for (int i = 0; i <= g; ++i) ds.push_back(0.01 * std::pow(2000.0, static_cast<double>(i) / g));
        for (double d : ds) worst = std::min(worst, best_flat_scale(nu, d, g));
        return worst;
    };
    double coarse = sweep(grid);
    double fine = sweep(2 * grid);
    est.value = fine;
    est.last_change = std::fabs(fine - coarse);
    est.converged = est.last_change <= tol * std::max(1.0, std::fabs(fine));
    return est;
}

double lambda_k(int k) {
    if (k < 1 || k % 2 == 0) throw std::invalid_argument("lambda_k: k must be odd positive");
    static std::map<int, double> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    double lam = 1.0;
    for (int m = 1; m <= k; ++m) {
        if (k % m != 0) continue;
        lam = std::min(lam, lambda_constant(SpikeMeasure(cpx(0, 0), 0.0, m, 1.0)).value);
    }
    cache[k] = lam;
    return lam;
}

}  // namespace hv

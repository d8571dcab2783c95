#include "hv/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hv {

double DiscreteMeasure::total_mass() const {
    double m = 0.0;
    for (const auto& a : atoms) m += a.w;
    return m;
}

void DiscreteMeasure::validate() const {
    for (const auto& a : atoms) {
        if (!(a.w > 0.0) || !std::isfinite(a.w))
            throw std::invalid_argument("DiscreteMeasure: weights must be strictly positive and finite");
        if (!std::isfinite(a.pos.real()) || !std::isfinite(a.pos.imag()))
            throw std::invalid_argument("DiscreteMeasure: non-finite atom position");
    }
}

DiscreteMeasure DiscreteMeasure::scaled_weights(double s) const {
    DiscreteMeasure out = *this;
    for (auto& a : out.atoms) a.w *= s;
    return out;
}

DiscreteMeasure DiscreteMeasure::translated(cpx dz) const {
    DiscreteMeasure out = *this;
    for (auto& a : out.atoms) a.pos += dz;
    return out;
}

DiscreteMeasure DiscreteMeasure::rotated(double theta, cpx pivot) const {
    DiscreteMeasure out = *this;
    cpx rot(std::cos(theta), std::sin(theta));
    for (auto& a : out.atoms) a.pos = pivot + rot * (a.pos - pivot);
    return out;
}

DiscreteMeasure DiscreteMeasure::dilated(double s, cpx pivot) const {
    DiscreteMeasure out = *this;
    for (auto& a : out.atoms) {
        a.pos = pivot + s * (a.pos - pivot);
        a.w *= s;
    }
    return out;
}

BallDensity density(const DiscreteMeasure& mu, const Ball& b) {
    double m = 0.0;
    for (const auto& a : mu.atoms)
        if (std::abs(a.pos - b.center) < b.radius) m += a.w;
    return {m, m / (2.0 * b.radius)};
}

// ---------------------------------------------------------------------------
// SpatialIndex

SpatialIndex::SpatialIndex(const DiscreteMeasure& mu) : mu_(&mu) {
    const auto& atoms = mu.atoms;
    if (atoms.empty()) {
        bins_.resize(1);
        return;
    }
    double xmin = atoms[0].pos.real(), xmax = xmin;
    double ymin = atoms[0].pos.imag(), ymax = ymin;
    for (const auto& a : atoms) {
        xmin = std::min(xmin, a.pos.real());
        xmax = std::max(xmax, a.pos.real());
        ymin = std::min(ymin, a.pos.imag());
        ymax = std::max(ymax, a.pos.imag());
    }
    double span = std::max(xmax - xmin, ymax - ymin);
    if (span <= 0.0) span = 1.0;
    // aim for ~1e5 bins max
    int target = static_cast<int>(std::ceil(std::sqrt(std::min<double>(atoms.size(), 100000.0))));
    target = std::max(target, 1);
    cell_ = span / target;
    x0_ = xmin;
    y0_ = ymin;
    nx_ = static_cast<int>((xmax - xmin) / cell_) + 1;
    ny_ = static_cast<int>((ymax - ymin) / cell_) + 1;
    bins_.resize(static_cast<size_t>(nx_) * ny_);
    for (int i = 0; i < static_cast<int>(atoms.size()); ++i) bins_[bin_of(atoms[i].pos)].push_back(i);
}

int SpatialIndex::bin_of(cpx p) const {
    int ix = static_cast<int>((p.real() - x0_) / cell_);
    int iy = static_cast<int>((p.imag() - y0_) / cell_);
    ix = std::clamp(ix, 0, nx_ - 1);
    iy = std::clamp(iy, 0, ny_ - 1);
    return iy * nx_ + ix;
}

double SpatialIndex::ball_mass(const Ball& b) const {
    if (mu_->atoms.empty()) return 0.0;
    double m = 0.0;
    int ix0 = std::clamp(static_cast<int>((b.center.real() - b.radius - x0_) / cell_), 0, nx_ - 1);
    int ix1 = std::clamp(static_cast<int>((b.center.real() + b.radius - x0_) / cell_), 0, nx_ - 1);
    int iy0 = std::clamp(static_cast<int>((b.center.imag() - b.radius - y0_) / cell_), 0, ny_ - 1);
    int iy1 = std::clamp(static_cast<int>((b.center.imag() + b.radius - y0_) / cell_), 0, ny_ - 1);
    for (int iy = iy0; iy <= iy1; ++iy)
        for (int ix = ix0; ix <= ix1; ++ix)
            for (int i : bins_[static_cast<size_t>(iy) * nx_ + ix]) {
                const Atom& a = mu_->atoms[i];
                if (std::abs(a.pos - b.center) < b.radius) m += a.w;
            }
    return m;
}

std::vector<int> SpatialIndex::ball_atoms(const Ball& b) const {
    std::vector<int> out;
    if (mu_->atoms.empty()) return out;
    int ix0 = std::clamp(static_cast<int>((b.center.real() - b.radius - x0_) / cell_), 0, nx_ - 1);
    int ix1 = std::clamp(static_cast<int>((b.center.real() + b.radius - x0_) / cell_), 0, nx_ - 1);
    int iy0 = std::clamp(static_cast<int>((b.center.imag() - b.radius - y0_) / cell_), 0, ny_ - 1);
    int iy1 = std::clamp(static_cast<int>((b.center.imag() + b.radius - y0_) / cell_), 0, ny_ - 1);
    for (int iy = iy0; iy <= iy1; ++iy)
        for (int ix = ix0; ix <= ix1; ++ix)
            for (int i : bins_[static_cast<size_t>(iy) * nx_ + ix])
                if (std::abs(mu_->atoms[i].pos - b.center) < b.radius) out.push_back(i);
    std::sort(out.begin(), out.end());
    return out;
}

double SpatialIndex::median_nn_spacing() const {
    if (nn_cache_ >= 0.0) return nn_cache_;
    const auto& atoms = mu_->atoms;
    if (atoms.size() < 2) return nn_cache_ = 0.0;
    size_t stride = std::max<size_t>(1, atoms.size() / 512);
    std::vector<double> nn;
    for (size_t i = 0; i < atoms.size(); i += stride) {
        cpx p = atoms[i].pos;
        double best = 1e300;
        // expanding ring search around the atom's bin
        int ix = std::clamp(static_cast<int>((p.real() - x0_) / cell_), 0, nx_ - 1);
        int iy = std::clamp(static_cast<int>((p.imag() - y0_) / cell_), 0, ny_ - 1);
        for (int ring = 0; ring <= std::max(nx_, ny_); ++ring) {
            for (int dy = -ring; dy <= ring; ++dy)
                for (int dx = -ring; dx <= ring; ++dx) {
                    if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
                    int jx = ix + dx, jy = iy + dy;
                    if (jx < 0 || jx >= nx_ || jy < 0 || jy >= ny_) continue;
                    for (int j : bins_[static_cast<size_t>(jy) * nx_ + jx]) {
                        if (j == static_cast<int>(i)) continue;
                        best = std::min(best, std::abs(atoms[j].pos - p));
                    }
                }
            if (best < ring * cell_) break;
        }
        if (best < 1e300) nn.push_back(best);
    }
    if (nn.empty()) return nn_cache_ = 0.0;
    std::nth_element(nn.begin(), nn.begin() + nn.size() / 2, nn.end());
    return nn_cache_ = nn[nn.size() / 2];
}

std::vector<std::pair<double, double>> density_profile(const DiscreteMeasure& mu, cpx x,
                                                       const std::vector<double>& scales) {
    for (size_t i = 0; i + 1 < scales.size(); ++i)
        if (!(scales[i] > scales[i + 1]))
            throw std::invalid_argument("density_profile: scales must be positive descending");
    std::vector<std::pair<double, double>> out;
    out.reserve(scales.size());
    for (double r : scales) {
        if (!(r > 0.0)) throw std::invalid_argument("density_profile: nonpositive scale");
        out.emplace_back(r, density(mu, Ball(x, r)).density);
    }
    return out;
}

// ---------------------------------------------------------------------------
// 1-D measures

void Measure1D::finalize() {
    std::vector<size_t> order(pos.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return pos[a] < pos[b]; });
    std::vector<double> p(pos.size()), ww(pos.size());
    for (size_t i = 0; i < order.size(); ++i) {
        p[i] = pos[order[i]];
        ww[i] = w[order[i]];
    }
    pos.swap(p);
    w.swap(ww);
    prefix.assign(pos.size() + 1, 0.0);
    for (size_t i = 0; i < pos.size(); ++i) prefix[i + 1] = prefix[i] + w[i];
}

double Measure1D::interval_mass(double c, double r) const {
    if (pos.empty()) return 0.0;
    auto lo = std::upper_bound(pos.begin(), pos.end(), c - r);  // first pos > c-r
    auto hi = std::lower_bound(pos.begin(), pos.end(), c + r);  // first pos >= c+r
    size_t i0 = lo - pos.begin(), i1 = hi - pos.begin();
    if (i1 <= i0) return 0.0;
    return prefix[i1] - prefix[i0];
}

Measure1D pushforward_projection(const DiscreteMeasure& mu, const std::vector<int>& subset) {
    Measure1D out;
    out.pos.reserve(subset.size());
    out.w.reserve(subset.size());
    for (int i : subset) {
        if (i < 0 || i >= static_cast<int>(mu.atoms.size()))
            throw std::out_of_range("pushforward_projection: bad atom index");
        out.pos.push_back(mu.atoms[i].pos.real());
        out.w.push_back(mu.atoms[i].w);
    }
    out.finalize();
    return out;
}

DiscreteMeasure aggregate(const DiscreteMeasure& mu, double cell) {
    if (!(cell > 0.0)) throw std::invalid_argument("aggregate: cell must be positive");
    struct Acc {
        double wx = 0, wy = 0, w = 0;
    };
    std::vector<std::pair<int64_t, Acc>> cells;
    auto key = [&](cpx p) {
        int64_t ix = static_cast<int64_t>(std::floor(p.real() / cell));
        int64_t iy = static_cast<int64_t>(std::floor(p.imag() / cell));
        return (ix << 26) ^ (iy & ((int64_t(1) << 26) - 1));
    };
    // hash map via sort: gather (key, atom) pairs
    std::vector<std::pair<int64_t, int>> tagged(mu.atoms.size());
    for (size_t i = 0; i < mu.atoms.size(); ++i) tagged[i] = {key(mu.atoms[i].pos), static_cast<int>(i)};
    std::sort(tagged.begin(), tagged.end());
    DiscreteMeasure out;
    size_t i = 0;
    while (i < tagged.size()) {
        size_t j = i;
        Acc acc;
        while (j < tagged.size() && tagged[j].first == tagged[i].first) {
            const Atom& a = mu.atoms[tagged[j].second];
            acc.wx += a.w * a.pos.real();
            acc.wy += a.w * a.pos.imag();
            acc.w += a.w;
            ++j;
        }
        out.atoms.push_back({cpx(acc.wx / acc.w, acc.wy / acc.w), acc.w});
        i = j;
    }
    return out;
}

DiscreteMeasure restrict_to_ball(const DiscreteMeasure& mu, const Ball& b) {
    DiscreteMeasure out;
    for (const auto& a : mu.atoms)
        if (std::abs(a.pos - b.center) < b.radius) out.atoms.push_back(a);
    return out;
}

void write_measure(const std::string& path, const DiscreteMeasure& mu) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_measure: cannot open " + path);
    f << "x y w\n";
    char buf[128];
    for (const auto& a : mu.atoms) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", a.pos.real(), a.pos.imag(), a.w);
        f << buf;
    }
}

DiscreteMeasure read_measure(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("read_measure: cannot open " + path);
    DiscreteMeasure mu;
    std::string line;
    while (std::getline(f, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ss(line);
        double x, y, w;
        // the header "x y w" and blank lines fail to parse and are skipped
        if (!(ss >> x >> y >> w)) continue;
        mu.atoms.push_back({cpx(x, y), w});
    }
    mu.validate();
    return mu;
}

}  // namespace hv

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace hv {

using cpx = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;

/// Open ball B(center, radius).
struct Ball {
    cpx center{0.0, 0.0};
    double radius = 1.0;

    Ball() = default;
    Ball(cpx c, double r) : center(c), radius(r) {
        if (!(r > 0.0)) throw std::invalid_argument("Ball: radius must be positive");
    }

    // Lambda*B keeps the center.
    Ball scaled(double lambda) const { return Ball(center, lambda * radius); }
    bool contains(cpx p) const { return std::abs(p - center) < radius; }
};

/// Affine line through `base` with direction angle in [0, pi).
struct Line {
    cpx base{0.0, 0.0};
    double angle = 0.0;

    Line() = default;
    Line(cpx b, double a) : base(b), angle(normalize_angle(a)) {}

    static double normalize_angle(double a) {
        a = std::fmod(a, kPi);
        if (a < 0.0) a += kPi;
        if (a == kPi) a = 0.0;
        return a;
    }

    cpx direction() const { return cpx(std::cos(angle), std::sin(angle)); }

    double distance_to(cpx p) const {
        cpx d = p - base;
        cpx u = direction();
        // |component of d normal to u|
        return std::abs(d.real() * u.imag() - d.imag() * u.real());
    }

    cpx point_at(double s) const { return base + s * direction(); }
};

/// Acute angle between two lines, in [0, pi/2].
inline double angle_between(const Line& a, const Line& b) {
    double d = std::fabs(a.angle - b.angle);
    if (d > kPi / 2.0) d = kPi - d;
    return d;
}

inline double angle_between(double a, double b) {
    double d = std::fabs(Line::normalize_angle(a) - Line::normalize_angle(b));
    if (d > kPi / 2.0) d = kPi - d;
    return d;
}

/// A point paired with a scale, e.g. the (x,t) pairs of a stopping region.
struct ScalePoint {
    cpx location{0.0, 0.0};
    double scale = 0.0;
};

/// pi: projection to the first coordinate, pi_perp: to the second.
inline double proj(cpx x) { return x.real(); }
inline double proj_perp(cpx x) { return x.imag(); }

}  // namespace hv

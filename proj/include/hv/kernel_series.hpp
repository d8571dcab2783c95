#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>

namespace hv {

/// Exact rational on int64 with overflow checks; enough headroom for the
/// kernel expansion coefficients up to order 60.
struct Rational {
    int64_t num = 0;
    int64_t den = 1;

    Rational() = default;
    Rational(int64_t n) : num(n), den(1) {}
    Rational(int64_t n, int64_t d);

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator-() const { return Rational(-num, den); }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Coefficients c_{k,l} of the expansion of the normal kernel component
/// Im[(t+is)^k]/(t^2+s^2)^{(k+1)/2} = sum over odd l of c_{k,l} s^l / t^{l+1}
/// valid for |s| < |t|.  Computed by exact polynomial arithmetic: the
/// imaginary part of (1+iw)^k times the binomial series of (1+w^2)^{-(k+1)/2}
/// truncated at degree L.
struct KernelSeries {
    int k = 1;
    int truncation = 1;  // L
    std::map<int, Rational> coefficients;  // odd l -> c_{k,l}

    double coefficient(int l) const {
        auto it = coefficients.find(l);
        return it == coefficients.end() ? 0.0 : it->second.to_double();
    }

    /// Truncated pointwise evaluation sum c_{k,l} s^l / t^{l+1}.
    double evaluate(double t, double s) const;

    /// Partial sums of |c_{k,l}| 2^{-l} (indexed by l), for the Cauchy check.
    std::map<int, double> weighted_partial_sums() const;
};

/// pre: L odd, L >= k, L <= 60 (int64 overflow guard).
KernelSeries kernel_series(int k, int L);

}  // namespace hv

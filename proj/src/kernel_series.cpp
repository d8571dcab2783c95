#include "hv/kernel_series.hpp"

#include <cmath>
#include <numeric>

namespace hv {

namespace {

int64_t checked(__int128 v, const char* what) {
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error(what);
    return static_cast<int64_t>(v);
}

}  // namespace

Rational::Rational(int64_t n, int64_t d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational Rational::operator+(const Rational& o) const {
    __int128 n = static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den;
    __int128 d = static_cast<__int128>(den) * o.den;
    return Rational(checked(n, "Rational add overflow"), checked(d, "Rational add overflow"));
}

Rational Rational::operator-(const Rational& o) const { return *this + Rational(-o.num, o.den); }

Rational Rational::operator*(const Rational& o) const {
    __int128 n = static_cast<__int128>(num) * o.num;
    __int128 d = static_cast<__int128>(den) * o.den;
    return Rational(checked(n, "Rational mul overflow"), checked(d, "Rational mul overflow"));
}

double KernelSeries::evaluate(double t, double s) const {
    double acc = 0.0;
    for (const auto& [l, c] : coefficients) acc += c.to_double() * std::pow(s, l) / std::pow(t, l + 1);
    return acc;
}

std::map<int, double> KernelSeries::weighted_partial_sums() const {
    std::map<int, double> out;
    double acc = 0.0;
    for (const auto& [l, c] : coefficients) {
        acc += std::fabs(c.to_double()) * std::pow(0.5, l);
        out[l] = acc;
    }
    return out;
}

KernelSeries kernel_series(int k, int L) {
    if (k < 1 || k % 2 == 0) throw std::invalid_argument("kernel_series: k must be odd positive");
    if (L % 2 == 0 || L < k) throw std::invalid_argument("kernel_series: L must be odd and >= k");
    if (L > 60) throw std::invalid_argument("kernel_series: L beyond the exact-arithmetic guard");

    // Im[(1+iw)^k] = sum over odd j of C(k,j) (-1)^{(j-1)/2} w^j
    std::map<int, Rational> imag_poly;
    {
        Rational binom(1);
        for (int j = 0; j <= k; ++j) {
            if (j % 2 == 1) {
                int64_t sign = ((j - 1) / 2) % 2 == 0 ? 1 : -1;
                imag_poly[j] = binom * Rational(sign);
            }
            // next binomial coefficient C(k, j+1) = C(k,j) * (k-j)/(j+1)
            binom = binom * Rational(k - j, j + 1);
        }
    }

    // (1+w^2)^{-(k+1)/2} = sum over m of (-1)^m C(n+m-1, m) w^{2m}, n = (k+1)/2
    std::map<int, Rational> series;
    {
        int n = (k + 1) / 2;
        Rational coef(1);
        for (int m = 0; 2 * m <= L; ++m) {
            series[2 * m] = (m % 2 == 0) ? coef : -coef;
            coef = coef * Rational(n + m, m + 1);
        }
    }

    KernelSeries out;
    out.k = k;
    out.truncation = L;
    for (int l = 1; l <= L; l += 2) {
        Rational c(0);
        for (const auto& [j, pj] : imag_poly) {
            if (j > l) break;
            auto it = series.find(l - j);
            if (it != series.end()) c = c + pj * it->second;
        }
        out.coefficients[l] = c;
    }
    return out;
}

}  // namespace hv

#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sharpconj/format.hpp"
#include "sharpconj/quadrature.hpp"

namespace sharpconj {

// Uniform samples of a 2pi-periodic real function at x_j = 2*pi*j/n.
class GridFunction {
public:
    explicit GridFunction(std::vector<double> values) : values_(std::move(values)) {
        const std::size_t n = values_.size();
        if (n < 8 || !std::has_single_bit(n))
            throw std::invalid_argument("grid size must be a power of two, at least 8");
        for (double v : values_) {
            if (!std::isfinite(v))
                throw std::invalid_argument("grid values must be finite");
        }
    }

    std::size_t n() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t j) const { return values_[j]; }
    double node(std::size_t j) const { return 2.0 * kPi * double(j) / double(n()); }

private:
    std::vector<double> values_;
};

namespace detail {

inline void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * kPi / double(len);
        const std::complex<double> wstep = std::polar(1.0, ang);
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                // Refresh the twiddle periodically so roundoff does not
                // accumulate along long butterfly rows.
                if ((j & 63u) == 0u) w = std::polar(1.0, ang * double(j));
                const auto u = a[i + j];
                const auto v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wstep;
            }
        }
    }
    if (inverse) {
        const double scale = 1.0 / double(n);
        for (auto& z : a) z *= scale;
    }
}

// Trigonometric interpolant through the samples: the unique balanced trig
// polynomial of degree n/2 (cosine-only Nyquist term) matching f at the nodes.
class TrigInterpolant {
public:
    explicit TrigInterpolant(const GridFunction& f) {
        const std::size_t n = f.n();
        std::vector<std::complex<double>> a(f.values().begin(), f.values().end());
        fft_radix2(a, false);
        mean_ = a[0].real() / double(n);
        nyquist_ = a[n / 2].real() / double(n);
        cos_coef_.resize(n / 2 - 1);
        sin_coef_.resize(n / 2 - 1);
        for (std::size_t k = 1; k < n / 2; ++k) {
            cos_coef_[k - 1] = 2.0 * a[k].real() / double(n);
            sin_coef_[k - 1] = -2.0 * a[k].imag() / double(n);
        }
    }

    double operator()(double x) const {
        double acc = mean_;
        const double s1 = std::sin(x);
        const double c1 = std::cos(x);
        double s = s1, c = c1;
        for (std::size_t k = 1; k <= cos_coef_.size(); ++k) {
            if ((k & 127u) == 0u) {
                s = std::sin(double(k) * x);
                c = std::cos(double(k) * x);
            }
            acc += cos_coef_[k - 1] * c + sin_coef_[k - 1] * s;
            const double sn = s * c1 + c * s1;
            c = c * c1 - s * s1;
            s = sn;
        }
        acc += nyquist_ * std::cos(double(cos_coef_.size() + 1) * x);
        return acc;
    }

private:
    double mean_ = 0.0;
    double nyquist_ = 0.0;
    std::vector<double> cos_coef_, sin_coef_;
};

}  // namespace detail

// Conjugate series: coefficient at frequency k is scaled by -i*sign(k); the
// mean and the (sign-ambiguous) Nyquist coefficient are annihilated.
inline GridFunction conjugate_spectral(const GridFunction& f) {
    const std::size_t n = f.n();
    std::vector<std::complex<double>> a(f.values().begin(), f.values().end());
    detail::fft_radix2(a, false);
    a[0] = 0.0;
    a[n / 2] = 0.0;
    for (std::size_t k = 1; k < n / 2; ++k) {
        a[k] = std::complex<double>(a[k].imag(), -a[k].real());
        a[n - k] = std::complex<double>(-a[n - k].imag(), a[n - k].real());
    }
    detail::fft_radix2(a, true);
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = a[j].real();
    return GridFunction(std::move(out));
}

// Same operator through the principal-value kernel applied to the
// trigonometric interpolant, evaluated at a single (arbitrary) point.
inline double conjugate_pv(const GridFunction& f, double x, double rel_tol = 1e-9) {
    const detail::TrigInterpolant interp(f);
    const QuadResult pv =
        integrate_pv_cotangent([&](double t) { return interp(t); }, x, rel_tol);
    if (pv.diverged)
        throw std::runtime_error("principal-value quadrature did not converge");
    return -pv.value / kPi;
}

struct Norms {
    double c_norm = 0.0;
    double l_norm = 0.0;
    double variation = 0.0;
};

inline Norms norms(const GridFunction& f) {
    const std::size_t n = f.n();
    Norms out;
    double abs_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double v = f[j];
        out.c_norm = std::max(out.c_norm, std::abs(v));
        abs_sum += std::abs(v);
        out.variation += std::abs(f[(j + 1) % n] - v);
    }
    out.l_norm = 2.0 * kPi * abs_sum / double(n);
    return out;
}

// One sample per line.
inline GridFunction read_grid_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open grid file: " + path);
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        values.push_back(detail::parse_double(line, "grid sample"));
    }
    return GridFunction(std::move(values));
}

inline void write_grid_csv(const GridFunction& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write grid file: " + path);
    for (std::size_t j = 0; j < f.n(); ++j) out << detail::format_double(f[j]) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace sharpconj

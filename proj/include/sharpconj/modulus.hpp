#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sharpconj/format.hpp"
#include "sharpconj/quadrature.hpp"

namespace sharpconj {

/// Concave modulus of continuity on [0, pi].
///
/// Built-in kinds: lipschitz K*t, power K*t^alpha, capped_linear min(t, c),
/// log_modulus (-1/ln t near zero, constant 1/2 beyond e^-2), and tabulated
/// piecewise-linear data. Construction validates only what evaluation needs;
/// the modulus-of-continuity invariants are checked by validate().
class Modulus {
  public:
    enum class Kind { lipschitz, power, capped_linear, log_modulus, tabulated };

    static Modulus lipschitz(double k) {
        require(std::isfinite(k) && k > 0.0, "lipschitz: K must be positive");
        Modulus m(Kind::lipschitz, "lip:" + detail::format_double(k));
        m.k_ = k;
        return m;
    }

    static Modulus power(double alpha, double k = 1.0) {
        require(std::isfinite(alpha) && alpha > 0.0 && alpha <= 1.0,
                "power: alpha must lie in (0, 1]");
        require(std::isfinite(k) && k > 0.0, "power: K must be positive");
        Modulus m(Kind::power,
                  "power:" + detail::format_double(alpha) + ":" + detail::format_double(k));
        m.alpha_ = alpha;
        m.k_ = k;
        return m;
    }

    static Modulus capped_linear(double c) {
        require(std::isfinite(c) && c > 0.0, "capped_linear: cap must be positive");
        Modulus m(Kind::capped_linear, "capped:" + detail::format_double(c));
        m.cap_ = c;
        return m;
    }

    static Modulus log_modulus() { return Modulus(Kind::log_modulus, "log"); }

    static Modulus tabulated(std::vector<std::pair<double, double>> knots) {
        require(!knots.empty(), "tabulated: knot list is empty");
        require(knots.front().first == 0.0, "tabulated: first knot must be at t = 0");
        for (size_t i = 0; i < knots.size(); ++i) {
            require(std::isfinite(knots[i].first) && std::isfinite(knots[i].second),
                    "tabulated: non-finite knot");
            if (i > 0)
                require(knots[i].first > knots[i - 1].first,
                        "tabulated: knot abscissae must be strictly increasing");
        }
        Modulus m(Kind::tabulated, "table:inline");
        m.knots_ = std::move(knots);
        return m;
    }

    Kind kind() const { return kind_; }

    /// DSL string the modulus was built from (echoed into results).
    const std::string& dsl() const { return dsl_; }

    /// omega(t) for t in [0, pi]; arguments within 1e-9 beyond either end are
    /// clamped, anything further is a domain error.
    double operator()(double t) const {
        if (t < 0.0 || t > kPi) {
            if (t >= -1e-12 && t <= kPi + 1e-9) {
                t = std::clamp(t, 0.0, kPi);
            } else {
                throw std::domain_error("modulus: argument " + detail::format_double(t) +
                                        " outside [0, pi]");
            }
        }
        switch (kind_) {
            case Kind::lipschitz:
                return k_ * t;
            case Kind::power:
                return t == 0.0 ? 0.0 : k_ * std::pow(t, alpha_);
            case Kind::capped_linear:
                return std::min(t, cap_);
            case Kind::log_modulus: {
                constexpr double kExpM2 = 0.1353352832366127;  // e^-2
                if (t == 0.0) return 0.0;
                return t <= kExpM2 ? -1.0 / std::log(t) : 0.5;
            }
            case Kind::tabulated: {
                if (t >= knots_.back().first) return knots_.back().second;
                auto it = std::upper_bound(
                    knots_.begin(), knots_.end(), t,
                    [](double v, const std::pair<double, double>& kn) { return v < kn.first; });
                const auto& [t1, w1] = *it;
                const auto& [t0, w0] = *(it - 1);
                return w0 + (w1 - w0) * (t - t0) / (t1 - t0);
            }
        }
        return 0.0;  // unreachable
    }

    /// Interior points of (0, pi) where the formula has a kink; quadrature
    /// callers split integration ranges here.
    std::vector<double> breakpoints() const {
        std::vector<double> out;
        switch (kind_) {
            case Kind::lipschitz:
            case Kind::power:
                break;
            case Kind::capped_linear:
                if (cap_ < kPi) out.push_back(cap_);
                break;
            case Kind::log_modulus:
                out.push_back(0.1353352832366127);
                break;
            case Kind::tabulated:
                for (size_t i = 1; i < knots_.size(); ++i)
                    if (knots_[i].first > 0.0 && knots_[i].first < kPi)
                        out.push_back(knots_[i].first);
                break;
        }
        return out;
    }

    const std::vector<std::pair<double, double>>& knots() const { return knots_; }

  private:
    Modulus(Kind kind, std::string dsl) : kind_(kind), dsl_(std::move(dsl)) {}

    static void require(bool cond, const char* msg) {
        if (!cond) throw std::invalid_argument(msg);
    }

    Kind kind_;
    double k_ = 1.0;
    double alpha_ = 1.0;
    double cap_ = 1.0;
    std::vector<std::pair<double, double>> knots_;
    std::string dsl_;

    friend Modulus parse_modulus(const std::string&);
};

struct ValidationResult {
    bool ok = true;
    std::string message;
    explicit operator bool() const { return ok; }
};

/// Grid check of the modulus-of-continuity invariants: omega(0) = 0,
/// nondecreasing, midpoint-concave. Tolerances: 1e-12 absolute for built-ins,
/// 1e-9 on slopes for tabulated data. Returns the first violation found.
inline ValidationResult validate(const Modulus& m) {
    auto fail = [](std::string msg) { return ValidationResult{false, std::move(msg)}; };

    if (m.kind() == Modulus::Kind::tabulated) {
        const auto& kn = m.knots();
        if (std::abs(kn.front().second) > 1e-12)
            return fail("tabulated: omega(0) = " + detail::format_double(kn.front().second) +
                        ", expected 0");
        double prev_slope = std::numeric_limits<double>::infinity();
        for (size_t i = 1; i < kn.size(); ++i) {
            if (kn[i].second < kn[i - 1].second - 1e-12)
                return fail("tabulated: decreasing at t = " +
                            detail::format_double(kn[i].first));
            const double slope =
                (kn[i].second - kn[i - 1].second) / (kn[i].first - kn[i - 1].first);
            if (slope > prev_slope + 1e-9)
                return fail("tabulated: slope increases at t = " +
                            detail::format_double(kn[i - 1].first) + " (not concave)");
            prev_slope = slope;
        }
        return {};
    }

    if (std::abs(m(0.0)) > 1e-12) return fail("omega(0) = " + detail::format_double(m(0.0)));

    // Dense grid: uniform plus a geometric cluster near zero where the
    // built-ins bend fastest.
    std::vector<double> grid;
    grid.reserve(1100);
    for (int i = 0; i <= 1024; ++i) grid.push_back(kPi * i / 1024.0);
    for (int k = 11; k <= 48; ++k) grid.push_back(kPi * std::ldexp(1.0, -k));
    for (double b : m.breakpoints()) grid.push_back(b);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<double> vals(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) vals[i] = m(grid[i]);

    for (size_t i = 1; i < grid.size(); ++i)
        if (vals[i] < vals[i - 1] - 1e-12)
            return fail("not nondecreasing at t = " + detail::format_double(grid[i]));

    for (size_t stride : {size_t{1}, size_t{9}, size_t{111}}) {
        for (size_t i = 0; i + stride < grid.size(); i += 1 + stride / 4) {
            const size_t j = i + stride;
            const double mid = 0.5 * (grid[i] + grid[j]);
            if (m(mid) < 0.5 * (vals[i] + vals[j]) - 1e-12)
                return fail("not midpoint-concave over [" + detail::format_double(grid[i]) +
                            ", " + detail::format_double(grid[j]) + "]");
        }
    }
    return {};
}

struct DiniReport {
    bool converges = false;
    double integral_value = std::numeric_limits<double>::infinity();
    double epsilon_used = 0.0;
    std::vector<std::pair<double, double>> tail_growth_samples;  // (eps_k, int_{eps_k}^{eps0})
};

/// Estimates int_0^{eps0} omega(t)/t dt over the geometric ladder
/// eps_k = eps0 * 2^-k. Convergence is declared when the octave increments
/// decay: either each of the last three shrinks by a factor >= 1.05, or the
/// increment ratio is stable and strictly below 1 (slowly-convergent power
/// moduli with small alpha land in the second branch; log_modulus, whose
/// ratio keeps drifting toward 1, lands in neither and is reported
/// divergent).
inline DiniReport dini_check(const Modulus& m, double eps0 = 1.0, int ladder_depth = 30) {
    if (!(eps0 > 0.0 && eps0 <= kPi))
        throw std::domain_error("dini_check: epsilon must lie in (0, pi]");
    ladder_depth = std::clamp(ladder_depth, 24, 60);

    DiniReport rep;
    rep.epsilon_used = eps0;

    auto integrand = [&m](double t) { return m(t) / t; };

    std::vector<double> inc;
    inc.reserve(static_cast<size_t>(ladder_depth));
    double partial = 0.0, err = 0.0;
    bool floored = false;
    for (int k = 1; k <= ladder_depth; ++k) {
        const double lo = eps0 * std::ldexp(1.0, -k);
        const double hi = 2.0 * lo;
        const QuadResult piece = integrate_adaptive(integrand, lo, hi, 1e-10);
        inc.push_back(piece.value);
        partial += piece.value;
        err += piece.abs_error_estimate;
        rep.tail_growth_samples.emplace_back(lo, partial);
        if (piece.value <= 1e-16 * partial + 1e-300) {
            floored = true;  // increments at rounding level, tail negligible
            break;
        }
    }

    const size_t n = inc.size();
    bool converges = floored;
    if (!converges && n >= 4) {
        bool fast = true;
        for (size_t k = n - 3; k < n; ++k)
            if (!(inc[k] * 1.05 <= inc[k - 1])) fast = false;
        converges = fast;
    }
    if (!converges && n >= 7 && inc[n - 1] > 0.0) {
        // Stable-geometric fallback: compare per-octave ratios averaged over
        // two adjacent three-octave windows.
        const double ra = std::cbrt(inc[n - 1] / inc[n - 4]);
        const double rb = std::cbrt(inc[n - 4] / inc[n - 7]);
        if (ra < 0.9995 && ra - rb <= 0.05 * (1.0 - ra)) converges = true;
    }

    rep.converges = converges;
    if (converges) {
        double tail = 0.0;
        if (!floored && n >= 2 && inc[n - 2] > 0.0) {
            const double r = std::clamp(inc[n - 1] / inc[n - 2], 0.0, 0.9995);
            tail = inc[n - 1] * r / (1.0 - r);
        }
        rep.integral_value = partial + tail;
    }
    return rep;
}

/// Parses the modulus DSL: `lip:K`, `power:ALPHA[:K]`, `capped:C`, `log`,
/// `table:PATH` (two-column CSV of knots "t,omega", increasing t, first row
/// "0,0").
inline Modulus parse_modulus(const std::string& dsl) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (true) {
        const size_t pos = dsl.find(':', start);
        if (pos == std::string::npos) {
            parts.push_back(dsl.substr(start));
            break;
        }
        parts.push_back(dsl.substr(start, pos - start));
        start = pos + 1;
    }

    const std::string& head = parts[0];
    auto arity = [&](size_t lo, size_t hi) {
        if (parts.size() - 1 < lo || parts.size() - 1 > hi)
            throw std::invalid_argument("modulus '" + dsl + "': wrong number of arguments");
    };

    Modulus m = [&]() {
        if (head == "lip") {
            arity(1, 1);
            return Modulus::lipschitz(detail::parse_double(parts[1], "lip"));
        }
        if (head == "power") {
            arity(1, 2);
            const double alpha = detail::parse_double(parts[1], "power alpha");
            const double k = parts.size() == 3 ? detail::parse_double(parts[2], "power K") : 1.0;
            return Modulus::power(alpha, k);
        }
        if (head == "capped") {
            arity(1, 1);
            return Modulus::capped_linear(detail::parse_double(parts[1], "capped"));
        }
        if (head == "log") {
            arity(0, 0);
            return Modulus::log_modulus();
        }
        if (head == "table") {
            if (parts.size() < 2)
                throw std::invalid_argument("table: missing path");
            // Re-join in case the path itself contains ':'.
            std::string path = dsl.substr(6);
            std::ifstream in(path);
            if (!in) throw std::invalid_argument("table: cannot open '" + path + "'");
            std::vector<std::pair<double, double>> knots;
            std::string line;
            while (std::getline(in, line)) {
                if (line.empty() || line == "\r") continue;
                const size_t comma = line.find(',');
                if (comma == std::string::npos)
                    throw std::invalid_argument("table: malformed row '" + line + "'");
                knots.emplace_back(detail::parse_double(line.substr(0, comma), "table t"),
                                   detail::parse_double(line.substr(comma + 1), "table omega"));
            }
            return Modulus::tabulated(std::move(knots));
        }
        throw std::invalid_argument("unknown modulus kind '" + head + "'");
    }();
    m.dsl_ = dsl;
    return m;
}

}  // namespace sharpconj

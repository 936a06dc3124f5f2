#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sharpconj {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Outcome of a quadrature call. `diverged` marks integrals whose panel
/// contributions failed to decay within the depth budget; the value is
/// meaningless in that case.
struct QuadResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    long panels_used = 0;
    bool diverged = false;
};

enum class SingularEnd { lower, upper };

namespace detail {

// Gauss-Kronrod 7-15 nodes on [-1,1]: abscissa, Gauss weight (0 for
// Kronrod-only nodes), Kronrod weight.
inline constexpr double kGk15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

template <std::invocable<double> F>
struct Gk15Panel {
    double value;
    double error;
};

template <std::invocable<double> F>
Gk15Panel<F> gk15(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    auto safe_eval = [&](double t) {
        const double y = f(t);
        if (!std::isfinite(y))
            throw std::runtime_error("quadrature: non-finite integrand value at t=" +
                                     std::to_string(t));
        return y;
    };

    const double y0 = safe_eval(mid);
    double g7 = kGk15[0][1] * y0;
    double k15 = kGk15[0][2] * y0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kGk15[i][0];
        const double yi = safe_eval(mid + dx) + safe_eval(mid - dx);
        g7 += kGk15[i][1] * yi;
        k15 += kGk15[i][2] * yi;
    }
    g7 *= half;
    k15 *= half;
    return {k15, std::abs(k15 - g7)};
}

struct AdaptiveCtx {
    long panels = 0;
    long budget = 100000;
    int max_depth = 52;
};

// Depth-first refinement with a width-proportional error budget. Fixed
// traversal order keeps the summation deterministic.
template <std::invocable<double> F>
void adapt_rec(F&& f, double a, double b, double tol_abs, int depth, AdaptiveCtx& ctx,
               double& value, double& err) {
    const auto p = gk15(f, a, b);
    ++ctx.panels;
    if (p.error <= tol_abs || depth >= ctx.max_depth || ctx.panels >= ctx.budget ||
        !(b - a > 1e-15 * (std::abs(a) + std::abs(b)))) {
        value += p.value;
        err += p.error;
        return;
    }
    const double mid = 0.5 * (a + b);
    adapt_rec(f, a, mid, 0.5 * tol_abs, depth + 1, ctx, value, err);
    adapt_rec(f, mid, b, 0.5 * tol_abs, depth + 1, ctx, value, err);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of a finite integrand over [a,b].
/// The result is within rel_tol (relative, with a 1e-14 absolute floor) for
/// smooth integrands; abs_error_estimate is the summed per-panel |K15-G7|.
template <std::invocable<double> F>
QuadResult integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-9) {
    if (!(a < b)) throw std::domain_error("integrate_adaptive: requires a < b");
    detail::AdaptiveCtx ctx;
    const auto whole = detail::gk15(f, a, b);
    ++ctx.panels;
    const double tol_abs = std::max(rel_tol * std::abs(whole.value), 1e-14);
    double value = 0.0, err = 0.0;
    if (whole.error <= tol_abs) {
        value = whole.value;
        err = whole.error;
    } else {
        const double mid = 0.5 * (a + b);
        detail::adapt_rec(f, a, mid, 0.5 * tol_abs, 1, ctx, value, err);
        detail::adapt_rec(f, mid, b, 0.5 * tol_abs, 1, ctx, value, err);
    }
    return {value, err, ctx.panels, false};
}

/// Integration of f over (a,b) where f may blow up at one endpoint.
/// Panels shrink geometrically (factor 2) toward the singular end; the sum
/// stops once the estimated remaining tail is negligible. If the per-octave
/// contributions fail to decay within the 60-octave depth budget the result
/// is flagged diverged (log-divergent integrands land here).
template <std::invocable<double> F>
QuadResult integrate_endpoint_singular(F&& f, double a, double b, SingularEnd singular_end,
                                       double rel_tol = 1e-9) {
    if (!(a < b)) throw std::domain_error("integrate_endpoint_singular: requires a < b");
    constexpr int kMaxOctaves = 60;
    const double width = b - a;

    QuadResult out;
    std::vector<double> contrib;
    contrib.reserve(kMaxOctaves);

    double total = 0.0, err = 0.0;
    bool stopped = false;
    for (int j = 0; j < kMaxOctaves; ++j) {
        const double w_hi = width * std::ldexp(1.0, -j);
        const double w_lo = 0.5 * w_hi;
        double lo, hi;
        if (singular_end == SingularEnd::lower) {
            lo = a + w_lo;
            hi = a + w_hi;
        } else {
            lo = b - w_hi;
            hi = b - w_lo;
        }
        if (!(lo < hi)) break;  // ran out of representable width
        const QuadResult piece = integrate_adaptive(f, lo, hi, 0.25 * rel_tol);
        out.panels_used += piece.panels_used;
        total += piece.value;
        err += piece.abs_error_estimate;
        contrib.push_back(piece.value);

        if (j < 4) continue;
        const double c2 = std::abs(contrib[j]);
        const double c1 = std::abs(contrib[j - 1]);
        const double c0 = std::abs(contrib[j - 2]);
        if (c2 == 0.0 && c1 == 0.0) {
            stopped = true;  // identically-zero tail
            break;
        }
        if (!(c1 > 0.0) || !(c0 > 0.0)) continue;

        // Algebraic endpoint behaviour makes octave contributions geometric,
        // c_j ~ C q^j; sum the remaining tail in closed form once the ratio
        // has settled, with the ratio drift bounding the extrapolation error.
        const double r1 = contrib[j] / contrib[j - 1];
        const double r0 = contrib[j - 1] / contrib[j - 2];
        if (std::abs(r1) < 0.92 && std::abs(r0) < 0.92) {
            const double tail1 = contrib[j] * r1 / (1.0 - r1);
            const double tail0 = contrib[j] * r0 / (1.0 - r0);
            const double err_extrap = 4.0 * std::abs(tail1 - tail0) + 1e-16 * std::abs(total);
            const double candidate = total + tail1;
            if (err_extrap <= rel_tol * std::abs(candidate) && std::abs(r1 - r0) < 0.1) {
                total = candidate;
                err += err_extrap;
                stopped = true;
                break;
            }
        }
        // Fallback stop for tails that are already negligible without a
        // stable ratio (fast, irregular decay).
        if (c2 <= 0.1 * rel_tol * std::abs(total) && c1 <= 0.1 * rel_tol * std::abs(total)) {
            err += 10.0 * c2;
            stopped = true;
            break;
        }
    }

    if (!stopped) {
        // Budget exhausted: decaying contributions mean a convergent but slow
        // integral; non-decaying contributions mean divergence.
        const size_t m = contrib.size();
        bool decaying = m >= 4;
        for (size_t j = m - 3; decaying && j < m; ++j) {
            const double prev = std::abs(contrib[j - 1]);
            const double cur = std::abs(contrib[j]);
            if (!(prev > 0.0) || !(cur * 1.05 <= prev)) decaying = false;
        }
        if (decaying) {
            const double last = std::abs(contrib[m - 1]);
            err += last * 20.0;  // crude tail allowance for the unexplored octaves
        } else {
            out.diverged = true;
        }
    }

    out.value = total;
    out.abs_error_estimate = err;
    return out;
}

/// Principal-value integral (P) int_{-pi}^{pi} f(t) / (2 tan((t-x)/2)) dt for a
/// 2pi-periodic f that is Dini-continuous at x. The symmetric pairing around
/// the pole rewrites it as int_0^pi (f(x+s) - f(x-s)) * cot(s/2)/2 ds, which
/// has at worst an integrable endpoint singularity at s = 0.
template <std::invocable<double> F>
QuadResult integrate_pv_cotangent(F&& f, double x, double rel_tol = 1e-9) {
    auto paired = [&](double s) {
        const double half = 0.5 * s;
        return (f(x + s) - f(x - s)) * 0.5 * (std::cos(half) / std::sin(half));
    };
    return integrate_endpoint_singular(paired, 0.0, kPi, SingularEnd::lower, rel_tol);
}

}  // namespace sharpconj

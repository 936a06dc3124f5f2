#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sharpconj/modulus.hpp"
#include "sharpconj/quadrature.hpp"

namespace sharpconj {

struct InputsEcho {
    std::string modulus;
    int r = 0;
    std::optional<double> t;
};

/// A computed sharp constant. `divergent` replaces the value for the
/// C-metric quantities when the Dini condition fails.
struct ConstantResult {
    double value = 0.0;
    bool divergent = false;
    double abs_error = 0.0;
    long terms_or_panels = 0;
    InputsEcho inputs;
};

namespace detail {

inline void require_valid(const Modulus& m) {
    if (auto v = validate(m); !v.ok)
        throw std::invalid_argument("invalid modulus: " + v.message);
}

inline ConstantResult divergent_result(InputsEcho inputs) {
    ConstantResult res;
    res.divergent = true;
    res.value = std::numeric_limits<double>::infinity();
    res.abs_error = std::numeric_limits<double>::infinity();
    res.inputs = std::move(inputs);
    return res;
}

/// Piecewise-linear model of g(t) = omega(2t) on [0, pi/2] with a certified
/// L1 error bound, used to batch-evaluate the sine coefficients
/// (2/pi) int_0^{pi/2} g(t) sin(kt) dt for many odd k.
///
/// For a linear panel the integral is exact in closed form; summing by parts
/// over the mesh leaves only the interior slope drops:
///   int_0^{pi/2} p(t) sin(kt) dt
///     = k^-2 [ sin(k pi/2) * beta_last + sum_j (beta_{j-1}-beta_j) sin(k x_j) ]
/// (p(0) = 0). Lipschitz, capped and tabulated moduli are piecewise linear,
/// so their mesh is exact; power and log meshes are refined greedily until
/// the concavity-based panel bound int |g - p| <= 2 (g(mid)-p(mid)) * width
/// drops below the requested tolerance.
class SineCoeffTable {
  public:
    SineCoeffTable(const Modulus& m, double l1_tol) {
        auto g = [&m](double t) { return m(2.0 * t); };
        const double end = 0.5 * kPi;

        std::vector<double> seed;
        seed.push_back(0.0);
        seed.push_back(end);
        for (int j = 1; j <= 46; ++j) seed.push_back(end * std::ldexp(1.0, -j));
        for (double b : m.breakpoints())
            if (b < kPi) seed.push_back(0.5 * b);
        std::sort(seed.begin(), seed.end());
        seed.erase(std::unique(seed.begin(), seed.end()), seed.end());

        struct Panel {
            double err, a, b, ga, gb, gm;
            bool operator<(const Panel& o) const {
                return err < o.err || (err == o.err && a > o.a);
            }
        };
        auto make_panel = [&g](double a, double b, double ga, double gb) {
            const double mid = 0.5 * (a + b);
            const double gm = g(mid);
            const double excess = std::max(0.0, gm - 0.5 * (ga + gb));
            return Panel{2.0 * excess * (b - a), a, b, ga, gb, gm};
        };

        std::priority_queue<Panel> pq;
        double total_err = 0.0;
        double prev_g = g(seed[0]);
        for (size_t i = 1; i < seed.size(); ++i) {
            const double gi = g(seed[i]);
            Panel p = make_panel(seed[i - 1], seed[i], prev_g, gi);
            total_err += p.err;
            pq.push(p);
            prev_g = gi;
        }

        long splits = 0;
        while (total_err > l1_tol && splits < 150000) {
            Panel top = pq.top();
            if (!(top.err > 0.0)) break;
            pq.pop();
            const double mid = 0.5 * (top.a + top.b);
            Panel left = make_panel(top.a, mid, top.ga, top.gm);
            Panel right = make_panel(mid, top.b, top.gm, top.gb);
            total_err += left.err + right.err - top.err;
            pq.push(left);
            pq.push(right);
            ++splits;
        }
        l1_ = std::max(total_err, 0.0);

        std::vector<Panel> panels;
        panels.reserve(pq.size());
        while (!pq.empty()) {
            panels.push_back(pq.top());
            pq.pop();
        }
        std::sort(panels.begin(), panels.end(),
                  [](const Panel& p, const Panel& q) { return p.a < q.a; });

        x_.reserve(panels.size() - 1);
        drop_.reserve(panels.size() - 1);
        double beta_prev = 0.0;
        for (size_t j = 0; j < panels.size(); ++j) {
            const double beta = (panels[j].gb - panels[j].ga) / (panels[j].b - panels[j].a);
            if (j > 0) {
                x_.push_back(panels[j].a);
                drop_.push_back(beta_prev - beta);
            }
            beta_prev = beta;
        }
        beta_last_ = beta_prev;
    }

    double l1_bound() const { return l1_; }
    long node_count() const { return static_cast<long>(x_.size()) + 2; }

    /// b_k for one odd k by direct evaluation.
    double coeff(long k) const {
        if (k < 1 || k % 2 == 0) throw std::domain_error("coeff: k must be odd and positive");
        const double sign = (((k - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
        double acc = sign * beta_last_;
        for (size_t j = 0; j < x_.size(); ++j) acc += drop_[j] * std::sin(double(k) * x_[j]);
        return (2.0 / kPi) * acc / (double(k) * double(k));
    }

    /// Sequential b_1, b_3, b_5, ... using a two-step rotation recurrence for
    /// the sines (refreshed periodically against drift).
    class Stream {
      public:
        explicit Stream(const SineCoeffTable& table) : t_(table) {
            const size_t n = t_.x_.size();
            s_.resize(n);
            c_.resize(n);
            s2_.resize(n);
            c2_.resize(n);
            for (size_t j = 0; j < n; ++j) {
                s_[j] = std::sin(t_.x_[j]);
                c_[j] = std::cos(t_.x_[j]);
                s2_[j] = std::sin(2.0 * t_.x_[j]);
                c2_[j] = std::cos(2.0 * t_.x_[j]);
            }
        }

        /// Returns b_k for the current odd k, then advances k by 2.
        double next() {
            const double sign = (((k_ - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
            double acc = sign * t_.beta_last_;
            const size_t n = s_.size();
            for (size_t j = 0; j < n; ++j) acc += t_.drop_[j] * s_[j];
            const double b = (2.0 / kPi) * acc / (double(k_) * double(k_));

            k_ += 2;
            if (++since_refresh_ == 128) {
                since_refresh_ = 0;
                for (size_t j = 0; j < n; ++j) {
                    s_[j] = std::sin(double(k_) * t_.x_[j]);
                    c_[j] = std::cos(double(k_) * t_.x_[j]);
                }
            } else {
                for (size_t j = 0; j < n; ++j) {
                    const double s = s_[j] * c2_[j] + c_[j] * s2_[j];
                    c_[j] = c_[j] * c2_[j] - s_[j] * s2_[j];
                    s_[j] = s;
                }
            }
            return b;
        }

      private:
        const SineCoeffTable& t_;
        long k_ = 1;
        int since_refresh_ = 0;
        std::vector<double> s_, c_, s2_, c2_;
    };

  private:
    std::vector<double> x_;     // interior mesh nodes
    std::vector<double> drop_;  // slope decrease at each interior node
    double beta_last_ = 0.0;    // slope of the final panel
    double l1_ = 0.0;           // certified bound on int |g - p|
};

}  // namespace detail

/// Sharp constant for ||f~||_C over H_omega: (1/pi) int_0^{pi/2}
/// omega(2t)/sin t dt. Divergent exactly when the Dini integral diverges.
inline ConstantResult m0_c(const Modulus& m, double rel_tol = 1e-9) {
    detail::require_valid(m);
    InputsEcho echo{m.dsl(), 0, std::nullopt};
    if (!dini_check(m).converges) return detail::divergent_result(std::move(echo));

    auto integrand = [&m](double t) { return m(2.0 * t) / std::sin(t); };
    std::vector<double> cuts{0.0};
    for (double b : m.breakpoints())
        if (0.5 * b < 0.5 * kPi) cuts.push_back(0.5 * b);
    cuts.push_back(0.5 * kPi);
    std::sort(cuts.begin(), cuts.end());

    double value = 0.0, err = 0.0;
    long panels = 0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        const QuadResult piece =
            i == 0 ? integrate_endpoint_singular(integrand, cuts[0], cuts[1], SingularEnd::lower,
                                                 rel_tol)
                   : integrate_adaptive(integrand, cuts[i], cuts[i + 1], rel_tol);
        if (piece.diverged) return detail::divergent_result(std::move(echo));
        value += piece.value;
        err += piece.abs_error_estimate;
        panels += piece.panels_used;
    }
    return {value / kPi, false, err / kPi, panels, std::move(echo)};
}

/// rho(x) for the shift equation at parameter t: the unique point in
/// (t/2, pi) with int_0^x k(u) du = -int_rho^pi k(u) du for the kernel
/// k(u) = sin(t/2)/(cos u - cos(t/2)). Both sides have the antiderivative
/// ln[sin((a+u)/2)/sin((a-u)/2)], a = t/2, which collapses the equation to
/// the closed form below.
inline double rho(double t, double x) {
    if (!(t > 0.0 && t < 2.0 * kPi)) throw std::domain_error("rho: t must lie in (0, 2*pi)");
    if (!(x > 0.0 && x < 0.5 * t))
        throw std::domain_error("rho: x must lie in (0, t/2)");
    const double q = std::tan(0.25 * t);
    return 2.0 * std::atan(q * q / std::tan(0.5 * x));
}

/// Signed defect of the defining equation of rho at a proposed value:
/// int_0^x k + int_rho^pi k (zero when rho_val solves the equation).
inline double rho_residual(double t, double x, double rho_val, double rel_tol = 1e-10) {
    if (!(t > 0.0 && t < 2.0 * kPi)) throw std::domain_error("rho_residual: t out of range");
    const double a = 0.5 * t;
    auto k = [a](double u) { return std::sin(a) / (std::cos(u) - std::cos(a)); };
    const double lhs = integrate_endpoint_singular(k, 0.0, x, SingularEnd::upper, rel_tol).value;
    double rhs = 0.0;
    if (rho_val < kPi)
        rhs = integrate_endpoint_singular(k, rho_val, kPi, SingularEnd::lower, rel_tol).value;
    return lhs + rhs;
}

struct RhoTable {
    double t = 0.0;
    std::vector<std::pair<double, double>> nodes;  // (x, rho(x))
    std::vector<double> residuals;
};

inline RhoTable make_rho_table(double t, int samples, double rel_tol = 1e-10) {
    if (samples < 1) throw std::domain_error("make_rho_table: need at least one sample");
    RhoTable table;
    table.t = t;
    table.nodes.reserve(static_cast<size_t>(samples));
    table.residuals.reserve(static_cast<size_t>(samples));
    for (int i = 1; i <= samples; ++i) {
        const double x = 0.5 * t * double(i) / double(samples + 1);
        const double r = rho(t, x);
        table.nodes.emplace_back(x, r);
        table.residuals.push_back(rho_residual(t, x, r, rel_tol));
    }
    return table;
}

/// Sharp constant for sup of f~(x+t) - f~(x) over H_omega:
/// (2/pi) int_0^{t/2} [sin(t/2)/(cos u - cos(t/2))] * omega(rho(u) - u) du.
///
/// Evaluated in the substituted variable s = t/2 - u, where kernel and
/// rho(u) - u share their trig subexpressions:
///   kernel  = sin a / (2 sin(a - s/2) sin(s/2)),
///   rho - u = 2 atan(2 sin(s/2) sin(a - s/2) / sin(a - s)),  a = t/2.
/// The integrand behaves like omega(2s)/s at the singular end s -> 0, so
/// finiteness is again the Dini condition.
inline ConstantResult omega0_diff(const Modulus& m, double t, double rel_tol = 1e-9) {
    detail::require_valid(m);
    if (t > kPi && t <= kPi + 1e-12) t = kPi;
    if (!(t >= 0.0 && t <= kPi))
        throw std::domain_error("omega0_diff: t must lie in [0, pi]");
    InputsEcho echo{m.dsl(), 0, t};
    if (t == 0.0) return {0.0, false, 0.0, 0, std::move(echo)};
    if (!dini_check(m).converges) return detail::divergent_result(std::move(echo));

    const double a = 0.5 * t;
    const double sin_a = std::sin(a);
    auto integrand = [&](double s) {
        const double ss = std::sin(0.5 * s);
        const double sa2 = std::sin(a - 0.5 * s);
        const double sas = std::sin(a - s);
        const double shifted = 2.0 * std::atan(2.0 * ss * sa2 / sas);
        return sin_a / (2.0 * sa2 * ss) * m(shifted);
    };
    const QuadResult q = integrate_endpoint_singular(integrand, 0.0, a, SingularEnd::lower,
                                                     rel_tol);
    if (q.diverged) return detail::divergent_result(std::move(echo));
    return {(2.0 / kPi) * q.value, false, (2.0 / kPi) * q.abs_error_estimate, q.panels_used,
            std::move(echo)};
}

/// Sine coefficient of the series constants:
/// b_k = (2/pi) int_0^{pi/2} omega(2t) sin(kt) dt.
inline double b_coeff(const Modulus& m, long k, double rel_tol = 1e-10) {
    detail::require_valid(m);
    if (k < 1 || k % 2 == 0) throw std::domain_error("b_coeff: k must be odd and positive");

    std::vector<double> cuts{0.0, 0.5 * kPi};
    for (long j = 1; j * kPi / double(k) < 0.5 * kPi; ++j) cuts.push_back(j * kPi / double(k));
    for (double b : m.breakpoints())
        if (0.5 * b < 0.5 * kPi) cuts.push_back(0.5 * b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double acc = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        acc += integrate_adaptive([&](double t) { return m(2.0 * t) * std::sin(double(k) * t); },
                                  cuts[i], cuts[i + 1], rel_tol)
                   .value;
    }
    return (2.0 / kPi) * acc;
}

/// Sharp constant for ||f~||_L over W^r H_omega (r >= 1):
/// 4 sum_i (-1)^{i(r+1)} b_{2i+1} / (2i+1)^{r+1}. Truncation is driven by
/// the coefficient bound |b_k| <= 4 omega(pi)/(pi k).
inline ConstantResult m_r_l(const Modulus& m, int r, double rel_tol = 1e-9) {
    detail::require_valid(m);
    if (r < 1) throw std::domain_error("m_r_l: requires r >= 1");
    InputsEcho echo{m.dsl(), r, std::nullopt};

    const double omega_pi = m(kPi);
    if (omega_pi == 0.0) return {0.0, false, 0.0, 1, std::move(echo)};

    // The coefficient table's L1 defect transfers to the series value with
    // weight 4 * (2/pi) * sum (2i+1)^-(r+1) <= 3.2; aim it at a quarter of
    // the target. b_1 sets the value's scale.
    const double b1 = b_coeff(m, 1);
    const double scale = std::max(4.0 * std::abs(b1), 0.4 * omega_pi);
    const double l1_tol = 0.08 * rel_tol * scale;
    const detail::SineCoeffTable table(m, l1_tol);
    detail::SineCoeffTable::Stream stream(table);

    const bool alternating = (r % 2 == 0);
    const int p = r + 1;

    double sum = 0.0, comp = 0.0, abs_sum = 0.0, weight_sum = 0.0;
    long terms = 0;
    double tail_bound = 0.0;
    constexpr long kMaxTerms = 200000;
    while (terms < kMaxTerms) {
        const long i = terms;
        const double k = 2.0 * i + 1.0;
        const double b = stream.next();
        const double sign = (alternating && (i % 2 == 1)) ? -1.0 : 1.0;
        const double weight = std::pow(k, -p);
        const double term = sign * b * weight;
        const double y = term - comp;
        const double tsum = sum + y;
        comp = (tsum - sum) - y;
        sum = tsum;
        abs_sum += std::abs(term);
        weight_sum += weight;
        ++terms;

        if (terms % 32 == 0 || terms < 8) {
            // sum_{i >= I} (2i+1)^{-(p+1)} <= (2I)^{-p} / (2p)
            tail_bound = (4.0 * omega_pi / kPi) * std::pow(2.0 * terms, -p) / (2.0 * p);
            if (tail_bound <= 0.25 * rel_tol * std::abs(sum) + 1e-300) break;
        }
    }

    const double table_err = (2.0 / kPi) * table.l1_bound() * weight_sum;
    const double round_err = 1e-15 * abs_sum;
    return {4.0 * sum, false, 4.0 * (tail_bound + table_err + round_err), terms,
            std::move(echo)};
}

/// Closed-form value of the integral-metric constant on Lipschitz classes
/// W^r K (r >= 2): (16K/pi) sum_i (-1)^{i(r+1)} (2i+1)^{-(r+2)}.
inline ConstantResult wrk_l(double k_class, int r) {
    if (!(k_class > 0.0) || !std::isfinite(k_class))
        throw std::invalid_argument("wrk_l: K must be positive");
    if (r < 2) throw std::domain_error("wrk_l: requires r >= 2");
    InputsEcho echo{"lip:" + detail::format_double(k_class), r, std::nullopt};

    const bool alternating = (r % 2 == 0);
    const int p = r + 2;
    double sum = 0.0, comp = 0.0;
    long i = 0;
    double bound = 1.0;
    for (; i < 2000000; ++i) {
        const double k = 2.0 * i + 1.0;
        const double term = ((alternating && (i % 2 == 1)) ? -1.0 : 1.0) * std::pow(k, -p);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        bound = alternating ? std::pow(k + 2.0, -p)
                            : std::pow(2.0 * (i + 1.0), 1 - p) / (2.0 * (p - 1));
        if (bound <= 2e-16 * sum) {
            ++i;
            break;
        }
    }
    const double factor = 16.0 * k_class / kPi;
    return {factor * sum, false, factor * (bound + 1e-15 * sum), i, std::move(echo)};
}

/// Sup of the total variation of f~ over W^r H_omega (r >= 2),
/// 4 sum_i (-1)^{ir} b_{2i+1}/(2i+1)^r — the same series as m_r_l at
/// order r-1.
inline ConstantResult variation_sup(const Modulus& m, int r, double rel_tol = 1e-9) {
    if (r < 2) throw std::domain_error("variation_sup: requires r >= 2");
    ConstantResult res = m_r_l(m, r - 1, rel_tol);
    res.inputs.r = r;
    return res;
}

/// Best-uniform-approximation supremum over H_omega: half the shift
/// difference at t = pi.
inline ConstantResult e0_sup(const Modulus& m, double rel_tol = 1e-9) {
    ConstantResult res = omega0_diff(m, kPi, rel_tol);
    if (!res.divergent) {
        res.value *= 0.5;
        res.abs_error *= 0.5;
    }
    return res;
}

}  // namespace sharpconj

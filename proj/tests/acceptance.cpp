// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Every reference value is computed independently of the code under
// test (direct series, brute-force summation, quadrature on the defining
// equations).

#include <cmath>
#include <cstdio>
#include <exception>
#include <random>
#include <string>
#include <vector>

#include "sharpconj/conjugate.hpp"
#include "sharpconj/constants.hpp"
#include "sharpconj/modulus.hpp"
#include "sharpconj/oracle.hpp"

using namespace sharpconj;

namespace {

int failures = 0;

void report(const char* name, bool ok, const std::string& detail = "") {
    std::printf("%s  %s%s%s\n", ok ? "PASS" : "FAIL", name,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++failures;
}

template <typename Fn>
void criterion(const char* name, Fn&& fn) {
    try {
        std::string detail;
        const bool ok = fn(detail);
        report(name, ok, ok ? "" : detail);
    } catch (const std::exception& e) {
        report(name, false, std::string("exception: ") + e.what());
    }
}

double catalan_series() {
    double sum = 0.0, comp = 0.0;
    for (long i = 2000000; i >= 0; --i) {
        const double term = ((i & 1) ? -1.0 : 1.0) / (double(2 * i + 1) * double(2 * i + 1));
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double zeta5_series(double& tail_bound) {
    double sum = 0.0;
    const long N = 10000000;
    for (long n = N; n >= 1; --n) sum += std::pow(double(n), -5);
    tail_bound = std::pow(double(N), -4.0) / 4.0;
    return sum;
}

double beta4_series(double& tail_bound) {
    double sum = 0.0, comp = 0.0;
    const long N = 10000000;
    for (long i = N - 1; i >= 0; --i) {
        const double term = ((i & 1) ? -1.0 : 1.0) * std::pow(2.0 * i + 1.0, -4);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    tail_bound = std::pow(2.0 * N + 1.0, -4.0);
    return sum;
}

double uniform_pm1(std::mt19937_64& rng) {
    return 2.0 * (double(rng() >> 11) * 0x1.0p-53) - 1.0;
}

}  // namespace

int main() {
    criterion("sup-norm constant matches the independent Catalan series", [](std::string& why) {
        const double reference = 4.0 * catalan_series() / kPi;
        const auto computed = m0_c(Modulus::lipschitz(1.0));
        const double diff = std::abs(computed.value - reference);
        if (computed.divergent || diff >= 1e-8) {
            why = "difference " + std::to_string(diff);
            return false;
        }
        return true;
    });

    criterion("logarithmic modulus diverges with strictly growing oracle evidence",
              [](std::string& why) {
        const Modulus m = Modulus::log_modulus();
        if (!m0_c(m).divergent || !omega0_diff(m, kPi).divergent) {
            why = "divergence marker missing";
            return false;
        }
        for (const auto which : {WhichConstant::m0_c(), WhichConstant::omega0_diff(kPi)}) {
            const auto rep = verify_constant(m, which, 512, 8);
            if (!rep.target_divergent || rep.growth_ladder.size() != 4) {
                why = "growth ladder missing";
                return false;
            }
            for (std::size_t k = 0; k < 4; ++k) {
                if (rep.growth_ladder[k].first != std::size_t(64) << k) {
                    why = "unexpected ladder grids";
                    return false;
                }
                if (k > 0 &&
                    rep.growth_ladder[k].second <= rep.growth_ladder[k - 1].second) {
                    why = "ladder not strictly increasing";
                    return false;
                }
            }
        }
        return true;
    });

    criterion("kernel pairing map solves its defining equation", [](std::string& why) {
        for (double t : {kPi / 4, kPi / 2, kPi}) {
            const RhoTable table = make_rho_table(t, 25);
            double prev = kPi;
            for (std::size_t i = 0; i < table.nodes.size(); ++i) {
                if (std::abs(table.residuals[i]) >= 1e-8) {
                    why = "residual " + std::to_string(table.residuals[i]);
                    return false;
                }
                if (table.nodes[i].second >= prev) {
                    why = "values not strictly decreasing";
                    return false;
                }
                prev = table.nodes[i].second;
            }
            if (std::abs(rho(t, 1e-6) - kPi) >= 1e-4 ||
                std::abs(rho(t, 0.5 * t - 1e-6) - 0.5 * t) >= 1e-4) {
                why = "endpoint limit violated at t=" + std::to_string(t);
                return false;
            }
        }
        return true;
    });

    criterion("series constant on Lipschitz classes equals the numeric closed form",
              [](std::string& why) {
        for (int r : {1, 2, 3, 4}) {
            for (double k : {0.5, 1.0, 3.0}) {
                const double lhs = m_r_l(Modulus::lipschitz(k), r).value;
                const double rhs = wrk_l(k, r + 1).value;
                if (std::abs(lhs - rhs) > 1e-9 * std::abs(rhs)) {
                    why = "mismatch at r=" + std::to_string(r) + " K=" + std::to_string(k);
                    return false;
                }
            }
        }
        return true;
    });

    criterion("numeric series constants match independent zeta and beta sums",
              [](std::string& why) {
        double tail = 0.0;
        const double zeta_ref = (16.0 / kPi) * (1.0 - std::pow(2.0, -5)) * zeta5_series(tail);
        if (tail > 1e-12) {
            why = "zeta tail bound too large";
            return false;
        }
        if (std::abs(wrk_l(1.0, 3).value - zeta_ref) >= 1e-8) {
            why = "odd-order value off";
            return false;
        }
        const double beta_ref = (16.0 / kPi) * beta4_series(tail);
        if (tail > 1e-12) {
            why = "beta tail bound too large";
            return false;
        }
        if (std::abs(wrk_l(1.0, 2).value - beta_ref) >= 1e-8) {
            why = "even-order value off";
            return false;
        }
        return true;
    });

    criterion("variation supremum equals the shifted series constant", [](std::string& why) {
        for (int r : {2, 3, 4}) {
            for (const auto& m : {Modulus::lipschitz(1.0), Modulus::power(0.5),
                                  Modulus::capped_linear(1.0)}) {
                const double lhs = variation_sup(m, r).value;
                const double rhs = m_r_l(m, r - 1).value;
                if (std::abs(lhs - rhs) > 1e-12 * std::max(1.0, std::abs(rhs))) {
                    why = "mismatch at r=" + std::to_string(r);
                    return false;
                }
            }
        }
        return true;
    });

    criterion("oracle search closes the gap and tightens as the grid refines",
              [](std::string& why) {
        const Modulus m = Modulus::lipschitz(1.0);
        const auto sup256 = verify_constant(m, WhichConstant::m0_c(), 256, 32);
        if (!(sup256.gap_relative < 0.03)) {
            why = "sup-norm gap " + std::to_string(sup256.gap_relative);
            return false;
        }
        const auto diff256 = verify_constant(m, WhichConstant::omega0_diff(kPi), 256, 32);
        if (!(diff256.gap_relative < 0.05)) {
            why = "shift-difference gap " + std::to_string(diff256.gap_relative);
            return false;
        }
        const auto sup512 = verify_constant(m, WhichConstant::m0_c(), 512, 32);
        const auto diff512 = verify_constant(m, WhichConstant::omega0_diff(kPi), 512, 32);
        if (!(sup512.gap_relative < sup256.gap_relative &&
              diff512.gap_relative < diff256.gap_relative)) {
            why = "gap did not shrink when the grid doubled";
            return false;
        }
        return true;
    });

    criterion("conjugates of sampled class members respect the sup-norm bound",
              [](std::string& why) {
        for (const auto& m : {Modulus::lipschitz(1.0), Modulus::power(0.5)}) {
            const double bound = m0_c(m).value * 1.05;
            for (std::uint64_t seed = 0; seed < 100; ++seed) {
                const GridFunction f = sample_h_omega(m, 512, seed);
                const double c_norm = norms(conjugate_spectral(f)).c_norm;
                if (c_norm > bound) {
                    why = "sample " + std::to_string(seed) + " exceeds the bound";
                    return false;
                }
            }
        }
        return true;
    });

    criterion("conjugation is an involution with the series convention",
              [](std::string& why) {
        const std::size_t n = 64;
        std::mt19937_64 rng(17);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> v(n, 0.0);
            std::vector<double> a(n / 4), b(n / 4);
            for (std::size_t k = 0; k < n / 4; ++k) {
                a[k] = uniform_pm1(rng);
                b[k] = uniform_pm1(rng);
            }
            const double offset = uniform_pm1(rng);
            for (std::size_t j = 0; j < n; ++j) {
                const double x = 2.0 * kPi * double(j) / double(n);
                v[j] = offset;
                for (std::size_t k = 0; k < n / 4; ++k)
                    v[j] += a[k] * std::cos(double(k + 1) * x) +
                            b[k] * std::sin(double(k + 1) * x);
            }
            const GridFunction f(v);
            double mean = 0.0;
            for (std::size_t j = 0; j < n; ++j) mean += f[j];
            mean /= double(n);

            const auto twice = conjugate_spectral(conjugate_spectral(f));
            for (std::size_t j = 0; j < n; ++j) {
                if (std::abs(twice[j] + (f[j] - mean)) >= 1e-10) {
                    why = "double conjugation drifted";
                    return false;
                }
            }
            const auto spec = conjugate_spectral(f);
            for (std::size_t j = 0; j < n; j += 4) {
                if (std::abs(conjugate_pv(f, f.node(j)) - spec[j]) >= 1e-6) {
                    why = "kernel and spectral conjugation disagree";
                    return false;
                }
            }
        }

        std::vector<double> cosine(n);
        for (std::size_t j = 0; j < n; ++j)
            cosine[j] = std::cos(2.0 * kPi * double(j) / double(n));
        const auto sine = conjugate_spectral(GridFunction(cosine));
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(sine[j] - std::sin(2.0 * kPi * double(j) / double(n))) >= 1e-12) {
                why = "convention check failed";
                return false;
            }
        }
        return true;
    });

    criterion("best approximation is half the endpoint shift difference",
              [](std::string& why) {
        const Modulus m = Modulus::lipschitz(1.0);
        const double half = e0_sup(m).value;
        const double full = omega0_diff(m, kPi).value;
        if (std::abs(half - 0.5 * full) > 1e-12 * std::max(1.0, full)) {
            why = "not half the endpoint difference";
            return false;
        }
        if (half > m0_c(m).value + 1e-9) {
            why = "exceeds the sup-norm constant";
            return false;
        }
        double prev = -1e-9;
        double last = 0.0;
        for (int i = 0; i <= 16; ++i) {
            const double t = kPi * double(i) / 16.0;
            const double v = omega0_diff(m, t).value;
            if (v < prev - 1e-9) {
                why = "sweep decreased at t=" + std::to_string(t);
                return false;
            }
            prev = std::max(prev, v);
            last = v;
        }
        if (last < prev - 1e-9) {
            why = "maximum not at the endpoint";
            return false;
        }
        return true;
    });

    std::printf("%s\n", failures == 0 ? "all criteria passed"
                                      : "some criteria FAILED");
    return failures == 0 ? 0 : 1;
}

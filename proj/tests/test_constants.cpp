#include <catch2/catch_amalgamated.hpp>

#include "sharpconj/constants.hpp"

#include <cmath>
#include <vector>

using namespace sharpconj;

namespace {

// Catalan's constant by direct alternating summation, error below 1e-12.
double catalan_series() {
    double sum = 0.0, comp = 0.0;
    for (long i = 500000; i >= 0; --i) {
        const double term = ((i & 1) ? -1.0 : 1.0) / double((2 * i + 1) * (2 * i + 1));
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

// zeta(5) partial sum; the remainder after 1e7 terms is ~2.5e-29.
double zeta5_series() {
    double sum = 0.0;
    for (long n = 10000000; n >= 1; --n) sum += std::pow(double(n), -5);
    return sum;
}

// Dirichlet beta(4); alternating remainder below (2e7)^-4.
double beta4_series() {
    double sum = 0.0, comp = 0.0;
    for (long i = 9999999; i >= 0; --i) {
        const double term = ((i & 1) ? -1.0 : 1.0) * std::pow(2.0 * i + 1.0, -4);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

// Independent rho: bisection on the quadrature-evaluated defining equation.
double rho_bisect(double t, double x) {
    const double a = 0.5 * t;
    auto k = [a](double u) { return std::sin(a) / (std::cos(u) - std::cos(a)); };
    const double lhs =
        integrate_endpoint_singular(k, 0.0, x, SingularEnd::upper, 1e-12).value;
    auto defect = [&](double r) {
        const double rhs =
            r < kPi ? integrate_endpoint_singular(k, r, kPi, SingularEnd::lower, 1e-12).value
                    : 0.0;
        return lhs + rhs;
    };
    double lo = a + 1e-9 * (kPi - a);
    double hi = kPi - 1e-15;
    for (int it = 0; it < 64 && hi - lo > 5e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        (defect(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

const Modulus kZero = Modulus::tabulated({{0.0, 0.0}, {kPi, 0.0}});

}  // namespace

TEST_CASE("m0_c reproduces the Catalan closed form for lip:1") {
    const auto res = m0_c(Modulus::lipschitz(1.0));
    const double expected = 4.0 * catalan_series() / kPi;
    CHECK_FALSE(res.divergent);
    CHECK(std::abs(res.value - expected) < 1e-9);
    CHECK(std::abs(res.value - expected) <= std::max(10.0 * res.abs_error, 1e-12));
    CHECK(res.terms_or_panels > 0);
    CHECK(res.inputs.modulus == "lip:1");
}

TEST_CASE("m0_c is homogeneous and monotone in the modulus") {
    const double base = m0_c(Modulus::lipschitz(1.0)).value;
    CHECK(std::abs(m0_c(Modulus::lipschitz(3.0)).value - 3.0 * base) < 1e-12 * 3.0 * base);

    const double pw = m0_c(Modulus::power(0.5)).value;
    CHECK(std::abs(m0_c(Modulus::power(0.5, 2.0)).value - 2.0 * pw) < 1e-12 * 2.0 * pw);

    const double capped1 = m0_c(Modulus::capped_linear(1.0)).value;
    const double capped2 = m0_c(Modulus::capped_linear(2.0)).value;
    CHECK(capped1 <= capped2 + 1e-9);
    CHECK(capped2 <= base + 1e-9);
}

TEST_CASE("m0_c of the zero modulus is zero") {
    const auto res = m0_c(kZero);
    CHECK_FALSE(res.divergent);
    CHECK(std::abs(res.value) < 1e-15);
}

TEST_CASE("C-metric constants are divergent for the logarithmic modulus") {
    CHECK(m0_c(Modulus::log_modulus()).divergent);
    CHECK(omega0_diff(Modulus::log_modulus(), kPi).divergent);
    CHECK(e0_sup(Modulus::log_modulus()).divergent);
}

TEST_CASE("rho closed form satisfies the defining integral equation") {
    for (double t : {kPi / 4, kPi / 2, kPi, 1.5 * kPi}) {
        const double a = 0.5 * t;
        double prev = kPi;
        for (int i = 1; i <= 7; ++i) {
            const double x = a * i / 8.0;
            const double r = rho(t, x);
            CHECK(r > a);
            CHECK(r < kPi);
            CHECK(r < prev);
            prev = r;
            CHECK(std::abs(rho_residual(t, x, r)) < 1e-8);
        }
    }
}

TEST_CASE("rho agrees with the bisection oracle") {
    for (double t : {kPi / 2, kPi, 1.5 * kPi}) {
        const double a = 0.5 * t;
        for (double frac : {0.2, 0.5, 0.8}) {
            const double x = a * frac;
            CHECK(std::abs(rho(t, x) - rho_bisect(t, x)) < 1e-10);
        }
    }
}

TEST_CASE("rho approaches its endpoint limits") {
    for (double t : {kPi / 4, kPi / 2, kPi, 1.5 * kPi}) {
        const double a = 0.5 * t;
        CHECK(std::abs(rho(t, 1e-6) - kPi) < 1e-4);
        CHECK(std::abs(rho(t, a - 1e-6) - a) < 1e-4);
    }
}

TEST_CASE("rho rejects out-of-range arguments") {
    CHECK_THROWS_AS(rho(0.0, 0.1), std::domain_error);
    CHECK_THROWS_AS(rho(2.0 * kPi, 0.1), std::domain_error);
    CHECK_THROWS_AS(rho(kPi, 0.0), std::domain_error);
    CHECK_THROWS_AS(rho(kPi, kPi / 2), std::domain_error);
}

TEST_CASE("rho tables hold their invariants") {
    const auto table = make_rho_table(kPi, 25);
    REQUIRE(table.nodes.size() == 25);
    REQUIRE(table.residuals.size() == 25);
    for (size_t i = 0; i < table.nodes.size(); ++i) {
        const auto [x, r] = table.nodes[i];
        CHECK(x > 0.0);
        CHECK(x < kPi / 2);
        CHECK(r > kPi / 2);
        CHECK(r < kPi);
        if (i > 0) CHECK(r < table.nodes[i - 1].second);
        CHECK(std::abs(table.residuals[i]) < 1e-8);
    }
}

TEST_CASE("omega0_diff handles the degenerate and invalid shifts") {
    const auto zero_shift = omega0_diff(Modulus::lipschitz(1.0), 0.0);
    CHECK(zero_shift.value == 0.0);
    CHECK_FALSE(zero_shift.divergent);

    CHECK_THROWS_AS(omega0_diff(Modulus::lipschitz(1.0), -0.1), std::domain_error);
    CHECK_THROWS_AS(omega0_diff(Modulus::lipschitz(1.0), 3.3), std::domain_error);

    const auto echoed = omega0_diff(Modulus::lipschitz(1.0), 1.5);
    REQUIRE(echoed.inputs.t.has_value());
    CHECK(*echoed.inputs.t == 1.5);
}

TEST_CASE("omega0_diff grows with the shift and stays below twice m0_c") {
    const auto m = Modulus::lipschitz(1.0);
    double prev = 0.0;
    for (double t : {0.4, 1.0, 2.0, 2.8, kPi}) {
        const double v = omega0_diff(m, t).value;
        CHECK(v >= prev - 1e-10);
        prev = v;
    }
    CHECK(prev <= 2.0 * m0_c(m).value + 1e-9);
}

TEST_CASE("omega0_diff matches the unfused kernel formulation") {
    for (const auto& m : {Modulus::lipschitz(1.0), Modulus::power(0.5)}) {
        for (double t : {1.0, kPi}) {
            const double a = 0.5 * t;
            auto raw = [&](double u) {
                return std::sin(a) / (std::cos(u) - std::cos(a)) * m(rho(t, u) - u);
            };
            const double direct =
                (2.0 / kPi) *
                integrate_endpoint_singular(raw, 0.0, a, SingularEnd::upper, 1e-10).value;
            const double fused = omega0_diff(m, t).value;
            CHECK(std::abs(direct - fused) < 1e-7);
        }
    }
}

TEST_CASE("omega0_diff is homogeneous in the modulus") {
    const double v1 = omega0_diff(Modulus::lipschitz(1.0), 2.0).value;
    const double v2 = omega0_diff(Modulus::lipschitz(2.0), 2.0).value;
    CHECK(std::abs(v2 - 2.0 * v1) < 1e-12 * v2);
}

TEST_CASE("b_coeff matches its closed forms") {
    CHECK(std::abs(b_coeff(Modulus::lipschitz(1.0), 1) - 4.0 / kPi) < 1e-10);
    CHECK(std::abs(b_coeff(Modulus::lipschitz(1.0), 3) - (-4.0 / (9.0 * kPi))) < 1e-10);
    for (long k = 1; k <= 19; k += 2) {
        const double i = double((k - 1) / 2);
        const double lip_expect =
            (4.0 * 2.5 / kPi) * (std::fmod(i, 2.0) == 0.0 ? 1.0 : -1.0) / double(k * k);
        CHECK(std::abs(b_coeff(Modulus::lipschitz(2.5), k) - lip_expect) < 1e-10);

        const double capped_expect = (4.0 / kPi) * std::sin(0.5 * k) / double(k * k);
        CHECK(std::abs(b_coeff(Modulus::capped_linear(1.0), k) - capped_expect) < 1e-10);

        CHECK(std::abs(b_coeff(kZero, k)) < 1e-15);
    }
    CHECK_THROWS_AS(b_coeff(Modulus::lipschitz(1.0), 2), std::domain_error);
    CHECK_THROWS_AS(b_coeff(Modulus::lipschitz(1.0), 0), std::domain_error);
    CHECK_THROWS_AS(b_coeff(Modulus::lipschitz(1.0), -3), std::domain_error);
}

TEST_CASE("coefficient table agrees with direct quadrature") {
    for (const auto& m : {Modulus::lipschitz(1.0), Modulus::power(0.5),
                          Modulus::capped_linear(1.0), Modulus::log_modulus()}) {
        const detail::SineCoeffTable table(m, 1e-10);
        for (long k : {1L, 3L, 9L, 31L, 101L}) {
            CHECK(std::abs(table.coeff(k) - b_coeff(m, k)) < 1e-9);
        }
    }
}

TEST_CASE("coefficient stream reproduces direct coefficients without drift") {
    const detail::SineCoeffTable table(Modulus::power(0.5), 1e-9);
    detail::SineCoeffTable::Stream stream(table);
    for (long k = 1; k <= 799; k += 2) {
        const double streamed = stream.next();
        CHECK(std::abs(streamed - table.coeff(k)) < 1e-12);
    }
}

TEST_CASE("wrk_l matches independent zeta and beta summations") {
    const auto odd3 = wrk_l(1.0, 3);
    const double zeta_form = (16.0 / kPi) * (1.0 - std::pow(2.0, -5)) * zeta5_series();
    CHECK(std::abs(odd3.value - zeta_form) < 1e-10);

    const auto even2 = wrk_l(1.0, 2);
    const double beta_form = (16.0 / kPi) * beta4_series();
    CHECK(std::abs(even2.value - beta_form) < 1e-10);

    const auto scaled = wrk_l(2.5, 4);
    CHECK(std::abs(scaled.value - 2.5 * wrk_l(1.0, 4).value) < 1e-14 * scaled.value);

    CHECK_THROWS_AS(wrk_l(1.0, 1), std::domain_error);
    CHECK_THROWS_AS(wrk_l(0.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(wrk_l(-2.0, 3), std::invalid_argument);
}

TEST_CASE("m_r_l on Lipschitz classes reduces to the numeric series constants") {
    for (int r : {1, 2, 3, 4}) {
        for (double k : {0.5, 1.0, 3.0}) {
            const double lhs = m_r_l(Modulus::lipschitz(k), r).value;
            const double rhs = wrk_l(k, r + 1).value;
            CHECK(std::abs(lhs - rhs) <= 1e-9 * std::abs(rhs));
        }
    }
}

TEST_CASE("m_r_l agrees with brute-force series summation") {
    // capped_linear has the closed-form coefficients (4/pi) sin(k/2)/k^2.
    for (int r : {1, 2}) {
        double brute = 0.0, comp = 0.0;
        for (long i = 999999; i >= 0; --i) {
            const double k = 2.0 * i + 1.0;
            const double b = (4.0 / kPi) * std::sin(0.5 * k) / (k * k);
            const double sign = (r % 2 == 0 && i % 2 == 1) ? -1.0 : 1.0;
            const double term = 4.0 * sign * b * std::pow(k, -(r + 1));
            const double y = term - comp;
            const double t = brute + y;
            comp = (t - brute) - y;
            brute = t;
        }
        const auto res = m_r_l(Modulus::capped_linear(1.0), r);
        CHECK(std::abs(res.value - brute) < 1e-8);
        CHECK(std::abs(res.value - brute) <= std::max(10.0 * res.abs_error, 1e-11));
    }

    // power:0.5 with per-coefficient adaptive quadrature; the finite cut is
    // covered by the tail allowance 16*omega(pi)/(pi*(2N)^4 * 8).
    {
        const int r = 3;
        const long n_terms = 150;
        double brute = 0.0;
        for (long i = 0; i < n_terms; ++i) {
            const long k = 2 * i + 1;
            brute += 4.0 * b_coeff(Modulus::power(0.5), k) * std::pow(double(k), -(r + 1));
        }
        const double tail = 16.0 * std::sqrt(kPi) / kPi * std::pow(2.0 * n_terms, -4.0) / 8.0;
        const auto res = m_r_l(Modulus::power(0.5), r);
        CHECK(std::abs(res.value - brute) < tail + 1e-9);
    }
}

TEST_CASE("m_r_l edge cases") {
    const auto zero = m_r_l(kZero, 1);
    CHECK(zero.value == 0.0);
    CHECK_FALSE(zero.divergent);

    CHECK_THROWS_AS(m_r_l(Modulus::lipschitz(1.0), 0), std::domain_error);

    // The L-metric series is finite even where the C-metric constant is not.
    const auto logres = m_r_l(Modulus::log_modulus(), 2);
    CHECK_FALSE(logres.divergent);
    CHECK(logres.value > 0.0);
    CHECK(logres.inputs.r == 2);
}

TEST_CASE("variation_sup is the shifted series") {
    for (int r : {2, 3, 4}) {
        for (const auto& m :
             {Modulus::lipschitz(1.0), Modulus::power(0.5), Modulus::capped_linear(1.0)}) {
            const auto var = variation_sup(m, r);
            const auto ref = m_r_l(m, r - 1);
            CHECK(std::abs(var.value - ref.value) <= 1e-15 * std::abs(ref.value));
            CHECK(var.inputs.r == r);
        }
    }
    CHECK_THROWS_AS(variation_sup(Modulus::lipschitz(1.0), 1), std::domain_error);
}

TEST_CASE("e0_sup is half the shift difference at pi") {
    const auto half = e0_sup(Modulus::lipschitz(1.0));
    const auto full = omega0_diff(Modulus::lipschitz(1.0), kPi);
    CHECK(std::abs(half.value - 0.5 * full.value) <= 1e-15 * full.value);
    CHECK(half.value <= m0_c(Modulus::lipschitz(1.0)).value + 1e-9);
    CHECK(std::abs(e0_sup(kZero).value) < 1e-15);
}

// Prints the family of sharp constants for a few moduli side by side, then
// cross-checks the sup-norm constant against the extremal-search oracle.

#include <cstdio>

#include "sharpconj/constants.hpp"
#include "sharpconj/oracle.hpp"

using namespace sharpconj;

namespace {

void print_row(const char* label, const ConstantResult& res) {
    if (res.divergent)
        std::printf("  %-16s %s\n", label, "divergent");
    else
        std::printf("  %-16s %.12f  (+/- %.1e)\n", label, res.value, res.abs_error);
}

}  // namespace

int main() {
    const struct {
        const char* name;
        Modulus m;
    } moduli[] = {
        {"lip:1", Modulus::lipschitz(1.0)},
        {"power:0.5", Modulus::power(0.5)},
        {"capped:1", Modulus::capped_linear(1.0)},
        {"log", Modulus::log_modulus()},
    };

    for (const auto& entry : moduli) {
        std::printf("%s\n", entry.name);
        print_row("m0_c", m0_c(entry.m));
        print_row("omega0_diff(pi)", omega0_diff(entry.m, kPi));
        print_row("e0_sup", e0_sup(entry.m));
        print_row("m_r_l(r=1)", m_r_l(entry.m, 1));
        print_row("m_r_l(r=2)", m_r_l(entry.m, 2));
        print_row("variation(r=2)", variation_sup(entry.m, 2));
    }

    std::printf("\noracle check on lip:1 (n=256, 16 restarts)\n");
    const auto report =
        verify_constant(Modulus::lipschitz(1.0), WhichConstant::m0_c(), 256, 16);
    std::printf("  target    %.12f\n", report.target_constant);
    std::printf("  empirical %.12f\n", report.empirical_best);
    std::printf("  gap       %.4f%%\n", 100.0 * report.gap_relative);
    return 0;
}

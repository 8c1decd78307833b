#include "srsim/analysis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace srsim {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt3 = 1.7320508075688772;

double clip01(double v, bool& clipped) {
    if (v < 0.0) { clipped = true; return 0.0; }
    if (v > 1.0) { clipped = true; return 1.0; }
    return v;
}

}  // namespace

double q_function(double u) { return 0.5 * std::erfc(u / kSqrt2); }

BerReport union_bound_bers(const CompositeConstellation& comp, double mu) {
    if (mu <= 0.0) throw composite_error("union_bound_bers: mu must be positive");
    const std::size_t n = comp.size();
    const double prior = 1.0 / static_cast<double>(n);
    double sum_s = 0.0, sum_c = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t k = 0; k < n; ++k) {
            if (m == k) continue;
            const double q = q_function(mu * std::abs(comp.points[m] - comp.points[k]));
            sum_s += prior * q * hamming(comp.s_label(m), comp.s_label(k));
            sum_c += prior * q * hamming(comp.c_label(m), comp.c_label(k));
        }
    }
    BerReport rep;
    rep.method = BerMethod::UnionBound;
    // Px derived from the same weighted sums so the bit-additivity identity
    // holds to the last ulp.
    rep.ps = sum_s / comp.s_bits;
    rep.pc = sum_c / comp.c_bits;
    rep.px = (sum_s + sum_c) / (comp.s_bits + comp.c_bits);
    rep.ps = clip01(rep.ps, rep.clipped);
    rep.pc = clip01(rep.pc, rep.clipped);
    rep.px = clip01(rep.px, rep.clipped);
    return rep;
}

BerReport region_approximation(const DistanceProfile& profile, double mu,
                               CouplingRegion region) {
    if (!profile.classified)
        throw composite_error("region_approximation: profile lacks structural classes");
    BerReport rep;
    rep.method = BerMethod::DominantTerm;
    const double q_intra = q_function(mu * profile.d_intra);
    const double q_adj = q_function(mu * profile.d_adjacent);
    const double q_nonadj = q_function(mu * profile.d_nonadjacent);
    switch (region) {
        case CouplingRegion::I:
            rep.ps = rep.pc = q_nonadj;
            rep.warning = profile.d_min < profile.d_nonadjacent * (1.0 - 1e-9);
            break;
        case CouplingRegion::II:
            rep.ps = rep.pc = q_adj;
            rep.warning = profile.d_min < profile.d_adjacent * (1.0 - 1e-9);
            break;
        case CouplingRegion::III:
            rep.ps = q_adj;
            rep.pc = q_intra;
            rep.warning = profile.d_min < profile.d_intra * (1.0 - 1e-9);
            break;
    }
    rep.px = (2.0 * rep.ps + rep.pc) / 3.0;
    return rep;
}

GainConstants gain_constants() {
    GainConstants g;
    g.zeta1 = (kSqrt3 + 1.0 - kSqrt2) / 2.0;
    g.zeta2 = (kSqrt2 + 1.0 - kSqrt3) / 2.0;
    g.alpha1 = g.zeta1 * g.zeta1 + g.zeta2 * g.zeta2 - kSqrt2 * g.zeta1 * g.zeta2;
    g.alpha2 = g.zeta2 * g.zeta2;
    return g;
}

PerformanceGain performance_gain(double gamma_b, std::size_t n) {
    if (gamma_b < 0.0 || n < 1)
        throw std::invalid_argument("performance_gain: invalid arguments");
    const auto g = gain_constants();
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    const double snr1 = g.alpha1 * gamma_b * n2;
    const double snr2 = 2.0 * g.alpha2 * gamma_b * n2;
    PerformanceGain out;
    out.ps_gain = 0.5 - q_function(std::sqrt(snr1));
    out.pc_gain = out.ps_gain - q_function(std::sqrt(snr2));
    out.ps_gain_lower = 0.5 - 0.5 * std::exp(-0.5 * snr1);
    out.pc_gain_lower = out.ps_gain_lower - 0.5 * std::exp(-0.5 * snr2);
    return out;
}

CommutativeReport commutative_check(double a, double b, double theta_a, double theta_b) {
    if (a < 0.0 || b < 0.0)
        throw std::invalid_argument("commutative_check: magnitudes must be non-negative");
    const cplx ea(std::cos(theta_a), std::sin(theta_a));
    const cplx eb(std::cos(theta_b), std::sin(theta_b));
    auto f = [&](double u, double v, double c) { return u * ea + c * v * eb; };
    CommutativeReport rep;
    const cplx f1p = f(a, b, 1.0), f1m = f(a, b, -1.0);
    const cplx f2p = f(b, a, 1.0), f2m = f(b, a, -1.0);
    rep.degenerate = (a == b && theta_a == theta_b) || f1p == cplx{} || f1m == cplx{} ||
                     f2p == cplx{} || f2m == cplx{};
    rep.amplitudes_match = std::abs(std::abs(f1p) - std::abs(f2p)) <= 1e-12 &&
                           std::abs(std::abs(f1m) - std::abs(f2m)) <= 1e-12;
    if (!rep.degenerate) {
        const double sum = std::arg(f1p * std::conj(f1m)) + std::arg(f2p * std::conj(f2m));
        const double two_pi = 2.0 * std::numbers::pi;
        rep.phase_sum = std::fmod(std::fmod(sum, two_pi) + two_pi, two_pi);
    }
    return rep;
}

double error_floor(double gamma_d) {
    if (gamma_d < 0.0) throw std::invalid_argument("error_floor: gamma_d < 0");
    return q_function(std::sqrt(2.0 * gamma_d));
}

std::size_t min_elements_for_benefit(double rho1, double rho2, double rho3) {
    if (rho2 <= 0.0 || rho3 <= 0.0)
        throw std::invalid_argument("min_elements_for_benefit: reflected path losses must be positive");
    if (rho1 <= 0.0) return 0;
    const double c = (kSqrt3 - 1.0) / (kSqrt2 + 1.0 - kSqrt3);
    return static_cast<std::size_t>(std::ceil(c * std::sqrt(rho1 / (rho2 * rho3))));
}

}  // namespace srsim

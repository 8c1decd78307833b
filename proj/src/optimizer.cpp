#include "srsim/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace srsim {

namespace {

double angle_or_zero(cplx z) { return z == cplx{} ? 0.0 : std::arg(z); }

cplx unit(double ang) { return cplx(std::cos(ang), std::sin(ang)); }

double composite_dmin(cplx h_d, cplx h_r1, cplx h_r2, const Constellation& s_const,
                      const Constellation& c_const) {
    const auto comp = build_composite(h_d, h_r1, h_r2, s_const, c_const);
    return pairwise_distances(comp).d_min;
}

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kSqrt6 = 2.449489742783178;
constexpr double kZeta1 = (kSqrt3 + 1.0 - kSqrt2) / 2.0;
constexpr double kZeta2 = (kSqrt2 + 1.0 - kSqrt3) / 2.0;

}  // namespace

AlignedPhases optimal_phases(cplx h_d, std::span<const cplx> f1,
                             std::span<const cplx> f2, double common_phase) {
    AlignedPhases out;
    const double target1 = angle_or_zero(h_d);
    out.phi1.reserve(f1.size());
    out.phi2.reserve(f2.size());
    double sum1 = 0.0, sum2 = 0.0;
    for (const auto& f : f1) {
        out.phi1.push_back(unit(target1 - std::arg(f)));
        sum1 += std::abs(f);
    }
    for (const auto& f : f2) {
        out.phi2.push_back(unit(common_phase - std::arg(f)));
        sum2 += std::abs(f);
    }
    out.h_r1 = sum1 * unit(target1);
    out.h_r2 = sum2 * unit(common_phase);
    return out;
}

double select_common_phase(cplx h_d, double r1_mag, double r2_mag,
                           const Constellation& s_const,
                           const Constellation& c_const) {
    const double base = angle_or_zero(h_d);
    const double cand_a = base + std::numbers::pi / 4.0;
    const double cand_b = base + 3.0 * std::numbers::pi / 4.0;
    const cplx h_r1 = r1_mag * unit(base);
    const double da = composite_dmin(h_d, h_r1, r2_mag * unit(cand_a), s_const, c_const);
    const double db = composite_dmin(h_d, h_r1, r2_mag * unit(cand_b), s_const, c_const);
    return db > da + 1e-12 ? cand_b : cand_a;
}

double feasibility_threshold(double t, std::size_t n) {
    if (t < 0.0) throw optimizer_error("feasibility_threshold: t must be non-negative");
    if (t >= kSqrt2) return 0.0;
    return (2.0 - std::sqrt(t * t + 2.0)) * static_cast<double>(n);
}

PartitionSolution partition_closed_form(double t, std::size_t n) {
    if (t < 0.0 || n < 1) throw optimizer_error("partition_closed_form: invalid input");
    PartitionSolution sol;
    const double nd = static_cast<double>(n);
    double n1_cont;
    if (t >= (kSqrt2 + kSqrt6) / 2.0) {
        sol.case_tag = 4;
        n1_cont = 0.0;
    } else if (t >= kSqrt3 - kSqrt2 && t <= kSqrt3 * (kSqrt2 - 1.0)) {
        sol.case_tag = 2;
        n1_cont = (2.0 - std::sqrt(t * t + 2.0)) * nd;
    } else {
        sol.case_tag = 1;  // cases 1 and 3 share the same formula
        n1_cont = (kZeta1 - kZeta2 * t) * nd;
    }
    const auto n1 = static_cast<std::size_t>(std::max(0.0, std::ceil(n1_cont)));
    sol.n1 = std::min(n1, n);
    sol.common_phase = std::numbers::pi / 4.0;  // offset from the direct-link angle
    sol.n2 = n - sol.n1;  // N2 derived so C3 holds exactly
    const auto d = los_distance_functions(t, nd, static_cast<double>(sol.n1));
    sol.d_min = std::sqrt(d.min());  // in units of sqrt(rho2*rho3)
    sol.feasible = static_cast<double>(sol.n1) >= feasibility_threshold(t, n) - 1e-9;
    return sol;
}

namespace {

struct SplitEval {
    PartitionSolution sol;
    bool better_than(const PartitionSolution& other) const {
        constexpr double kTieTol = 1e-12;
        if (sol.d_min > other.d_min * (1.0 + kTieTol) + kTieTol) return true;
        if (other.d_min > sol.d_min * (1.0 + kTieTol) + kTieTol) return false;
        return sol.n1 > other.n1;  // tie: larger N1 gives the better bit mapping
    }
};

PartitionSolution evaluate_split(cplx h_d, std::span<const cplx> cascades,
                                 std::size_t n1, const Constellation& s_const,
                                 const Constellation& c_const) {
    const auto f1 = cascades.subspan(0, n1);
    const auto f2 = cascades.subspan(n1);
    double r1 = 0.0, r2 = 0.0;
    for (const auto& f : f1) r1 += std::abs(f);
    for (const auto& f : f2) r2 += std::abs(f);
    const double phase =
        select_common_phase(h_d, r1, r2, s_const, c_const);
    auto aligned = optimal_phases(h_d, f1, f2, phase);
    PartitionSolution sol;
    sol.n1 = n1;
    sol.n2 = cascades.size() - n1;
    sol.common_phase = phase;
    sol.d_min = composite_dmin(h_d, aligned.h_r1, aligned.h_r2, s_const, c_const);
    // Partitioning feasibility. In the aligned LoS geometry with total cascade
    // magnitude F and transmit-arm magnitude B this reduces to the threshold
    // N1 >= (2 - sqrt(t^2 + 2)) N; it is strictly tighter than the raw
    // quarter-turn rotation bound, so phase_rotation_feasible holds whenever
    // this does.
    const double f_total = r1 + r2;
    const double d_mag = std::abs(h_d);
    const double lhs = (f_total + r2) * (f_total + r2);
    const double rhs = d_mag * d_mag + 2.0 * f_total * f_total;
    sol.feasible = lhs <= rhs + 1e-9 * std::max(1.0, rhs);
    sol.phi1 = std::move(aligned.phi1);
    sol.phi2 = std::move(aligned.phi2);
    return sol;
}

}  // namespace

PartitionSolution partition_oracle(cplx h_d, std::span<const cplx> cascades,
                                   const Constellation& s_const,
                                   const Constellation& c_const,
                                   bool enforce_feasibility) {
    PartitionSolution best_feasible, best_any;
    bool have_feasible = false, have_any = false;
    for (std::size_t n1 = 0; n1 <= cascades.size(); ++n1) {
        SplitEval eval{evaluate_split(h_d, cascades, n1, s_const, c_const)};
        if (!have_any || eval.better_than(best_any)) {
            best_any = eval.sol;
            have_any = true;
        }
        if (eval.sol.feasible && (!have_feasible || eval.better_than(best_feasible))) {
            best_feasible = eval.sol;
            have_feasible = true;
        }
    }
    if (enforce_feasibility && have_feasible) return best_feasible;
    return best_any;
}

PartitionSolution partition_with_priority(cplx h_d, std::span<const cplx> cascades,
                                          const Constellation& s_const,
                                          const Constellation& c_const, double eta) {
    if (eta < 0.0 || eta > 1.0)
        throw optimizer_error("partition_with_priority: eta must lie in [0, 1]");
    // D_s,max: primary-pair minimum distance when the whole surface assists.
    auto primary_dmin = [&](const PartitionSolution& sol) {
        const auto f1 = cascades.subspan(0, sol.n1);
        const auto f2 = cascades.subspan(sol.n1);
        const auto aligned = optimal_phases(h_d, f1, f2, sol.common_phase);
        const auto comp = build_composite(h_d, aligned.h_r1, aligned.h_r2,
                                          s_const, c_const);
        const auto prof = pairwise_distances(comp);
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < comp.size(); ++m)
            for (std::size_t k = 0; k < comp.size(); ++k)
                if (m != k && comp.s_index[m] != comp.s_index[k])
                    d = std::min(d, prof.at(m, k));
        return d;
    };
    PartitionSolution all_assist;
    all_assist.n1 = cascades.size();
    all_assist.common_phase = angle_or_zero(h_d) + std::numbers::pi / 4.0;
    const double ds_max = primary_dmin(all_assist);
    const double ds_req = eta * ds_max;

    PartitionSolution best;
    best.feasible = false;
    bool have = false;
    for (std::size_t n1 = 0; n1 <= cascades.size(); ++n1) {
        SplitEval eval{evaluate_split(h_d, cascades, n1, s_const, c_const)};
        if (primary_dmin(eval.sol) < ds_req - 1e-12) continue;
        if (!have || eval.better_than(best)) {
            best = eval.sol;
            have = true;
        }
    }
    if (!have) {
        PartitionSolution infeasible;
        infeasible.feasible = false;
        infeasible.priority_met = false;
        infeasible.d_min = 0.0;
        return infeasible;
    }
    return best;
}

double LosDistances::min() const { return std::min({f1, f2, f3}); }

LosDistances los_distance_functions(double t, double n, double n1) {
    if (n1 < 0.0 || n1 > n)
        throw optimizer_error("los_distance_functions: N1 out of range");
    LosDistances d;
    const double a = 2.0 + kSqrt2;
    d.f1 = 2.0 * (a * n1 * n1 - a * (1.0 - t) * n * n1 +
                  n * n * (1.0 - kSqrt2 * t + t * t));
    d.f2 = 4.0 * (t * n + n1) * (t * n + n1);
    d.f3 = 4.0 * (n - n1) * (n - n1);
    return d;
}

}  // namespace srsim

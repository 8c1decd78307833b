#include "srsim/composite.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace srsim {

namespace {

cplx dot(std::span<const cplx> phi, std::span<const cplx> f) {
    cplx sum{};
    for (std::size_t i = 0; i < f.size(); ++i) sum += phi[i] * f[i];
    return sum;
}

constexpr double kUnitTol = 1e-9;

}  // namespace

CompositeConstellation build_composite(cplx h_d, std::span<const cplx> f1,
                                       std::span<const cplx> f2,
                                       std::span<const cplx> phi1,
                                       std::span<const cplx> phi2,
                                       const Constellation& s_const,
                                       const Constellation& c_const) {
    if (f1.size() != phi1.size() || f2.size() != phi2.size())
        throw composite_error("build_composite: phase/cascade length mismatch");
    for (const auto& p : phi1)
        if (std::abs(std::abs(p) - 1.0) > kUnitTol)
            throw composite_error("build_composite: phi1 entry is not unit modulus");
    for (const auto& p : phi2)
        if (std::abs(std::abs(p) - 1.0) > kUnitTol)
            throw composite_error("build_composite: phi2 entry is not unit modulus");
    return build_composite(h_d, dot(phi1, f1), dot(phi2, f2), s_const, c_const);
}

CompositeConstellation build_composite(cplx h_d, cplx h_r1, cplx h_r2,
                                       const Constellation& s_const,
                                       const Constellation& c_const) {
    CompositeConstellation comp;
    comp.s_order = s_const.order;
    comp.c_order = c_const.order;
    comp.s_bits = s_const.bits_per_symbol();
    comp.c_bits = c_const.bits_per_symbol();
    comp.h_e = h_d + h_r1;
    comp.h_b = h_r2;
    const std::size_t total = s_const.order * static_cast<std::size_t>(c_const.order);
    comp.points.reserve(total);
    comp.labels.reserve(total);
    // Enumeration order: c-major within each s, so points sharing s form a
    // contiguous cluster.
    for (unsigned si = 0; si < s_const.order; ++si) {
        for (unsigned ci = 0; ci < c_const.order; ++ci) {
            comp.points.push_back((comp.h_e + comp.h_b * c_const.points[ci]) *
                                  s_const.points[si]);
            comp.s_index.push_back(si);
            comp.c_index.push_back(ci);
            comp.labels.push_back(s_const.labels[si] + c_const.labels[ci]);
        }
    }
    return comp;
}

DistanceProfile pairwise_distances(const CompositeConstellation& comp) {
    DistanceProfile prof;
    prof.dim = comp.size();
    prof.matrix.assign(prof.dim * prof.dim, 0.0);
    prof.d_min = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < prof.dim; ++m) {
        for (std::size_t k = m + 1; k < prof.dim; ++k) {
            const double d = std::abs(comp.points[m] - comp.points[k]);
            prof.matrix[m * prof.dim + k] = d;
            prof.matrix[k * prof.dim + m] = d;
            if (d < prof.d_min) prof.d_min = d;
        }
    }
    if (prof.dim < 2) prof.d_min = 0.0;
    return prof;
}

DistanceProfile classify_qpsk_bpsk(cplx h_d, cplx h_r1, cplx h_r2) {
    const cplx he = h_d + h_r1;
    DistanceProfile prof;
    prof.classified = true;
    prof.d_intra = 2.0 * std::abs(h_r2);
    prof.d_adjacent =
        std::sqrt(2.0) * std::abs(he + h_r2 * cplx(0.0, 1.0));
    prof.nonadjacent_first_branch =
        std::norm(h_r2) >= 2.0 * std::real(he * std::conj(h_r2));
    prof.d_nonadjacent = prof.nonadjacent_first_branch
                             ? 2.0 * std::abs(he)
                             : 2.0 * std::abs(he - h_r2);
    prof.d_min = std::min({prof.d_intra, prof.d_adjacent, prof.d_nonadjacent});
    // Full matrix from the explicit 8-point composite, for callers that want
    // per-pair values alongside the classes.
    const auto comp = build_composite(h_d, h_r1, h_r2, make_psk(4), make_psk(2));
    auto full = pairwise_distances(comp);
    prof.matrix = std::move(full.matrix);
    prof.dim = full.dim;
    return prof;
}

DistanceProfile classify_general(cplx h_d, cplx h_r1, cplx h_r2,
                                 const Constellation& s_const,
                                 const Constellation& c_const) {
    const auto comp = build_composite(h_d, h_r1, h_r2, s_const, c_const);
    DistanceProfile prof = pairwise_distances(comp);
    const std::size_t n = prof.dim;
    prof.pair_class.assign(n * n, PairClass::Mixed);
    const double inf = std::numeric_limits<double>::infinity();
    double d1 = inf, d2 = inf, d3 = inf;
    constexpr double kSymTol = 1e-12;
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t k = 0; k < n; ++k) {
            if (m == k) continue;
            const cplx sm = s_const.points[comp.s_index[m]];
            const cplx sk = s_const.points[comp.s_index[k]];
            const cplx cm = c_const.points[comp.c_index[m]];
            const cplx ck = c_const.points[comp.c_index[k]];
            PairClass cls;
            if (comp.s_index[m] == comp.s_index[k]) {
                cls = PairClass::SecondaryOnly;
                d1 = std::min(d1, prof.at(m, k));
            } else if (std::abs(sm * cm - sk * ck) <= kSymTol) {
                cls = PairClass::ProductEqual;
                d2 = std::min(d2, prof.at(m, k));
            } else {
                cls = PairClass::Mixed;
                d3 = std::min(d3, prof.at(m, k));
            }
            prof.pair_class[m * n + k] = cls;
        }
    }
    prof.d1 = d1 == inf ? 0.0 : d1;
    prof.d2 = d2 == inf ? 0.0 : d2;
    prof.d3 = d3 == inf ? 0.0 : d3;
    return prof;
}

bool phase_rotation_feasible(cplx h_e, cplx h_b) {
    const cplx bpsk[2] = {cplx(1.0, 0.0), cplx(-1.0, 0.0)};
    return phase_rotation_feasible(h_e, h_b, bpsk);
}

bool phase_rotation_feasible(cplx h_e, cplx h_b, std::span<const cplx> c_points) {
    constexpr double kQuarterPi = std::numbers::pi / 4.0;
    constexpr double kTol = 1e-9;
    const cplx ref = (h_e == cplx{}) ? cplx(1.0, 0.0) : h_e;
    for (const cplx& c : c_points) {
        const cplx rotated = h_e + c * h_b;
        if (rotated == cplx{}) return false;  // undefined angle, treat as violated
        const double rot = std::abs(std::arg(rotated * std::conj(ref)));
        if (rot > kQuarterPi + kTol) return false;
    }
    return true;
}

}  // namespace srsim

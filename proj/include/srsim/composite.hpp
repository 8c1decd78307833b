#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "srsim/constellation.hpp"

namespace srsim {

class composite_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The received point set x = (h_d + phi1^H f1 + phi2^H f2 * c) * s,
/// enumerated over all (s, c) pairs, with concatenated bit labels
/// (primary bits first).
struct CompositeConstellation {
    std::vector<cplx> points;
    std::vector<unsigned> s_index;
    std::vector<unsigned> c_index;
    std::vector<std::string> labels;
    unsigned s_order = 0;
    unsigned c_order = 0;
    unsigned s_bits = 0;
    unsigned c_bits = 0;
    cplx h_e{};  // h_d + phi1^H f1
    cplx h_b{};  // phi2^H f2

    std::size_t size() const { return points.size(); }
    std::string s_label(std::size_t m) const { return labels[m].substr(0, s_bits); }
    std::string c_label(std::size_t m) const { return labels[m].substr(s_bits); }
};

enum class PairClass {
    SecondaryOnly,   // s_m == s_k, c_m != c_k
    ProductEqual,    // s_m c_m == s_k c_k with s_m != s_k
    Mixed,           // everything else
};

struct DistanceProfile {
    std::vector<double> matrix;  // row-major |A_x| x |A_x|
    std::size_t dim = 0;
    double d_min = 0.0;

    // QPSK x BPSK structural classes, when that classification applies.
    double d_intra = 0.0;        // D^I
    double d_adjacent = 0.0;     // D^II
    double d_nonadjacent = 0.0;  // D^III
    bool nonadjacent_first_branch = false;
    bool classified = false;

    // General class minima D1/D2/D3 and per-pair tags, when computed.
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;
    std::vector<PairClass> pair_class;  // row-major, diagonal unused

    double at(std::size_t m, std::size_t k) const { return matrix[m * dim + k]; }
};

CompositeConstellation build_composite(cplx h_d, std::span<const cplx> f1,
                                       std::span<const cplx> f2,
                                       std::span<const cplx> phi1,
                                       std::span<const cplx> phi2,
                                       const Constellation& s_const,
                                       const Constellation& c_const);

/// Convenience overload taking the already-summed reflected scalars
/// h_r1 = phi1^H f1 and h_r2 = phi2^H f2.
CompositeConstellation build_composite(cplx h_d, cplx h_r1, cplx h_r2,
                                       const Constellation& s_const,
                                       const Constellation& c_const);

/// Full pairwise distance matrix and its off-diagonal minimum.
DistanceProfile pairwise_distances(const CompositeConstellation& comp);

/// Structural distances of the 8-point QPSK x BPSK composite under aligned
/// phases: intra-cluster, inter-adjacent-cluster, and the two-branch
/// inter-non-adjacent-cluster term.
DistanceProfile classify_qpsk_bpsk(cplx h_d, cplx h_r1, cplx h_r2);

/// Tag every pair of the general composite with its structural class and
/// record the per-class minimum distances.
DistanceProfile classify_general(cplx h_d, cplx h_r1, cplx h_r2,
                                 const Constellation& s_const,
                                 const Constellation& c_const);

/// Both phase-rotation constraints for a BPSK secondary: the composite
/// channel h_e + c*h_b must stay within pi/4 of h_e for c in {1,-1}.
/// h_e == 0 uses the zero-angle convention.
bool phase_rotation_feasible(cplx h_e, cplx h_b);

/// Same constraint over an arbitrary secondary alphabet: every rotated
/// channel h_e + c*h_b must stay within pi/4 of h_e.
bool phase_rotation_feasible(cplx h_e, cplx h_b, std::span<const cplx> c_points);

}  // namespace srsim

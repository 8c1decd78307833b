#pragma once

#include <string>

#include "srsim/composite.hpp"

namespace srsim {

enum class BerMethod { UnionBound, DominantTerm, MonteCarlo };

struct BerReport {
    double px = 0.0;
    double ps = 0.0;
    double pc = 0.0;
    BerMethod method = BerMethod::UnionBound;
    bool clipped = false;   // any value hit the [0,1] clip
    bool warning = false;   // region approximation inconsistent with profile
};

/// Tail of the standard Gaussian: integral of the unit normal density over
/// [u, inf).
double q_function(double u);

/// Union-bound BERs of the composite, primary and secondary signals with
/// uniform priors and pairwise error bound Q(mu * D_mk).
BerReport union_bound_bers(const CompositeConstellation& comp, double mu);

enum class CouplingRegion { I, II, III };

/// Dominant-term BER approximations for the three coupling regions of the
/// QPSK x BPSK composite. The profile must carry the structural classes.
BerReport region_approximation(const DistanceProfile& profile, double mu,
                               CouplingRegion region);

/// Closed-form gain of the partitioned design over the all-transmission
/// design for a blocked direct link and large N, plus the exponential
/// lower bounds.
struct PerformanceGain {
    double ps_gain = 0.0;
    double pc_gain = 0.0;
    double ps_gain_lower = 0.0;  // exponential bound
    double pc_gain_lower = 0.0;
};
PerformanceGain performance_gain(double gamma_b, std::size_t n);

/// The split-exchange symmetry of the composite channel: amplitudes match
/// for both secondary symbols, and the two phase differences sum to pi.
struct CommutativeReport {
    bool amplitudes_match = false;
    double phase_sum = 0.0;  // radians, wrapped to [0, 2*pi)
    bool degenerate = false;
};
CommutativeReport commutative_check(double a, double b, double theta_a, double theta_b);

/// BER limit Q(sqrt(2*gamma_d)) of the pure-transmission design as the
/// reflected link outgrows the direct link.
double error_floor(double gamma_d);

/// Smallest element count for which the partitioned design beats the
/// RIS-free primary link under LoS.
std::size_t min_elements_for_benefit(double rho1, double rho2, double rho3);

/// Gain constants from the closed-form partition.
struct GainConstants {
    double zeta1;
    double zeta2;
    double alpha1;
    double alpha2;
};
GainConstants gain_constants();

}  // namespace srsim

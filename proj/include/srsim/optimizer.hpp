#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "srsim/composite.hpp"
#include "srsim/constellation.hpp"

namespace srsim {

class optimizer_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Result of the partition + phase design.
struct PartitionSolution {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::vector<cplx> phi1;
    std::vector<cplx> phi2;
    double common_phase = 0.0;  // radians
    double d_min = 0.0;
    bool feasible = true;       // phase-rotation constraint on the chosen split
    bool priority_met = true;   // primary-distance requirement (priority variant)
    int case_tag = 0;           // closed-form case (1, 2 or 4), 0 when from a scan
};

/// Closed-form Theorem-2 input under LoS channels.
struct TheoremTwoInput {
    double t = 0.0;
    std::size_t n = 0;
};

struct PriorityConfig {
    double eta = 0.0;  // primary distance requirement as a fraction of D_s,max
};

/// Phase shifts that align each cascade with the direct link: the products
/// phi1_n * f1_n all land on angle(h_d) and phi2_n * f2_n on the common
/// phase. Uses the angle(h_d) := 0 convention when h_d = 0.
struct AlignedPhases {
    std::vector<cplx> phi1;
    std::vector<cplx> phi2;
    cplx h_r1{};  // phi1^H f1 (coherent sum)
    cplx h_r2{};  // phi2^H f2
};
AlignedPhases optimal_phases(cplx h_d, std::span<const cplx> f1,
                             std::span<const cplx> f2, double common_phase);

/// Pick the common phase of sub-surface II from the two closed-form
/// candidates angle(h_d) + pi/4 and angle(h_d) + 3*pi/4 by evaluating the
/// resulting composite d_min; ties go to the +pi/4 candidate.
double select_common_phase(cplx h_d, double r1_mag, double r2_mag,
                           const Constellation& s_const,
                           const Constellation& c_const);

/// Continuous feasibility threshold N1 >= (2 - sqrt(t^2+2)) N (0 for
/// t >= sqrt(2)).
double feasibility_threshold(double t, std::size_t n);

/// Closed-form optimal split under LoS channels as a function of the
/// channel strength ratio. N2 = N - N1 always.
PartitionSolution partition_closed_form(double t, std::size_t n);

/// One-dimensional exhaustive scan over every split of the given cascades,
/// applying the aligned phases and common-phase selection at each split.
/// Ties in d_min prefer the larger N1. When enforce_feasibility is set,
/// infeasible splits are skipped (unless every split is infeasible, in
/// which case the best overall is returned flagged infeasible).
PartitionSolution partition_oracle(cplx h_d, std::span<const cplx> cascades,
                                   const Constellation& s_const,
                                   const Constellation& c_const,
                                   bool enforce_feasibility = false);

/// Oracle scan restricted to splits meeting the primary-distance
/// requirement D_s >= eta * D_s_max, where D_s_max is the primary minimum
/// distance with the whole surface assisting. Returns an infeasible
/// solution (d_min = 0) when no split qualifies.
PartitionSolution partition_with_priority(cplx h_d, std::span<const cplx> cascades,
                                          const Constellation& s_const,
                                          const Constellation& c_const, double eta);

/// Appendix distance functions under LoS in units of rho2*rho3:
/// f1 = squared inter-adjacent-cluster distance, f2 = squared
/// non-adjacent (direct-dominant branch), f3 = squared intra-cluster.
struct LosDistances {
    double f1 = 0.0;
    double f2 = 0.0;
    double f3 = 0.0;
    double min() const;
};
LosDistances los_distance_functions(double t, double n, double n1);

}  // namespace srsim

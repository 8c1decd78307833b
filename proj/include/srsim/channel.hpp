#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "srsim/constellation.hpp"
#include "srsim/rng.hpp"

namespace srsim {

class channel_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Point2D {
    double x = 0.0;
    double y = 0.0;
};

/// Node placement on a 2-D plane plus per-link path loss exponents.
/// Reference gain is 1e-3 at 1 m.
struct Geometry {
    Point2D ptx;
    Point2D ris;
    Point2D crx;
    double xi_direct = 3.5;   // PTx-CRx
    double xi_incident = 2.2; // PTx-RIS
    double xi_reflect = 2.8;  // RIS-CRx
    bool direct_blocked = false;

    double d_direct() const;
    double d_incident() const;
    double d_reflect() const;
    double rho_direct() const;   // 0 when direct_blocked
    double rho_incident() const;
    double rho_reflect() const;

    /// Place PTx at the origin, CRx at (d1, 0) and the RIS at the upper
    /// intersection of the two range circles. The three distances must
    /// satisfy the triangle inequality.
    static Geometry from_distances(double d1, double d2, double d3,
                                   double xi1, double xi2, double xi3);

    /// Default layout of the simulation setup: distances 80/75/10 m with
    /// exponents 3.5/2.2/2.8.
    static Geometry reference();
};

/// Rician factors per link (linear, >= 0; infinity means pure LoS).
struct FadingConfig {
    double kappa_incident = 10.0; // PTx-RIS
    double kappa_reflect = 8.0;   // RIS-CRx
    double kappa_direct = 12.0;   // PTx-CRx
};

struct ChannelRealization {
    cplx h_d{};             // direct channel
    std::vector<cplx> g;    // PTx-RIS, length N
    std::vector<cplx> h;    // RIS-CRx, length N
    std::size_t size() const { return g.size(); }
};

/// Transmit/noise powers in watts and the derived SNR scalars.
struct LinkBudget {
    double p_t = 0.0;
    double sigma2 = 0.0;

    LinkBudget(double p_t_watts, double sigma2_watts);
    static LinkBudget from_dbm(double p_t_dbm, double sigma2_dbm);

    double mu() const;                              // sqrt(p_t / (2 sigma^2))
    double gamma_reflected(double rho2, double rho3) const;
    double gamma_direct(const cplx& h_d) const;
};

double dbm_to_watts(double dbm);

/// rho = 1e-3 * d^-xi
double path_loss(double d, double xi);

/// Pure LoS realization: magnitudes fixed by path loss, phases from the
/// ULA steering vectors implied by the geometry.
ChannelRealization los_realization(const Geometry& geo, std::size_t n);

/// Rician mixture of the LoS realization and CN(0,1) scattering, per link.
ChannelRealization sample_rician(const Geometry& geo, const FadingConfig& fading,
                                 std::size_t n, RngStream& rng);

/// Per-element cascades f_n = conj(h_n) * g_n, split at element n1.
std::pair<std::vector<cplx>, std::vector<cplx>> cascade(const ChannelRealization& ch,
                                                        std::size_t n1);

/// t = sqrt(rho1 / (rho2 rho3 N^2)): direct-link strength relative to the
/// fully aligned reflected link.
double channel_strength_ratio(double rho1, double rho2, double rho3, std::size_t n);

/// Least-squares channel estimate from T = r*(N+1) pilot slots. Each
/// repetition sends s = 1 for one all-off slot (isolates h_d) and N slots
/// with DFT reflection patterns; estimates are averaged over repetitions.
/// The cascaded estimates are returned in g with h set to all-ones, so
/// cascade() on the result reproduces the estimated f_n.
ChannelRealization ls_estimate(const ChannelRealization& truth, std::size_t training_len,
                               const LinkBudget& budget, RngStream& rng);

}  // namespace srsim

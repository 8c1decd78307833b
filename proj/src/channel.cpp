#include "srsim/channel.hpp"

#include <cmath>
#include <numbers>

namespace srsim {

namespace {

double dist(const Point2D& a, const Point2D& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// ULA steering phase of element n towards a node at angle theta from the
// array normal, half-wavelength spacing.
cplx steer(std::size_t n, double sin_theta) {
    const double ang = std::numbers::pi * static_cast<double>(n) * sin_theta;
    return cplx(std::cos(ang), std::sin(ang));
}

double sin_angle_from_ris(const Geometry& geo, const Point2D& node) {
    // Array axis along x; angle measured from the array normal (y axis).
    const double dx = node.x - geo.ris.x;
    const double dy = node.y - geo.ris.y;
    const double d = std::hypot(dx, dy);
    return d > 0.0 ? dx / d : 0.0;
}

}  // namespace

double Geometry::d_direct() const { return dist(ptx, crx); }
double Geometry::d_incident() const { return dist(ptx, ris); }
double Geometry::d_reflect() const { return dist(ris, crx); }

double Geometry::rho_direct() const {
    return direct_blocked ? 0.0 : path_loss(d_direct(), xi_direct);
}
double Geometry::rho_incident() const { return path_loss(d_incident(), xi_incident); }
double Geometry::rho_reflect() const { return path_loss(d_reflect(), xi_reflect); }

Geometry Geometry::from_distances(double d1, double d2, double d3,
                                  double xi1, double xi2, double xi3) {
    if (d1 <= 0.0 || d2 <= 0.0 || d3 <= 0.0)
        throw channel_error("distances must be positive");
    // RIS at the intersection of circles |p - ptx| = d2, |p - crx| = d3.
    const double x = (d1 * d1 + d2 * d2 - d3 * d3) / (2.0 * d1);
    const double y2 = d2 * d2 - x * x;
    if (y2 < 0.0)
        throw channel_error("distances violate the triangle inequality");
    Geometry geo;
    geo.ptx = {0.0, 0.0};
    geo.crx = {d1, 0.0};
    geo.ris = {x, std::sqrt(y2)};
    geo.xi_direct = xi1;
    geo.xi_incident = xi2;
    geo.xi_reflect = xi3;
    return geo;
}

Geometry Geometry::reference() {
    return from_distances(80.0, 75.0, 10.0, 3.5, 2.2, 2.8);
}

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

LinkBudget::LinkBudget(double p_t_watts, double sigma2_watts)
    : p_t(p_t_watts), sigma2(sigma2_watts) {
    if (p_t <= 0.0 || sigma2 <= 0.0)
        throw channel_error("transmit and noise power must be positive");
}

LinkBudget LinkBudget::from_dbm(double p_t_dbm, double sigma2_dbm) {
    return LinkBudget(dbm_to_watts(p_t_dbm), dbm_to_watts(sigma2_dbm));
}

double LinkBudget::mu() const { return std::sqrt(p_t / (2.0 * sigma2)); }

double LinkBudget::gamma_reflected(double rho2, double rho3) const {
    return p_t * rho2 * rho3 / sigma2;
}

double LinkBudget::gamma_direct(const cplx& h_d) const {
    return p_t * std::norm(h_d) / sigma2;
}

double path_loss(double d, double xi) {
    if (d <= 0.0) throw channel_error("path_loss: distance must be positive");
    return 1e-3 * std::pow(d, -xi);
}

ChannelRealization los_realization(const Geometry& geo, std::size_t n) {
    if (n < 1) throw channel_error("need at least one reflecting element");
    ChannelRealization ch;
    const double a_d = std::sqrt(geo.rho_direct());
    const double a_g = std::sqrt(geo.rho_incident());
    const double a_h = std::sqrt(geo.rho_reflect());
    const double sin_tx = sin_angle_from_ris(geo, geo.ptx);
    const double sin_rx = sin_angle_from_ris(geo, geo.crx);
    ch.h_d = cplx(a_d, 0.0);
    ch.g.reserve(n);
    ch.h.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ch.g.push_back(a_g * steer(i, sin_tx));
        ch.h.push_back(a_h * steer(i, sin_rx));
    }
    return ch;
}

ChannelRealization sample_rician(const Geometry& geo, const FadingConfig& fading,
                                 std::size_t n, RngStream& rng) {
    ChannelRealization ch = los_realization(geo, n);
    auto mix = [&](cplx los, double kappa) {
        if (std::isinf(kappa)) return los;
        const double w_los = std::sqrt(kappa / (kappa + 1.0));
        const double w_nlos = std::sqrt(1.0 / (kappa + 1.0));
        return w_los * los + w_nlos * rng.cgaussian() * std::abs(los);
    };
    // Draw order is fixed (h_d, then g, then h) so a seed pins the realization.
    ch.h_d = mix(ch.h_d, fading.kappa_direct);
    for (auto& v : ch.g) v = mix(v, fading.kappa_incident);
    for (auto& v : ch.h) v = mix(v, fading.kappa_reflect);
    return ch;
}

std::pair<std::vector<cplx>, std::vector<cplx>> cascade(const ChannelRealization& ch,
                                                        std::size_t n1) {
    if (n1 > ch.size())
        throw channel_error("cascade: split index out of range");
    std::vector<cplx> f1, f2;
    f1.reserve(n1);
    f2.reserve(ch.size() - n1);
    for (std::size_t i = 0; i < ch.size(); ++i) {
        const cplx f = std::conj(ch.h[i]) * ch.g[i];
        (i < n1 ? f1 : f2).push_back(f);
    }
    return {std::move(f1), std::move(f2)};
}

double channel_strength_ratio(double rho1, double rho2, double rho3, std::size_t n) {
    if (rho2 <= 0.0 || rho3 <= 0.0 || n < 1)
        throw channel_error("channel_strength_ratio: invalid arguments");
    return std::sqrt(rho1 / (rho2 * rho3 * static_cast<double>(n) * static_cast<double>(n)));
}

ChannelRealization ls_estimate(const ChannelRealization& truth, std::size_t training_len,
                               const LinkBudget& budget, RngStream& rng) {
    const std::size_t n = truth.size();
    if (n == 0) throw channel_error("ls_estimate: empty realization");
    if (training_len == 0 || training_len % (n + 1) != 0)
        throw channel_error("ls_estimate: training length must be a positive multiple of N+1");
    const std::size_t reps = training_len / (n + 1);
    const double amp = std::sqrt(budget.p_t);
    const double noise_sd = std::sqrt(budget.sigma2);

    const auto [f1, f2] = cascade(truth, 0);
    const std::vector<cplx>& f = f2;  // full cascade vector

    // Reflection patterns: rows of the N x N DFT matrix (unit-modulus entries).
    std::vector<cplx> dft(n * n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t m = 0; m < n; ++m) {
            const double ang = -2.0 * std::numbers::pi *
                               static_cast<double>(k) * static_cast<double>(m) /
                               static_cast<double>(n);
            dft[k * n + m] = cplx(std::cos(ang), std::sin(ang));
        }

    cplx hd_acc{};
    std::vector<cplx> v_acc(n, cplx{});
    for (std::size_t r = 0; r < reps; ++r) {
        // All-off slot.
        const cplx y0 = amp * truth.h_d + noise_sd * rng.cgaussian();
        hd_acc += y0 / amp;
        // Patterned slots.
        for (std::size_t k = 0; k < n; ++k) {
            cplx sum{};
            for (std::size_t m = 0; m < n; ++m) sum += dft[k * n + m] * f[m];
            const cplx yk = amp * (truth.h_d + sum) + noise_sd * rng.cgaussian();
            v_acc[k] += yk / amp - y0 / amp;
        }
    }
    const double inv_reps = 1.0 / static_cast<double>(reps);
    ChannelRealization est;
    est.h_d = hd_acc * inv_reps;
    est.g.resize(n);
    est.h.assign(n, cplx(1.0, 0.0));
    // Invert the unitary system: f_hat = (1/N) W^H v.
    for (std::size_t m = 0; m < n; ++m) {
        cplx sum{};
        for (std::size_t k = 0; k < n; ++k) sum += std::conj(dft[k * n + m]) * v_acc[k];
        est.g[m] = sum * inv_reps / static_cast<double>(n);
    }
    return est;
}

}  // namespace srsim

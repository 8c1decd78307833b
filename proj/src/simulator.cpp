#include "srsim/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <thread>

#include "srsim/detector.hpp"

namespace srsim {

Scheme scheme_from_name(const std::string& name) {
    if (name == "proposed") return Scheme::Proposed;
    if (name == "benchmark1" || name == "benchmark1-no-RIS") return Scheme::Benchmark1NoRis;
    if (name == "benchmark2" || name == "benchmark2-pure-assist")
        return Scheme::Benchmark2PureAssist;
    if (name == "benchmark3" || name == "benchmark3-pure-transmit")
        return Scheme::Benchmark3PureTransmit;
    if (name == "priority") return Scheme::Priority;
    throw std::invalid_argument("unknown scheme: " + name);
}

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Proposed: return "proposed";
        case Scheme::Benchmark1NoRis: return "benchmark1-no-RIS";
        case Scheme::Benchmark2PureAssist: return "benchmark2-pure-assist";
        case Scheme::Benchmark3PureTransmit: return "benchmark3-pure-transmit";
        case Scheme::Priority: return "priority";
    }
    return "?";
}

void SimConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (n_elements < 1) throw std::invalid_argument("need at least one RIS element");
    if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("eta must lie in [0, 1]");
    if (symbols_per_realization < 1)
        throw std::invalid_argument("symbols_per_realization must be >= 1");
    if (csi == CsiMode::LeastSquares && training_reps < 1)
        throw std::invalid_argument("training_reps must be >= 1 for LS CSI");
    (void)budget();                  // validates powers
    (void)make_by_name(s_name);      // validates constellation names
    (void)make_by_name(c_name);
}

WilsonInterval wilson_interval(std::uint64_t k, std::uint64_t n) {
    if (n == 0) return {0.0, 1.0};
    constexpr double z = 1.959963984540054;  // 97.5% normal quantile
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double BerEstimate::ps() const {
    return s_bits ? static_cast<double>(s_bit_errors) / static_cast<double>(s_bits) : 0.0;
}
double BerEstimate::pc() const {
    if (c_by_convention) return 0.5;
    return c_bits ? static_cast<double>(c_bit_errors) / static_cast<double>(c_bits) : 0.0;
}
double BerEstimate::px() const {
    return x_bits ? static_cast<double>(x_bit_errors) / static_cast<double>(x_bits) : 0.0;
}
double BerEstimate::ser() const {
    return symbols ? static_cast<double>(x_symbol_errors) / static_cast<double>(symbols) : 0.0;
}
WilsonInterval BerEstimate::ps_ci() const { return wilson_interval(s_bit_errors, s_bits); }
WilsonInterval BerEstimate::pc_ci() const { return wilson_interval(c_bit_errors, c_bits); }
WilsonInterval BerEstimate::px_ci() const { return wilson_interval(x_bit_errors, x_bits); }

BerEstimate& BerEstimate::operator+=(const BerEstimate& other) {
    s_bit_errors += other.s_bit_errors;
    c_bit_errors += other.c_bit_errors;
    x_bit_errors += other.x_bit_errors;
    x_symbol_errors += other.x_symbol_errors;
    s_bits += other.s_bits;
    c_bits += other.c_bits;
    x_bits += other.x_bits;
    symbols += other.symbols;
    c_by_convention = c_by_convention || other.c_by_convention;
    return *this;
}

namespace {

cplx apply_phases(std::span<const cplx> phi, std::span<const cplx> f) {
    cplx sum{};
    for (std::size_t i = 0; i < f.size(); ++i) sum += phi[i] * f[i];
    return sum;
}

double angle_convention(cplx z) { return z == cplx{} ? 0.0 : std::arg(z); }

}  // namespace

PointPlan plan_point(const SimConfig& cfg) {
    cfg.validate();
    const std::size_t n = cfg.n_elements;
    const auto s_const = make_by_name(cfg.s_name);
    const auto c_const = make_by_name(cfg.c_name);
    PointPlan plan;
    if (cfg.fixed_n1) {
        plan.n1 = std::min(*cfg.fixed_n1, n);
    } else {
        switch (cfg.scheme) {
            case Scheme::Benchmark1NoRis:
            case Scheme::Benchmark3PureTransmit:
                plan.n1 = 0;
                break;
            case Scheme::Benchmark2PureAssist:
                plan.n1 = n;
                break;
            case Scheme::Proposed: {
                if (cfg.s_name == "qpsk" && cfg.c_name == "bpsk") {
                    const double t = channel_strength_ratio(
                        cfg.geometry.rho_direct(), cfg.geometry.rho_incident(),
                        cfg.geometry.rho_reflect(), n);
                    plan.n1 = partition_closed_form(t, n).n1;
                } else {
                    // No closed form for general constellations; scan the
                    // LoS realization once, honouring the phase-rotation
                    // feasibility constraint.
                    const auto ch = los_realization(cfg.geometry, n);
                    const auto cascades = cascade(ch, 0).second;
                    plan.n1 =
                        partition_oracle(ch.h_d, cascades, s_const, c_const, true).n1;
                }
                break;
            }
            case Scheme::Priority: {
                const auto ch = los_realization(cfg.geometry, n);
                const auto cascades = cascade(ch, 0).second;
                const auto sol =
                    partition_with_priority(ch.h_d, cascades, s_const, c_const, cfg.eta);
                plan.priority_feasible = sol.priority_met;
                plan.n1 = sol.n1;
                break;
            }
        }
    }
    plan.n2 = n - plan.n1;
    // LoS d_min of the resolved split, for reporting.
    const auto ch = los_realization(cfg.geometry, n);
    const auto [f1, f2] = cascade(ch, plan.n1);
    double r1 = 0.0, r2 = 0.0;
    for (const auto& f : f1) r1 += std::abs(f);
    for (const auto& f : f2) r2 += std::abs(f);
    if (cfg.scheme == Scheme::Benchmark1NoRis) r1 = r2 = 0.0;
    if (cfg.scheme == Scheme::Benchmark2PureAssist) {
        r1 += r2;
        r2 = 0.0;
    }
    const double base = angle_convention(ch.h_d);
    if (cfg.secondary_active()) {
        const double phase = select_common_phase(ch.h_d, r1, r2, s_const, c_const);
        const auto comp = build_composite(
            ch.h_d, r1 * cplx(std::cos(base), std::sin(base)),
            r2 * cplx(std::cos(phase), std::sin(phase)), s_const, c_const);
        plan.los_d_min = pairwise_distances(comp).d_min;
    } else {
        // Primary-only: d_min of the scaled primary constellation.
        const double gain = std::abs(ch.h_d + r1 * cplx(std::cos(base), std::sin(base)));
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < s_const.points.size(); ++m)
            for (std::size_t k = m + 1; k < s_const.points.size(); ++k)
                d = std::min(d, std::abs(s_const.points[m] - s_const.points[k]));
        plan.los_d_min = gain * d;
    }
    return plan;
}

namespace {

struct TrialContext {
    const SimConfig& cfg;
    const PointPlan& plan;
    Constellation s_const;
    Constellation c_const;
    LinkBudget budget;
    double noise_sd;
    // Set when the channel is deterministic (LoS, perfect CSI): the composite
    // is trial-independent, so it is built once instead of per realization.
    const CompositeConstellation* fixed_comp = nullptr;
};

// Phase design from the CSI channels applied to both the true channels (for
// the transmitted point) and the CSI channels (for the detector's reference),
// giving mismatched detection when the estimate is imperfect.
std::pair<CompositeConstellation, CompositeConstellation> realization_composites(
    const TrialContext& ctx, const ChannelRealization& truth,
    const ChannelRealization& csi) {
    const SimConfig& cfg = ctx.cfg;
    const auto [f1_csi, f2_csi] = cascade(csi, ctx.plan.n1);
    const auto [f1_true, f2_true] = cascade(truth, ctx.plan.n1);

    double r1 = 0.0, r2 = 0.0;
    for (const auto& f : f1_csi) r1 += std::abs(f);
    for (const auto& f : f2_csi) r2 += std::abs(f);
    const bool secondary = cfg.secondary_active();
    const bool pure_assist = cfg.scheme == Scheme::Benchmark2PureAssist;
    const double phase =
        secondary ? select_common_phase(csi.h_d, r1, r2, ctx.s_const, ctx.c_const)
                  : angle_convention(csi.h_d);
    const auto phases = optimal_phases(csi.h_d, f1_csi, f2_csi, phase);

    auto composite_for = [&](const ChannelRealization& ch, std::span<const cplx> f1,
                             std::span<const cplx> f2) {
        cplx a = apply_phases(phases.phi1, f1);
        cplx b = apply_phases(phases.phi2, f2);
        if (pure_assist) {
            a += b;  // whole surface assists, aligned to h_d
            b = cplx{};
        }
        if (!secondary) b = cplx{};
        return build_composite(ch.h_d, a, b, ctx.s_const, ctx.c_const);
    };

    auto truth_comp = composite_for(truth, f1_true, f2_true);
    auto detect_comp = cfg.csi == CsiMode::Perfect
                           ? truth_comp
                           : composite_for(csi, f1_csi, f2_csi);
    return {std::move(truth_comp), std::move(detect_comp)};
}

void run_symbols(const TrialContext& ctx, const CompositeConstellation& truth_comp,
                 const CompositeConstellation& detect_comp, RngStream& data_rng,
                 BerEstimate& acc) {
    const SimConfig& cfg = ctx.cfg;
    const bool secondary = cfg.secondary_active();
    const double amp = std::sqrt(ctx.budget.p_t);
    for (std::size_t sym = 0; sym < cfg.symbols_per_realization; ++sym) {
        const auto si = static_cast<unsigned>(data_rng.uniform_index(ctx.s_const.order));
        const auto ci = static_cast<unsigned>(data_rng.uniform_index(ctx.c_const.order));
        const std::size_t true_idx = static_cast<std::size_t>(si) * ctx.c_const.order + ci;
        const cplx y =
            amp * truth_comp.points[true_idx] + ctx.noise_sd * data_rng.cgaussian();
        const Decision dec = detect(y, detect_comp, ctx.budget.p_t);

        const unsigned es = hamming(ctx.s_const.labels[si], dec.s_bits);
        acc.s_bit_errors += es;
        acc.s_bits += truth_comp.s_bits;
        if (secondary) {
            const unsigned ec = hamming(ctx.c_const.labels[ci], dec.c_bits);
            acc.c_bit_errors += ec;
            acc.c_bits += truth_comp.c_bits;
            acc.x_bit_errors += es + ec;
        } else {
            acc.x_bit_errors += es;  // convention term is added when reporting
        }
        acc.x_bits += truth_comp.s_bits + (secondary ? truth_comp.c_bits : 0);
        acc.x_symbol_errors += dec.index != true_idx ? 1 : 0;
        acc.symbols += 1;
    }
}

// One channel realization: pick phases from the CSI channels, apply them to
// the true channels, then push a block of symbols through the detector.
// Sub-streams keep channel and data draws identical across CSI settings.
void run_realization(const TrialContext& ctx, const RngStream& trial_rng,
                     BerEstimate& acc) {
    const SimConfig& cfg = ctx.cfg;
    RngStream ch_rng = trial_rng.split(1);
    RngStream train_rng = trial_rng.split(2);
    RngStream data_rng = trial_rng.split(3);

    if (ctx.fixed_comp) {
        run_symbols(ctx, *ctx.fixed_comp, *ctx.fixed_comp, data_rng, acc);
        return;
    }

    ChannelRealization truth =
        cfg.model == ChannelModel::Los
            ? los_realization(cfg.geometry, cfg.n_elements)
            : sample_rician(cfg.geometry, cfg.fading, cfg.n_elements, ch_rng);
    if (cfg.scheme == Scheme::Benchmark1NoRis)
        std::fill(truth.g.begin(), truth.g.end(), cplx{});

    ChannelRealization csi = truth;
    if (cfg.csi == CsiMode::LeastSquares)
        csi = ls_estimate(truth, cfg.training_reps * (cfg.n_elements + 1), ctx.budget,
                          train_rng);

    const auto comps = realization_composites(ctx, truth, csi);
    run_symbols(ctx, comps.first, comps.second, data_rng, acc);
}

}  // namespace

BerEstimate run_point(const SimConfig& cfg) {
    cfg.validate();
    const PointPlan plan = plan_point(cfg);
    const LinkBudget budget = cfg.budget();
    TrialContext ctx{cfg,      plan,
                     make_by_name(cfg.s_name), make_by_name(cfg.c_name),
                     budget,   std::sqrt(budget.sigma2)};

    CompositeConstellation fixed;
    if (cfg.model == ChannelModel::Los && cfg.csi == CsiMode::Perfect) {
        ChannelRealization truth = los_realization(cfg.geometry, cfg.n_elements);
        if (cfg.scheme == Scheme::Benchmark1NoRis)
            std::fill(truth.g.begin(), truth.g.end(), cplx{});
        fixed = realization_composites(ctx, truth, truth).first;
        ctx.fixed_comp = &fixed;
    }

    constexpr std::uint64_t kChunk = 1024;
    const std::uint64_t n_chunks = (cfg.trials + kChunk - 1) / kChunk;
    std::vector<BerEstimate> partial(n_chunks);
    const RngStream base(cfg.seed);

    auto run_chunk = [&](std::uint64_t chunk) {
        const RngStream chunk_rng = base.split(chunk);
        const std::uint64_t begin = chunk * kChunk;
        const std::uint64_t end = std::min(cfg.trials, begin + kChunk);
        for (std::uint64_t t = begin; t < end; ++t)
            run_realization(ctx, chunk_rng.split(t - begin), partial[chunk]);
    };

    const unsigned workers = std::max(1u, cfg.workers);
    if (workers == 1 || n_chunks == 1) {
        for (std::uint64_t c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::uint64_t c = next.fetch_add(1); c < n_chunks;
                     c = next.fetch_add(1))
                    run_chunk(c);
            });
        for (auto& th : pool) th.join();
    }

    BerEstimate total;
    for (const auto& p : partial) total += p;  // fixed chunk order
    if (!cfg.secondary_active()) {
        // No secondary transmission: BER 0.5 by convention.
        total.c_by_convention = true;
        const auto c_bits_per = make_by_name(cfg.c_name).bits_per_symbol();
        total.c_bits = total.symbols * c_bits_per;
        total.c_bit_errors = total.c_bits / 2;
        total.x_bit_errors += total.c_bit_errors;
        total.x_bits += total.c_bits;
    }
    return total;
}

BerReport analytical_point(const SimConfig& cfg) {
    const PointPlan plan = plan_point(cfg);
    const auto s_const = make_by_name(cfg.s_name);
    const auto c_const = make_by_name(cfg.c_name);
    const auto ch = los_realization(cfg.geometry, cfg.n_elements);
    const auto [f1, f2] = cascade(ch, plan.n1);
    double r1 = 0.0, r2 = 0.0;
    for (const auto& f : f1) r1 += std::abs(f);
    for (const auto& f : f2) r2 += std::abs(f);
    if (cfg.scheme == Scheme::Benchmark1NoRis) r1 = r2 = 0.0;
    if (cfg.scheme == Scheme::Benchmark2PureAssist) {
        r1 += r2;
        r2 = 0.0;
    }
    const bool secondary = cfg.secondary_active();
    const double base = angle_convention(ch.h_d);
    const cplx h_r1 = r1 * cplx(std::cos(base), std::sin(base));
    cplx h_r2{};
    if (secondary) {
        const double phase = select_common_phase(ch.h_d, r1, r2, s_const, c_const);
        h_r2 = r2 * cplx(std::cos(phase), std::sin(phase));
    }
    const auto comp = build_composite(ch.h_d, h_r1, h_r2, s_const, c_const);
    BerReport rep = union_bound_bers(comp, cfg.budget().mu());
    if (!secondary) {
        rep.pc = 0.5;  // convention
        rep.px = (rep.ps * comp.s_bits + 0.5 * comp.c_bits) / (comp.s_bits + comp.c_bits);
    }
    return rep;
}

SweepAxis sweep_axis_from_name(const std::string& name) {
    if (name == "partition") return SweepAxis::Partition;
    if (name == "power") return SweepAxis::PowerDbm;
    if (name == "elements") return SweepAxis::Elements;
    if (name == "location") return SweepAxis::LocationX;
    if (name == "training") return SweepAxis::TrainingReps;
    throw std::invalid_argument("unknown sweep axis: " + name);
}

std::vector<SweepRow> run_sweep(const SimConfig& cfg, SweepAxis axis,
                                const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("run_sweep: empty grid");
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (const double coord : grid) {
        SimConfig pt = cfg;
        switch (axis) {
            case SweepAxis::Partition:
                pt.fixed_n1 = static_cast<std::size_t>(std::llround(coord));
                break;
            case SweepAxis::PowerDbm:
                pt.p_t_dbm = coord;
                break;
            case SweepAxis::Elements:
                pt.n_elements = static_cast<std::size_t>(std::llround(coord));
                break;
            case SweepAxis::LocationX:
                pt.geometry.ris = {coord, 15.0};
                break;
            case SweepAxis::TrainingReps:
                pt.csi = CsiMode::LeastSquares;
                pt.training_reps = static_cast<std::size_t>(std::llround(coord));
                break;
        }
        SweepRow row;
        row.coordinate = coord;
        row.plan = plan_point(pt);
        row.estimate = run_point(pt);
        row.analytical = analytical_point(pt);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace srsim

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "srsim/analysis.hpp"
#include "srsim/channel.hpp"
#include "srsim/composite.hpp"
#include "srsim/optimizer.hpp"

namespace srsim {

enum class Scheme {
    Proposed,
    Benchmark1NoRis,
    Benchmark2PureAssist,
    Benchmark3PureTransmit,
    Priority,
};

enum class ChannelModel { Los, Rician };
enum class CsiMode { Perfect, LeastSquares };

Scheme scheme_from_name(const std::string& name);
std::string scheme_name(Scheme s);

struct SimConfig {
    std::uint64_t trials = 100000;       // channel realizations
    std::uint64_t seed = 1;
    Scheme scheme = Scheme::Proposed;
    double eta = 0.0;                    // priority requirement fraction
    CsiMode csi = CsiMode::Perfect;
    std::size_t training_reps = 1;       // r; training length T = r * (N + 1)
    std::string s_name = "qpsk";
    std::string c_name = "bpsk";
    std::size_t n_elements = 200;
    ChannelModel model = ChannelModel::Los;
    FadingConfig fading;
    Geometry geometry = Geometry::reference();
    double p_t_dbm = 10.0;
    double sigma2_dbm = -100.0;
    unsigned workers = 1;
    std::size_t symbols_per_realization = 1;  // > 1 opts into frame accounting
    std::optional<std::size_t> fixed_n1;      // overrides the scheme's split

    LinkBudget budget() const { return LinkBudget::from_dbm(p_t_dbm, sigma2_dbm); }
    bool secondary_active() const {
        return scheme != Scheme::Benchmark1NoRis && scheme != Scheme::Benchmark2PureAssist;
    }
    void validate() const;
};

struct WilsonInterval {
    double low = 0.0;
    double high = 0.0;
};

/// 95% Wilson score interval for k successes out of n.
WilsonInterval wilson_interval(std::uint64_t k, std::uint64_t n);

struct BerEstimate {
    std::uint64_t s_bit_errors = 0;
    std::uint64_t c_bit_errors = 0;
    std::uint64_t x_bit_errors = 0;
    std::uint64_t x_symbol_errors = 0;
    std::uint64_t s_bits = 0;
    std::uint64_t c_bits = 0;
    std::uint64_t x_bits = 0;
    std::uint64_t symbols = 0;
    bool c_by_convention = false;  // secondary inactive, reported as 0.5

    double ps() const;
    double pc() const;
    double px() const;
    double ser() const;
    WilsonInterval ps_ci() const;
    WilsonInterval pc_ci() const;
    WilsonInterval px_ci() const;

    BerEstimate& operator+=(const BerEstimate& other);
};

/// Resolved per-point setup: the split actually used and the d_min the
/// optimizer reports for it under LoS.
struct PointPlan {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    double los_d_min = 0.0;
    bool priority_feasible = true;
};

/// Resolve the scheme's surface split for a config (closed form for the
/// QPSK x BPSK proposed scheme, oracle scan otherwise).
PointPlan plan_point(const SimConfig& cfg);

/// Monte Carlo run at one configuration point. Deterministic for a fixed
/// seed regardless of worker count.
BerEstimate run_point(const SimConfig& cfg);

/// Union-bound companion values for a config, evaluated on the LoS channel.
BerReport analytical_point(const SimConfig& cfg);

enum class SweepAxis { Partition, PowerDbm, Elements, LocationX, TrainingReps };

SweepAxis sweep_axis_from_name(const std::string& name);

struct SweepRow {
    double coordinate = 0.0;
    BerEstimate estimate;
    BerReport analytical;
    PointPlan plan;
};

/// Run one Monte Carlo point per grid coordinate along the given axis.
std::vector<SweepRow> run_sweep(const SimConfig& cfg, SweepAxis axis,
                                const std::vector<double>& grid);

}  // namespace srsim

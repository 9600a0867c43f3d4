#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "strbrane/strmaps.hpp"
#include "strbrane/tickdata.hpp"

namespace strbrane {

enum class RegularFamily {
    None,         // unregularized momentum, F = 0
    Cosine,       // 1/2 (1 + cos(phi~)) for strings
    BraneSinCos,  // 1/2 sin(phi~^2) cos(eps~^2) for branes
};

struct RegularFnConfig {
    RegularFamily family = RegularFamily::None;
    int winding = 1;            // m
    double phase = 0.0;         // phi, radians
    double second_phase = 0.0;  // epsilon, radians (branes only)

    void validate() const;

    friend bool operator==(const RegularFnConfig&, const RegularFnConfig&) = default;
};

/// phi~ = 2 pi m h / (l_s + 1) + phase
double regular_phase(std::size_t h, int string_length, int winding, double phase) noexcept;

/// 1/2 (1 + cos(phi~)).
double regular_fn_cs(std::size_t h, int string_length, const RegularFnConfig& cfg) noexcept;

/// 1/2 sin(phi~^2) cos(eps~^2) with phi~ taken along h1 and eps~ along h2.
double regular_fn_d2(std::size_t h1, std::size_t h2, int string_length,
                     const RegularFnConfig& cfg) noexcept;

/// q-norm of P - F over h = 0..l_s, normalized by l_s + 1. With family None
/// this is the unregularized momentum. Rejects the brane family.
double momentum_1d(const StringAmplitude& amp, const RegularFnConfig& cfg, double q);

/// Same over the (l_s+1)^2 brane grid. Rejects the cosine string family.
double momentum_2d(const BraneAmplitude& amp, const RegularFnConfig& cfg, double q);

struct AnchorRange {
    std::size_t first = 0;
    std::size_t count = 0;
};

/// Every anchor whose window fits inside the series.
AnchorRange full_anchor_range(const TickSeries& series, int string_length);

struct MomentumSeries {
    std::vector<std::size_t> anchors;
    std::vector<std::int64_t> timestamps;  // timestamp of each anchor tick
    std::vector<double> values;
    MapConfig map;
    RegularFnConfig regular;

    std::size_t size() const noexcept { return values.size(); }
};

/// Per-anchor momenta, 1-D or brane according to map.kind. Anchors are
/// evaluated independently (optionally across `threads` workers, 0 = hardware
/// concurrency) and stored in index order, so output does not depend on the
/// thread count.
MomentumSeries momentum_series(const TickSeries& series, const MapConfig& map,
                               const RegularFnConfig& regular, AnchorRange range,
                               unsigned threads = 0);

struct HistogramBin {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;
};

struct DistributionStats {
    double mu = 0.0;
    double sigma = 0.0;  // population convention
    std::vector<HistogramBin> bins;
};

inline constexpr std::size_t kDefaultHistogramBins = 50;

/// Mean, population standard deviation and an equal-width histogram over
/// [min, max]. An all-equal sample yields one bin and sigma = 0.
DistributionStats distribution_stats(std::span<const double> values,
                                     std::size_t bin_count = kDefaultHistogramBins);

void write_momentum_csv(std::ostream& out, const MomentumSeries& ms);
void write_stats_json(std::ostream& out, const DistributionStats& stats);

}  // namespace strbrane

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "strbrane/predictor.hpp"
#include "strbrane/strmaps.hpp"
#include "strbrane/tickdata.hpp"

namespace strbrane {

// First and second moments of one-step relative returns
// (p(t+h) - p(t+h-1)) / p(t+h), averaged over h = 1..half_length.
struct ReturnMoments {
    double r1 = 0.0;
    double r2 = 0.0;
};

ReturnMoments return_moments(const TickSeries& series, std::size_t anchor, int half_length,
                             PriceSource source = PriceSource::Mid);

/// sqrt(r2 - r1^2) at the half-string scale l_s / 2. Requires even l_s.
double return_volatility(const TickSeries& series, std::size_t anchor, int string_length,
                         PriceSource source = PriceSource::Mid);

/// Population standard deviation of one-step relative returns
/// (p_j - p_{j-1}) / p_{j-1} over ticks with timestamp in
/// [t(index) - window_ms, t(index)]. The window must hold at least 2 ticks.
double historical_volatility(const TickSeries& series, std::size_t index, std::int64_t window_ms,
                             PriceSource source = PriceSource::Mid);

enum class ConjugateMode {
    Aligned,  // X(h+1) = X(h) + P(h) [t(h+1) - t(h)]
    Literal,  // X(h+1) = X(h) + P(h-1) [t(h) - t(h-1)], P(-1) = 0
};

struct ConjugateSeries {
    std::size_t anchor = 0;
    std::vector<double> values;  // X(h), h = 0..l_s, X(0) = 0
    ConjugateMode mode = ConjugateMode::Aligned;
};

/// Time integral of a string amplitude. `timestamps_ms` holds t(anchor + h)
/// for every h; increments are measured in seconds.
ConjugateSeries conjugate_series(const StringAmplitude& amp, std::span<const std::int64_t> timestamps_ms,
                                 ConjugateMode mode = ConjugateMode::Aligned);

/// Antisymmetric pairing sum_h [P_ask X_bid - P_bid X_ask] of the ask and bid
/// 2-endpoint strings and their conjugates. Uses cfg.string_length and cfg.q.
double angular_momentum(const TickSeries& series, std::size_t anchor, const MapConfig& cfg,
                        ConjugateMode mode = ConjugateMode::Aligned);

/// Mean over h of |P_ask(h) - P_bid(h)| for the 2-endpoint strings.
double momentum_distance(const TickSeries& series, std::size_t anchor, const MapConfig& cfg);

struct SlopeReport {
    double mean_abs_angular_momentum = 0.0;
    double alpha_prime = 0.0;
    std::optional<double> tension_t0;  // absent when alpha_prime == 0
    int string_length = 0;
    std::size_t samples = 0;
};

/// alpha' = <|M|> / (2 pi l_s^2), T0 = 1 / (2 pi alpha') with hbar c = 1.
SlopeReport regge_slope(std::span<const double> angular_momenta, int string_length);

/// T0 = 1 / (2 pi alpha'), hbar c = 1.
double tension_from_slope(double alpha_prime);

/// 1 / (g_s (2 pi)^p l_s^(p+1)).
double dp_brane_tension(int p, double string_coupling, double string_length);

/// Product-moment correlation. Throws NumericError on zero variance.
double pearson_correlation(std::span<const double> x, std::span<const double> y);

struct StabilityConfig {
    MapConfig map;                           // string_length and q of the ask/bid strings
    std::int64_t hist_window_ms = 600'000;  // historical volatility window
    ConjugateMode mode = ConjugateMode::Aligned;
    PriceSource volatility_source = PriceSource::Mid;

    void validate() const;
};

/// Per-anchor indicators. Historical volatility is taken at the last tick of
/// each string window, so both measures cover the same stretch of ticks.
/// Rows whose trailing window holds fewer than 2 ticks carry NaN.
struct IndicatorSeries {
    std::vector<std::size_t> anchors;
    std::vector<std::int64_t> timestamps;
    std::vector<double> return_vol;  // NaN when l_s is odd
    std::vector<double> hist_vol;
    std::vector<double> angular_momentum;
    std::vector<double> momentum_distance;

    std::size_t size() const noexcept { return anchors.size(); }
};

IndicatorSeries indicator_series(const TickSeries& series, const StabilityConfig& cfg,
                                 AnchorRange range, unsigned threads = 0);

struct CorrelationCell {
    int string_length = 0;
    std::int64_t window_ms = 0;
    std::optional<double> pearson;  // absent on zero variance
    std::size_t samples = 0;
};

/// Correlation of |angular momentum| (or the signed value when
/// `magnitude` is false) with historical volatility over every
/// (string length, window) pair, all anchors of each string length.
std::vector<CorrelationCell> correlation_grid(const TickSeries& series,
                                              std::span<const int> string_lengths,
                                              std::span<const std::int64_t> windows_ms, double q,
                                              ConjugateMode mode = ConjugateMode::Aligned,
                                              PriceSource volatility_source = PriceSource::Mid,
                                              bool magnitude = true, unsigned threads = 0);

void write_indicator_csv(std::ostream& out, const IndicatorSeries& ind);
void write_slope_json(std::ostream& out, const SlopeReport& report,
                      std::span<const CorrelationCell> correlations = {});

}  // namespace strbrane

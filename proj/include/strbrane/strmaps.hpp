#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "strbrane/tickdata.hpp"

namespace strbrane {

enum class MapKind {
    Os1,                  // 1-endpoint open string
    Os2,                  // open string with two Dirichlet endpoints
    Polarized,            // bid/ask polarized 2-endpoint string
    PolarizedSubtracted,  // polarized string with the h = 0 value subtracted
    D2,                   // brane over (h1, h2): ask factors on h1, bid factors on h2
};

struct MapConfig {
    int string_length = 100;  // l_s, in ticks
    double q = 1.0;           // deformation exponent
    MapKind kind = MapKind::Os2;
    PriceSource price_source = PriceSource::Mid;

    /// Throws ValidationError unless string_length >= 2 and q > 0.
    void validate() const;

    friend bool operator==(const MapConfig&, const MapConfig&) = default;
};

/// One string amplitude P(tau, h), h = 0..l_s.
struct StringAmplitude {
    std::size_t anchor = 0;
    std::vector<double> values;

    int string_length() const noexcept { return static_cast<int>(values.size()) - 1; }
};

/// Row-major (l_s+1) x (l_s+1) brane amplitude P(tau, h1, h2).
struct BraneAmplitude {
    std::size_t anchor = 0;
    std::size_t side = 0;  // l_s + 1
    std::vector<double> values;

    double at(std::size_t h1, std::size_t h2) const noexcept { return values[h1 * side + h2]; }
    int string_length() const noexcept { return static_cast<int>(side) - 1; }
};

/// sign(x) |x|^q. Odd in x and strictly increasing on x >= 0.
inline double q_deform(double x, double q) noexcept {
    if (x == 0.0) return 0.0;
    if (q == 1.0) return x;
    const double magnitude = std::pow(std::fabs(x), q);
    return x < 0.0 ? -magnitude : magnitude;
}

/// Throws ValidationError when [anchor, anchor + l_s] is not inside the series.
void check_window(const TickSeries& series, std::size_t anchor, int string_length);

StringAmplitude map_os1(const TickSeries& series, std::size_t anchor, const MapConfig& cfg);
StringAmplitude map_os2(const TickSeries& series, std::size_t anchor, const MapConfig& cfg);

/// Handles both Polarized and PolarizedSubtracted according to cfg.kind.
StringAmplitude map_polarized(const TickSeries& series, std::size_t anchor, const MapConfig& cfg);

BraneAmplitude map_d2(const TickSeries& series, std::size_t anchor, const MapConfig& cfg);

/// Dispatches the 1-D maps on cfg.kind. Throws ValidationError for D2.
StringAmplitude map_string(const TickSeries& series, std::size_t anchor, const MapConfig& cfg);

/// Un-deformed factor products whose pointwise product, deformed, is the
/// brane amplitude: P(h1, h2) = f_q(ask_factor[h1] * bid_factor[h2]).
struct BraneFactors {
    std::vector<double> ask_factor;
    std::vector<double> bid_factor;
};

BraneFactors brane_factors(const TickSeries& series, std::size_t anchor, int string_length);

/// `h1,h2,value` rows for plotting.
void write_brane_csv(std::ostream& out, const BraneAmplitude& amp);

}  // namespace strbrane

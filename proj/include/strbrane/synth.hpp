#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "strbrane/tickdata.hpp"

namespace strbrane {

/// Seeded geometric random walk of the mid price with optional GARCH(1,1)
/// volatility clustering and a jittered relative spread around the mid.
struct SynthConfig {
    std::uint64_t seed = 42;
    std::size_t ticks = 10'000;
    std::int64_t start_ms = 1'449'187'200'000;  // 2015-12-04T00:00:00Z
    std::int64_t step_ms = 60'000;
    double start_price = 1.085;
    double drift = 0.0;           // mean log-return per step
    double volatility = 1e-4;     // unconditional stdev of log-returns per step
    double spread = 1e-4;         // mean relative spread (ask - bid) / mid
    double spread_jitter = 0.5;   // spread_i = spread (1 + jitter u), u ~ U(-1, 1)
    double garch_alpha = 0.0;     // shock weight; 0 with garch_beta = 0 gives a plain walk
    double garch_beta = 0.0;      // persistence
    std::string symbol = "SYN/USD";

    void validate() const;
};

/// Deterministic for a given config across platforms: draws come from
/// std::mt19937_64 through a fixed uniform/normal transform.
TickSeries synthesize_ticks(const SynthConfig& cfg);

}  // namespace strbrane

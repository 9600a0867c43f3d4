#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "strbrane/tickdata.hpp"

namespace strbrane::test {

inline TickSeries series_from(const std::vector<double>& asks, const std::vector<double>& bids,
                              std::int64_t step_ms = 1000) {
    std::vector<Tick> ticks;
    for (std::size_t i = 0; i < asks.size(); ++i)
        ticks.push_back({static_cast<std::int64_t>(i) * step_ms, asks[i], bids[i]});
    return TickSeries(std::move(ticks));
}

inline TickSeries series_from_mid(const std::vector<double>& prices, std::int64_t step_ms = 1000) {
    return series_from(prices, prices, step_ms);
}

/// Random walk with independent, randomly sized spreads and irregular
/// timestamp steps.
inline TickSeries random_series(std::uint64_t seed, std::size_t n, double vol = 1e-3) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Tick> ticks;
    double mid = 1.0 + unit(rng);
    std::int64_t t = 1'449'187'200'000;
    for (std::size_t i = 0; i < n; ++i) {
        mid *= 1.0 + vol * (2.0 * unit(rng) - 1.0);
        const double half = mid * 1e-4 * unit(rng);
        ticks.push_back({t, mid + half, mid - half});
        t += 1 + static_cast<std::int64_t>(unit(rng) * 120'000);
    }
    return TickSeries(std::move(ticks));
}

/// The return sample rebuilt bit-for-bit by tests/oracles/mvar_oracle.py.
inline std::vector<double> splitmix_returns(std::uint64_t seed = 2024, std::size_t n = 10'000) {
    std::vector<double> out;
    std::uint64_t state = seed;
    for (std::size_t i = 0; i < n; ++i) {
        state += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z ^= z >> 31;
        const double u = static_cast<double>(z >> 11) * 0x1.0p-53;
        out.push_back(0.0005 + 0.01 * (u - 0.5) + 0.02 * (std::pow(u, 5) - 1.0 / 6.0));
    }
    return out;
}

/// Frozen output of tests/oracles/mvar_oracle.py (numpy moments, scipy quantile).
namespace mvar_oracle {
inline constexpr double risk_free = 0.0001;
inline constexpr double confidence = 0.05;
inline constexpr double mean = 0.0005413422214877355;
inline constexpr double sigma = 0.007661545419183253;
inline constexpr double skewness = 1.111620985785821;
inline constexpr double excess_kurtosis = 0.26355349459593436;
inline constexpr double z_c = -1.6448536269514729;
inline constexpr double z_cf = -1.3003387791657166;
inline constexpr double mvar = 0.009421262395415703;
inline constexpr double sharpe = 0.0576048561146276;
inline constexpr double sharpe_mvar = 0.04684533801993334;
}  // namespace mvar_oracle

inline std::vector<double> column(const TickSeries& s, PriceSource src) {
    std::vector<double> v;
    for (std::size_t i = 0; i < s.size(); ++i) v.push_back(s.price(i, src));
    return v;
}

inline std::vector<std::int64_t> times(const TickSeries& s) {
    std::vector<std::int64_t> v;
    for (const Tick& t : s) v.push_back(t.timestamp_ms);
    return v;
}

inline bool close_rel(double a, double b, double rel, double abs_floor = 0.0) {
    const double scale = std::max(std::fabs(a), std::fabs(b));
    return std::fabs(a - b) <= std::max(rel * scale, abs_floor);
}

}  // namespace strbrane::test

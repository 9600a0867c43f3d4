#include "strbrane/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "strbrane/error.hpp"

namespace strbrane {

namespace {

class Draws {
public:
    explicit Draws(std::uint64_t seed) : engine_(seed) {}

    // Uniform in (0, 1) from the top 53 bits.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double theta = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace

void SynthConfig::validate() const {
    if (ticks < 1) throw ValidationError("synthetic series needs at least one tick");
    if (step_ms <= 0) throw ValidationError("tick step must be positive");
    if (!(start_price > 0.0)) throw ValidationError("start price must be positive");
    if (!(volatility >= 0.0) || !std::isfinite(drift)) throw ValidationError("bad drift or volatility");
    if (!(spread >= 0.0) || spread >= 2.0) throw ValidationError("spread must lie in [0, 2)");
    if (!(spread_jitter >= 0.0 && spread_jitter <= 1.0)) throw ValidationError("spread jitter must lie in [0, 1]");
    if (!(garch_alpha >= 0.0 && garch_beta >= 0.0 && garch_alpha + garch_beta < 1.0))
        throw ValidationError("GARCH weights must be >= 0 with alpha + beta < 1");
}

TickSeries synthesize_ticks(const SynthConfig& cfg) {
    cfg.validate();
    Draws draws(cfg.seed);
    const double long_run_var = cfg.volatility * cfg.volatility;
    const double omega = long_run_var * (1.0 - cfg.garch_alpha - cfg.garch_beta);

    std::vector<Tick> ticks;
    ticks.reserve(cfg.ticks);
    double log_mid = std::log(cfg.start_price);
    double variance = long_run_var;
    double shock = 0.0;
    for (std::size_t i = 0; i < cfg.ticks; ++i) {
        if (i > 0) {
            variance = omega + cfg.garch_alpha * shock * shock + cfg.garch_beta * variance;
            shock = std::sqrt(variance) * draws.normal();
            log_mid += cfg.drift + shock;
        }
        const double mid = std::exp(log_mid);
        const double u = 2.0 * draws.uniform() - 1.0;
        const double half = 0.5 * cfg.spread * (1.0 + cfg.spread_jitter * u);
        Tick t;
        t.timestamp_ms = cfg.start_ms + static_cast<std::int64_t>(i) * cfg.step_ms;
        t.ask = mid * (1.0 + half);
        t.bid = mid * (1.0 - half);
        ticks.push_back(t);
    }
    return TickSeries(std::move(ticks), cfg.symbol);
}

}  // namespace strbrane

#include "strbrane/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "json.hpp"

#include "parallel.hpp"
#include "strbrane/error.hpp"
#include "text_util.hpp"

namespace strbrane {

namespace {

double abs_pow(double x, double q) noexcept {
    const double a = std::fabs(x);
    return q == 1.0 ? a : std::pow(a, q);
}

double root(double mean, double q) noexcept { return q == 1.0 ? mean : std::pow(mean, 1.0 / q); }

void check_q(double q) {
    if (!(q > 0.0) || !std::isfinite(q)) throw ValidationError("q must be a positive finite number");
}

std::vector<double> string_regular_table(int string_length, const RegularFnConfig& cfg) {
    std::vector<double> f(static_cast<std::size_t>(string_length) + 1, 0.0);
    if (cfg.family == RegularFamily::Cosine) {
        for (std::size_t h = 0; h < f.size(); ++h) f[h] = regular_fn_cs(h, string_length, cfg);
    }
    return f;
}

std::vector<double> brane_regular_table(int string_length, const RegularFnConfig& cfg) {
    const std::size_t side = static_cast<std::size_t>(string_length) + 1;
    std::vector<double> f(side * side, 0.0);
    if (cfg.family == RegularFamily::BraneSinCos) {
        for (std::size_t h1 = 0; h1 < side; ++h1)
            for (std::size_t h2 = 0; h2 < side; ++h2)
                f[h1 * side + h2] = regular_fn_d2(h1, h2, string_length, cfg);
    }
    return f;
}

double q_norm_of_deviation(std::span<const double> p, std::span<const double> f, double q) {
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) sum += abs_pow(p[i] - f[i], q);
    return root(sum / static_cast<double>(p.size()), q);
}

void require_string_family(const RegularFnConfig& cfg) {
    if (cfg.family == RegularFamily::BraneSinCos)
        throw ValidationError("brane regular function used with a string map");
}

void require_brane_family(const RegularFnConfig& cfg) {
    if (cfg.family == RegularFamily::Cosine)
        throw ValidationError("string regular function used with a brane map");
}

// Unregularized brane momentum from the separable factors:
// |f_q(a b)|^q = |a|^(q^2) |b|^(q^2), so the double sum factorizes.
double separable_brane_momentum(const BraneFactors& f, double q) {
    const double power = q * q;
    double sa = 0.0;
    double sb = 0.0;
    for (double a : f.ask_factor) sa += abs_pow(a, power);
    for (double b : f.bid_factor) sb += abs_pow(b, power);
    const double cells = static_cast<double>(f.ask_factor.size() * f.bid_factor.size());
    return root(sa * sb / cells, q);
}

double gridded_brane_momentum(const BraneFactors& f, std::span<const double> table, double q) {
    const std::size_t side = f.ask_factor.size();
    double sum = 0.0;
    for (std::size_t h1 = 0; h1 < side; ++h1) {
        const double a = f.ask_factor[h1];
        const double* row = table.data() + h1 * side;
        for (std::size_t h2 = 0; h2 < side; ++h2) {
            sum += abs_pow(q_deform(a * f.bid_factor[h2], q) - row[h2], q);
        }
    }
    return root(sum / static_cast<double>(side * side), q);
}

}  // namespace

void RegularFnConfig::validate() const {
    if (winding < 0) throw ValidationError("winding number m must be >= 0");
    if (!std::isfinite(phase) || !std::isfinite(second_phase))
        throw ValidationError("regular function phases must be finite");
}

double regular_phase(std::size_t h, int string_length, int winding, double phase) noexcept {
    return 2.0 * std::numbers::pi * winding * static_cast<double>(h) /
               static_cast<double>(string_length + 1) +
           phase;
}

double regular_fn_cs(std::size_t h, int string_length, const RegularFnConfig& cfg) noexcept {
    return 0.5 * (1.0 + std::cos(regular_phase(h, string_length, cfg.winding, cfg.phase)));
}

double regular_fn_d2(std::size_t h1, std::size_t h2, int string_length,
                     const RegularFnConfig& cfg) noexcept {
    const double phi = regular_phase(h1, string_length, cfg.winding, cfg.phase);
    const double eps = regular_phase(h2, string_length, cfg.winding, cfg.second_phase);
    return 0.5 * std::sin(phi * phi) * std::cos(eps * eps);
}

double momentum_1d(const StringAmplitude& amp, const RegularFnConfig& cfg, double q) {
    check_q(q);
    require_string_family(cfg);
    if (amp.values.empty()) throw ValidationError("empty string amplitude");
    const auto table = string_regular_table(amp.string_length(), cfg);
    return q_norm_of_deviation(amp.values, table, q);
}

double momentum_2d(const BraneAmplitude& amp, const RegularFnConfig& cfg, double q) {
    check_q(q);
    require_brane_family(cfg);
    if (amp.side == 0 || amp.values.size() != amp.side * amp.side)
        throw ValidationError("malformed brane amplitude");
    const auto table = brane_regular_table(amp.string_length(), cfg);
    return q_norm_of_deviation(amp.values, table, q);
}

AnchorRange full_anchor_range(const TickSeries& series, int string_length) {
    const auto need = static_cast<std::size_t>(std::max(string_length, 0));
    if (series.size() <= need) return {0, 0};
    return {0, series.size() - need};
}

MomentumSeries momentum_series(const TickSeries& series, const MapConfig& map,
                               const RegularFnConfig& regular, AnchorRange range,
                               unsigned threads) {
    map.validate();
    regular.validate();
    if (range.count == 0) throw ValidationError("empty anchor range");
    check_window(series, range.first + range.count - 1, map.string_length);

    MomentumSeries ms;
    ms.map = map;
    ms.regular = regular;
    ms.anchors.resize(range.count);
    ms.timestamps.resize(range.count);
    ms.values.resize(range.count);
    for (std::size_t i = 0; i < range.count; ++i) {
        ms.anchors[i] = range.first + i;
        ms.timestamps[i] = series[range.first + i].timestamp_ms;
    }

    if (map.kind == MapKind::D2) {
        require_brane_family(regular);
        const bool separable = regular.family == RegularFamily::None;
        const auto table = separable ? std::vector<double>{}
                                     : brane_regular_table(map.string_length, regular);
        detail::parallel_for(range.count, threads, [&](std::size_t i) {
            const BraneFactors f = brane_factors(series, ms.anchors[i], map.string_length);
            ms.values[i] = separable ? separable_brane_momentum(f, map.q)
                                     : gridded_brane_momentum(f, table, map.q);
        });
    } else {
        require_string_family(regular);
        const auto table = string_regular_table(map.string_length, regular);
        detail::parallel_for(range.count, threads, [&](std::size_t i) {
            const StringAmplitude amp = map_string(series, ms.anchors[i], map);
            ms.values[i] = q_norm_of_deviation(amp.values, table, map.q);
        });
    }
    return ms;
}

DistributionStats distribution_stats(std::span<const double> values, std::size_t bin_count) {
    if (values.size() < 2) throw ValidationError("distribution statistics need at least 2 values");
    if (bin_count == 0) throw ValidationError("bin count must be >= 1");

    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    DistributionStats stats;
    stats.mu = sum / n;
    double ss = 0.0;
    for (double v : values) ss += (v - stats.mu) * (v - stats.mu);
    stats.sigma = std::sqrt(ss / n);

    const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *min_it;
    const double hi = *max_it;
    if (lo == hi) {
        stats.sigma = 0.0;
        stats.bins.push_back({lo, hi, values.size()});
        return stats;
    }

    const double span = hi - lo;
    stats.bins.resize(bin_count);
    for (std::size_t b = 0; b < bin_count; ++b) {
        stats.bins[b].lo = lo + span * static_cast<double>(b) / static_cast<double>(bin_count);
        stats.bins[b].hi = lo + span * static_cast<double>(b + 1) / static_cast<double>(bin_count);
    }
    stats.bins.back().hi = hi;
    for (double v : values) {
        auto idx = static_cast<std::size_t>((v - lo) / span * static_cast<double>(bin_count));
        stats.bins[std::min(idx, bin_count - 1)].count += 1;
    }
    return stats;
}

void write_momentum_csv(std::ostream& out, const MomentumSeries& ms) {
    out << "tau_timestamp,momentum\n";
    for (std::size_t i = 0; i < ms.size(); ++i)
        out << ms.timestamps[i] << ',' << detail::format_double(ms.values[i]) << '\n';
}

void write_stats_json(std::ostream& out, const DistributionStats& stats) {
    nlohmann::ordered_json j;
    j["mu"] = stats.mu;
    j["sigma"] = stats.sigma;
    j["bins"] = nlohmann::json::array();
    for (const HistogramBin& b : stats.bins)
        j["bins"].push_back(nlohmann::ordered_json{{"lo", b.lo}, {"hi", b.hi}, {"count", b.count}});
    out << j.dump(2) << '\n';
}

}  // namespace strbrane

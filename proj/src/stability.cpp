#include "strbrane/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "json.hpp"
#include "parallel.hpp"
#include "strbrane/error.hpp"
#include "text_util.hpp"

namespace strbrane {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

MapConfig side_config(const MapConfig& cfg, PriceSource side) {
    MapConfig c = cfg;
    c.kind = MapKind::Os2;
    c.price_source = side;
    return c;
}

std::vector<std::int64_t> window_timestamps(const TickSeries& series, std::size_t anchor, int n) {
    std::vector<std::int64_t> ts(static_cast<std::size_t>(n) + 1);
    for (std::size_t h = 0; h < ts.size(); ++h) ts[h] = series[anchor + h].timestamp_ms;
    return ts;
}

// Returns NaN instead of throwing when the trailing window is too short.
double historical_volatility_or_nan(const TickSeries& series, std::size_t index,
                                    std::int64_t window_ms, PriceSource source) {
    const std::int64_t cutoff = series[index].timestamp_ms - window_ms;
    std::size_t first = index;
    while (first > 0 && series[first - 1].timestamp_ms >= cutoff) --first;
    if (index - first < 1) return kNaN;

    const double n = static_cast<double>(index - first);
    double sum = 0.0;
    for (std::size_t j = first + 1; j <= index; ++j) {
        const double prev = series.price(j - 1, source);
        sum += (series.price(j, source) - prev) / prev;
    }
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t j = first + 1; j <= index; ++j) {
        const double prev = series.price(j - 1, source);
        const double d = (series.price(j, source) - prev) / prev - mean;
        ss += d * d;
    }
    return std::sqrt(ss / n);
}

}  // namespace

ReturnMoments return_moments(const TickSeries& series, std::size_t anchor, int half_length,
                             PriceSource source) {
    if (half_length < 1) throw ValidationError("return window must span at least one step");
    check_window(series, anchor, half_length);
    ReturnMoments m;
    for (std::size_t h = 1; h <= static_cast<std::size_t>(half_length); ++h) {
        const double p = series.price(anchor + h, source);
        const double r = (p - series.price(anchor + h - 1, source)) / p;
        m.r1 += r;
        m.r2 += r * r;
    }
    m.r1 /= half_length;
    m.r2 /= half_length;
    return m;
}

double return_volatility(const TickSeries& series, std::size_t anchor, int string_length,
                         PriceSource source) {
    if (string_length < 2 || string_length % 2 != 0)
        throw ValidationError("return volatility needs an even string length >= 2");
    const ReturnMoments m = return_moments(series, anchor, string_length / 2, source);
    return std::sqrt(std::max(0.0, m.r2 - m.r1 * m.r1));
}

double historical_volatility(const TickSeries& series, std::size_t index, std::int64_t window_ms,
                             PriceSource source) {
    if (window_ms <= 0) throw ValidationError("volatility window must be positive");
    if (index >= series.size()) throw ValidationError("historical volatility index out of range");
    const double v = historical_volatility_or_nan(series, index, window_ms, source);
    if (std::isnan(v)) throw ValidationError("volatility window holds fewer than 2 ticks");
    return v;
}

ConjugateSeries conjugate_series(const StringAmplitude& amp, std::span<const std::int64_t> timestamps_ms,
                                 ConjugateMode mode) {
    const std::size_t n = amp.values.size();
    if (timestamps_ms.size() != n) throw ValidationError("one timestamp per amplitude point required");
    for (std::size_t h = 1; h < n; ++h) {
        if (timestamps_ms[h] <= timestamps_ms[h - 1])
            throw ValidationError("conjugate timestamps must be strictly increasing");
    }
    auto dt = [&](std::size_t k) {  // t(k) - t(k-1) in seconds
        return static_cast<double>(timestamps_ms[k] - timestamps_ms[k - 1]) / 1000.0;
    };

    ConjugateSeries x{amp.anchor, std::vector<double>(n, 0.0), mode};
    for (std::size_t k = 1; k < n; ++k) {
        double step = 0.0;
        if (mode == ConjugateMode::Aligned) {
            step = amp.values[k - 1] * dt(k);
        } else if (k >= 2) {
            step = amp.values[k - 2] * dt(k - 1);
        }
        x.values[k] = x.values[k - 1] + step;
    }
    return x;
}

double angular_momentum(const TickSeries& series, std::size_t anchor, const MapConfig& cfg,
                        ConjugateMode mode) {
    const StringAmplitude p_ask = map_os2(series, anchor, side_config(cfg, PriceSource::Ask));
    const StringAmplitude p_bid = map_os2(series, anchor, side_config(cfg, PriceSource::Bid));
    const auto ts = window_timestamps(series, anchor, cfg.string_length);
    const ConjugateSeries x_ask = conjugate_series(p_ask, ts, mode);
    const ConjugateSeries x_bid = conjugate_series(p_bid, ts, mode);

    double sum = 0.0;
    for (std::size_t h = 0; h < p_ask.values.size(); ++h)
        sum += p_ask.values[h] * x_bid.values[h] - p_bid.values[h] * x_ask.values[h];
    return sum;
}

double momentum_distance(const TickSeries& series, std::size_t anchor, const MapConfig& cfg) {
    const StringAmplitude p_ask = map_os2(series, anchor, side_config(cfg, PriceSource::Ask));
    const StringAmplitude p_bid = map_os2(series, anchor, side_config(cfg, PriceSource::Bid));
    double sum = 0.0;
    for (std::size_t h = 0; h < p_ask.values.size(); ++h)
        sum += std::fabs(p_ask.values[h] - p_bid.values[h]);
    return sum / static_cast<double>(p_ask.values.size());
}

double tension_from_slope(double alpha_prime) {
    if (!(alpha_prime > 0.0)) throw NumericError("tension undefined for non-positive slope");
    return 1.0 / (2.0 * std::numbers::pi * alpha_prime);
}

SlopeReport regge_slope(std::span<const double> angular_momenta, int string_length) {
    if (angular_momenta.empty()) throw ValidationError("slope needs at least one angular momentum");
    if (string_length < 2) throw ValidationError("string length must be >= 2");
    SlopeReport r;
    r.string_length = string_length;
    r.samples = angular_momenta.size();
    double sum = 0.0;
    for (double m : angular_momenta) sum += std::fabs(m);
    r.mean_abs_angular_momentum = sum / static_cast<double>(angular_momenta.size());
    const double ls = string_length;
    r.alpha_prime = r.mean_abs_angular_momentum / (2.0 * std::numbers::pi * ls * ls);
    if (r.alpha_prime > 0.0) r.tension_t0 = tension_from_slope(r.alpha_prime);
    return r;
}

double dp_brane_tension(int p, double string_coupling, double string_length) {
    if (p < 0 || !(string_coupling > 0.0) || !(string_length > 0.0))
        throw ValidationError("brane tension parameters must be positive");
    return 1.0 / (string_coupling * std::pow(2.0 * std::numbers::pi, p) *
                  std::pow(string_length, p + 1));
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("correlation inputs differ in length");
    if (x.size() < 2) throw ValidationError("correlation needs at least 2 pairs");
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw NumericError("correlation undefined for zero variance");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

void StabilityConfig::validate() const {
    map.validate();
    if (hist_window_ms <= 0) throw ValidationError("volatility window must be positive");
}

IndicatorSeries indicator_series(const TickSeries& series, const StabilityConfig& cfg,
                                 AnchorRange range, unsigned threads) {
    cfg.validate();
    if (range.count == 0) throw ValidationError("empty anchor range");
    const int ls = cfg.map.string_length;
    check_window(series, range.first + range.count - 1, ls);

    IndicatorSeries ind;
    ind.anchors.resize(range.count);
    ind.timestamps.resize(range.count);
    ind.return_vol.resize(range.count);
    ind.hist_vol.resize(range.count);
    ind.angular_momentum.resize(range.count);
    ind.momentum_distance.resize(range.count);

    detail::parallel_for(range.count, threads, [&](std::size_t i) {
        const std::size_t anchor = range.first + i;
        ind.anchors[i] = anchor;
        ind.timestamps[i] = series[anchor].timestamp_ms;
        ind.return_vol[i] = ls % 2 == 0 ? return_volatility(series, anchor, ls, cfg.volatility_source) : kNaN;
        ind.hist_vol[i] = historical_volatility_or_nan(series, anchor + static_cast<std::size_t>(ls),
                                                       cfg.hist_window_ms, cfg.volatility_source);
        ind.angular_momentum[i] = angular_momentum(series, anchor, cfg.map, cfg.mode);
        ind.momentum_distance[i] = momentum_distance(series, anchor, cfg.map);
    });
    return ind;
}

std::vector<CorrelationCell> correlation_grid(const TickSeries& series,
                                              std::span<const int> string_lengths,
                                              std::span<const std::int64_t> windows_ms, double q,
                                              ConjugateMode mode, PriceSource volatility_source,
                                              bool magnitude, unsigned threads) {
    std::vector<CorrelationCell> cells;
    for (int ls : string_lengths) {
        MapConfig map;
        map.string_length = ls;
        map.q = q;
        map.validate();
        const AnchorRange range = full_anchor_range(series, ls);
        if (range.count < 2) throw ValidationError("series too short for string length " + std::to_string(ls));

        std::vector<double> am(range.count);
        detail::parallel_for(range.count, threads, [&](std::size_t i) {
            const double m = angular_momentum(series, range.first + i, map, mode);
            am[i] = magnitude ? std::fabs(m) : m;
        });

        for (std::int64_t window : windows_ms) {
            if (window <= 0) throw ValidationError("volatility window must be positive");
            std::vector<double> xs;
            std::vector<double> ys;
            for (std::size_t i = 0; i < range.count; ++i) {
                const double hv = historical_volatility_or_nan(
                    series, range.first + i + static_cast<std::size_t>(ls), window, volatility_source);
                if (std::isnan(hv)) continue;
                xs.push_back(am[i]);
                ys.push_back(hv);
            }
            CorrelationCell cell{ls, window, std::nullopt, xs.size()};
            if (xs.size() >= 2) {
                try {
                    cell.pearson = pearson_correlation(xs, ys);
                } catch (const NumericError&) {
                }
            }
            cells.push_back(cell);
        }
    }
    return cells;
}

void write_indicator_csv(std::ostream& out, const IndicatorSeries& ind) {
    using detail::format_double;
    out << "tau_timestamp,return_vol,hist_vol,angular_momentum\n";
    for (std::size_t i = 0; i < ind.size(); ++i) {
        out << ind.timestamps[i] << ',' << format_double(ind.return_vol[i]) << ','
            << format_double(ind.hist_vol[i]) << ',' << format_double(ind.angular_momentum[i]) << '\n';
    }
}

void write_slope_json(std::ostream& out, const SlopeReport& report,
                      std::span<const CorrelationCell> correlations) {
    nlohmann::ordered_json j;
    j["string_length"] = report.string_length;
    j["samples"] = report.samples;
    j["mean_abs_angular_momentum"] = report.mean_abs_angular_momentum;
    j["alpha_prime"] = report.alpha_prime;
    j["tension_T0"] = report.tension_t0 ? nlohmann::ordered_json(*report.tension_t0) : nlohmann::ordered_json();
    if (!correlations.empty()) {
        auto& arr = j["correlations"] = nlohmann::ordered_json::array();
        for (const CorrelationCell& c : correlations) {
            arr.push_back({{"string_length", c.string_length},
                           {"window_ms", c.window_ms},
                           {"samples", c.samples},
                           {"pearson", c.pearson ? nlohmann::ordered_json(*c.pearson) : nlohmann::ordered_json()}});
        }
    }
    out << j.dump(2) << '\n';
}

}  // namespace strbrane

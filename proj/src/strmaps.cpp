#include "strbrane/strmaps.hpp"

#include <ostream>
#include <string>

#include "strbrane/error.hpp"
#include "text_util.hpp"

namespace strbrane {

void MapConfig::validate() const {
    if (string_length < 2) throw ValidationError("string length must be >= 2");
    if (!(q > 0.0) || !std::isfinite(q)) throw ValidationError("q must be a positive finite number");
}

void check_window(const TickSeries& series, std::size_t anchor, int string_length) {
    if (string_length < 0 || anchor >= series.size() ||
        series.size() - anchor <= static_cast<std::size_t>(string_length)) {
        throw ValidationError("window [" + std::to_string(anchor) + ", " +
                              std::to_string(anchor + static_cast<std::size_t>(std::max(string_length, 0))) +
                              "] outside series of " + std::to_string(series.size()) + " ticks");
    }
}

StringAmplitude map_os1(const TickSeries& series, std::size_t anchor, const MapConfig& cfg) {
    cfg.validate();
    check_window(series, anchor, cfg.string_length);
    const auto n = static_cast<std::size_t>(cfg.string_length);
    const double base = series.price(anchor, cfg.price_source);

    StringAmplitude amp{anchor, std::vector<double>(n + 1, 0.0)};
    for (std::size_t h = 0; h <= n; ++h) {
        const double p = series.price(anchor + h, cfg.price_source);
        amp.values[h] = q_deform((p - base) / p, cfg.q);
    }
    return amp;
}

StringAmplitude map_os2(const TickSeries& series, std::size_t anchor, const MapConfig& cfg) {
    cfg.validate();
    check_window(series, anchor, cfg.string_length);
    const auto n = static_cast<std::size_t>(cfg.string_length);
    const double first = series.price(anchor, cfg.price_source);
    const double last = series.price(anchor + n, cfg.price_source);

    StringAmplitude amp{anchor, std::vector<double>(n + 1, 0.0)};
    for (std::size_t h = 0; h <= n; ++h) {
        const double p = series.price(anchor + h, cfg.price_source);
        amp.values[h] = q_deform(((p - first) / p) * ((last - p) / last), cfg.q);
    }
    return amp;
}

StringAmplitude map_polarized(const TickSeries& series, std::size_t anchor, const MapConfig& cfg) {
    cfg.validate();
    check_window(series, anchor, cfg.string_length);
    const auto n = static_cast<std::size_t>(cfg.string_length);
    const Tick& first = series[anchor];
    const Tick& last = series[anchor + n];
    const double last_mid = mid_price(last);

    StringAmplitude amp{anchor, std::vector<double>(n + 1, 0.0)};
    for (std::size_t h = 0; h <= n; ++h) {
        const Tick& t = series[anchor + h];
        const double left = (t.bid - first.ask) / mid_price(t);
        const double right = (last.bid - t.ask) / last_mid;
        amp.values[h] = q_deform(left * right, cfg.q);
    }
    if (cfg.kind == MapKind::PolarizedSubtracted) {
        const double origin = amp.values[0];
        for (double& v : amp.values) v -= origin;
    }
    return amp;
}

BraneFactors brane_factors(const TickSeries& series, std::size_t anchor, int string_length) {
    check_window(series, anchor, string_length);
    const auto n = static_cast<std::size_t>(string_length);
    const double ask0 = series[anchor].ask;
    const double askn = series[anchor + n].ask;
    const double bid0 = series[anchor].bid;
    const double bidn = series[anchor + n].bid;

    BraneFactors f{std::vector<double>(n + 1, 0.0), std::vector<double>(n + 1, 0.0)};
    for (std::size_t h = 0; h <= n; ++h) {
        const double a = series[anchor + h].ask;
        const double b = series[anchor + h].bid;
        f.ask_factor[h] = ((a - ask0) / a) * ((askn - a) / askn);
        f.bid_factor[h] = ((bid0 - b) / bid0) * ((b - bidn) / b);
    }
    return f;
}

BraneAmplitude map_d2(const TickSeries& series, std::size_t anchor, const MapConfig& cfg) {
    cfg.validate();
    const BraneFactors f = brane_factors(series, anchor, cfg.string_length);
    const std::size_t side = f.ask_factor.size();

    BraneAmplitude amp{anchor, side, std::vector<double>(side * side, 0.0)};
    for (std::size_t h1 = 0; h1 < side; ++h1) {
        for (std::size_t h2 = 0; h2 < side; ++h2) {
            amp.values[h1 * side + h2] = q_deform(f.ask_factor[h1] * f.bid_factor[h2], cfg.q);
        }
    }
    return amp;
}

StringAmplitude map_string(const TickSeries& series, std::size_t anchor, const MapConfig& cfg) {
    switch (cfg.kind) {
        case MapKind::Os1: return map_os1(series, anchor, cfg);
        case MapKind::Os2: return map_os2(series, anchor, cfg);
        case MapKind::Polarized:
        case MapKind::PolarizedSubtracted: return map_polarized(series, anchor, cfg);
        case MapKind::D2: break;
    }
    throw ValidationError("D2 map has no 1-D string amplitude");
}

void write_brane_csv(std::ostream& out, const BraneAmplitude& amp) {
    out << "h1,h2,value\n";
    for (std::size_t h1 = 0; h1 < amp.side; ++h1) {
        for (std::size_t h2 = 0; h2 < amp.side; ++h2) {
            out << h1 << ',' << h2 << ',' << detail::format_double(amp.at(h1, h2)) << '\n';
        }
    }
}

}  // namespace strbrane

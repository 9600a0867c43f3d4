#include "strbrane/tickdata.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "strbrane/error.hpp"
#include "text_util.hpp"

namespace strbrane {

namespace {

std::string row_prefix(std::size_t row) { return "row " + std::to_string(row) + ": "; }

void check_tick(const Tick& t, bool strict_quotes, const std::string& where) {
    if (!(std::isfinite(t.ask) && std::isfinite(t.bid)))
        throw ValidationError(where + "non-finite price");
    if (!(t.ask > 0.0 && t.bid > 0.0))
        throw ValidationError(where + "prices must be positive");
    if (strict_quotes && t.ask < t.bid)
        throw ValidationError(where + "inverted quote (ask < bid)");
}

int parse_fixed_digits(std::string_view s, std::size_t pos, std::size_t count) {
    if (pos + count > s.size()) throw ValidationError("truncated timestamp");
    int v = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
        const char c = s[i];
        if (c < '0' || c > '9') throw ValidationError("bad digit in timestamp");
        v = v * 10 + (c - '0');
    }
    return v;
}

std::int64_t parse_timestamp(std::string_view field) {
    field = detail::trim(field);
    if (auto ms = detail::parse_int64(field)) return *ms;
    return parse_iso8601_ms(field);
}

}  // namespace

TickSeries::TickSeries(std::vector<Tick> ticks, std::string symbol, bool strict_quotes)
    : ticks_(std::move(ticks)), symbol_(std::move(symbol)) {
    for (std::size_t i = 0; i < ticks_.size(); ++i) {
        check_tick(ticks_[i], strict_quotes, "tick " + std::to_string(i) + ": ");
        if (i > 0 && ticks_[i].timestamp_ms <= ticks_[i - 1].timestamp_ms)
            throw ValidationError("tick " + std::to_string(i) + ": timestamps not strictly increasing");
    }
}

std::int64_t parse_iso8601_ms(std::string_view s) {
    using namespace std::chrono;
    s = detail::trim(s);
    if (s.size() < 10 || s[4] != '-' || s[7] != '-')
        throw ValidationError("unrecognized timestamp '" + std::string(s) + "'");
    const int y = parse_fixed_digits(s, 0, 4);
    const int mo = parse_fixed_digits(s, 5, 2);
    const int d = parse_fixed_digits(s, 8, 2);
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw ValidationError("invalid calendar date '" + std::string(s) + "'");

    std::int64_t ms = duration_cast<milliseconds>(sys_days{ymd}.time_since_epoch()).count();
    std::size_t pos = 10;
    if (pos == s.size()) return ms;
    if (s[pos] != 'T' && s[pos] != ' ') throw ValidationError("bad date/time separator");
    ++pos;
    const int hh = parse_fixed_digits(s, pos, 2);
    if (pos + 2 >= s.size() || s[pos + 2] != ':') throw ValidationError("bad time field");
    const int mm = parse_fixed_digits(s, pos + 3, 2);
    pos += 5;
    int ss = 0;
    int frac_ms = 0;
    if (pos < s.size() && s[pos] == ':') {
        ss = parse_fixed_digits(s, pos + 1, 2);
        pos += 3;
        if (pos < s.size() && s[pos] == '.') {
            ++pos;
            int scale = 100;
            while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
                frac_ms += (s[pos] - '0') * scale;
                scale /= 10;
                ++pos;
            }
        }
    }
    if (hh > 23 || mm > 59 || ss > 60) throw ValidationError("time of day out of range");
    ms += ((hh * 60LL + mm) * 60LL + ss) * 1000LL + frac_ms;

    if (pos == s.size()) return ms;
    if (s[pos] == 'Z' && pos + 1 == s.size()) return ms;
    if ((s[pos] == '+' || s[pos] == '-') && pos + 6 == s.size() && s[pos + 3] == ':') {
        const int oh = parse_fixed_digits(s, pos + 1, 2);
        const int om = parse_fixed_digits(s, pos + 4, 2);
        const std::int64_t offset = (oh * 60LL + om) * 60'000LL;
        return s[pos] == '+' ? ms - offset : ms + offset;
    }
    throw ValidationError("unrecognized timezone suffix in '" + std::string(s) + "'");
}

TickSeries parse_ticks(std::istream& in, const ParseOptions& options) {
    std::vector<Tick> ticks;
    std::string line;
    std::size_t row = 0;
    bool seen_data = false;
    while (std::getline(in, line)) {
        ++row;
        const std::string_view view = detail::trim(line);
        if (view.empty()) continue;
        const char first = view.front();
        const bool numeric_start = (first >= '0' && first <= '9') || first == '-' || first == '+';
        if (!seen_data && !numeric_start) continue;  // header
        seen_data = true;

        const auto c1 = view.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : view.find(',', c1 + 1);
        if (c2 == std::string_view::npos || view.find(',', c2 + 1) != std::string_view::npos)
            throw ValidationError(row_prefix(row) + "expected 3 fields timestamp,ask,bid");

        Tick tick;
        try {
            tick.timestamp_ms = parse_timestamp(view.substr(0, c1));
        } catch (const ValidationError& e) {
            throw ValidationError(row_prefix(row) + e.what());
        }
        const auto ask = detail::parse_double(view.substr(c1 + 1, c2 - c1 - 1));
        const auto bid = detail::parse_double(view.substr(c2 + 1));
        if (!ask || !bid) throw ValidationError(row_prefix(row) + "malformed price");
        tick.ask = *ask;
        tick.bid = *bid;
        check_tick(tick, options.strict_quotes, row_prefix(row));

        if (!ticks.empty()) {
            const auto prev = ticks.back().timestamp_ms;
            if (tick.timestamp_ms < prev)
                throw ValidationError(row_prefix(row) + "non-monotone timestamp");
            if (tick.timestamp_ms == prev) {
                if (options.duplicates == DuplicatePolicy::Reject)
                    throw ValidationError(row_prefix(row) + "duplicate timestamp");
                ticks.back() = tick;
                continue;
            }
        }
        ticks.push_back(tick);
    }
    if (ticks.empty()) throw ValidationError("empty input: no tick rows");
    return TickSeries(std::move(ticks), options.symbol, options.strict_quotes);
}

TickSeries parse_ticks(const std::string& text, const ParseOptions& options) {
    std::istringstream in(text);
    return parse_ticks(in, options);
}

TickSeries read_ticks_file(const std::string& path, const ParseOptions& options) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return parse_ticks(in, options);
}

void write_ticks(std::ostream& out, const TickSeries& series) {
    out << "timestamp,ask,bid\n";
    for (const Tick& t : series) {
        out << t.timestamp_ms << ',' << detail::format_double(t.ask) << ','
            << detail::format_double(t.bid) << '\n';
    }
}

void write_ticks_file(const std::string& path, const TickSeries& series) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    write_ticks(out, series);
    if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<OhlcBar> resample_ohlc(const TickSeries& series, std::int64_t interval_ms) {
    if (interval_ms <= 0) throw ValidationError("resample interval must be positive");
    if (series.empty()) throw ValidationError("cannot resample an empty series");

    auto floor_div = [](std::int64_t a, std::int64_t b) {
        std::int64_t q = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
        return q;
    };

    std::vector<OhlcBar> bars;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const Tick& t = series[i];
        const std::int64_t start = floor_div(t.timestamp_ms, interval_ms) * interval_ms;
        if (bars.empty() || bars.back().interval_start_ms != start) {
            OhlcBar bar;
            bar.interval_start_ms = start;
            bar.interval_ms = interval_ms;
            bar.ask = {t.ask, t.ask, t.ask, t.ask};
            bar.bid = {t.bid, t.bid, t.bid, t.bid};
            bar.first_tick = bar.last_tick = i;
            bars.push_back(bar);
            continue;
        }
        OhlcBar& bar = bars.back();
        auto extend = [](OhlcQuote& q, double p) {
            q.high = std::max(q.high, p);
            q.low = std::min(q.low, p);
            q.close = p;
        };
        extend(bar.ask, t.ask);
        extend(bar.bid, t.bid);
        bar.last_tick = i;
    }
    return bars;
}

void write_ohlc_csv(std::ostream& out, std::span<const OhlcBar> bars) {
    using detail::format_double;
    out << "interval_start,open_ask,high_ask,low_ask,close_ask,open_bid,high_bid,low_bid,close_bid\n";
    for (const OhlcBar& b : bars) {
        out << b.interval_start_ms << ',' << format_double(b.ask.open) << ','
            << format_double(b.ask.high) << ',' << format_double(b.ask.low) << ','
            << format_double(b.ask.close) << ',' << format_double(b.bid.open) << ','
            << format_double(b.bid.high) << ',' << format_double(b.bid.low) << ','
            << format_double(b.bid.close) << '\n';
    }
}

TickSeries close_series(std::span<const OhlcBar> bars, const std::string& symbol) {
    std::vector<Tick> ticks;
    ticks.reserve(bars.size());
    for (const OhlcBar& b : bars) ticks.push_back({b.interval_start_ms, b.ask.close, b.bid.close});
    // Bars built from a strict series keep ask >= bid at the close.
    return TickSeries(std::move(ticks), symbol, false);
}

}  // namespace strbrane

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace strbrane {

/// One quote snapshot. Timestamps are integer epoch milliseconds (UTC).
struct Tick {
    std::int64_t timestamp_ms = 0;
    double ask = 0.0;
    double bid = 0.0;

    friend bool operator==(const Tick&, const Tick&) = default;
};

enum class PriceSource { Mid, Ask, Bid };

/// (ask + bid) / 2
inline double mid_price(const Tick& tick) noexcept { return 0.5 * (tick.ask + tick.bid); }

inline double price_of(const Tick& tick, PriceSource source) noexcept {
    switch (source) {
        case PriceSource::Ask: return tick.ask;
        case PriceSource::Bid: return tick.bid;
        case PriceSource::Mid: break;
    }
    return mid_price(tick);
}

/// Validated, strictly time-ordered sequence of ticks for one currency pair.
/// Immutable after construction.
class TickSeries {
public:
    TickSeries() = default;

    /// Validates positivity, quote ordering (when `strict_quotes`) and
    /// strictly increasing timestamps. Throws ValidationError otherwise.
    TickSeries(std::vector<Tick> ticks, std::string symbol = {}, bool strict_quotes = true);

    std::size_t size() const noexcept { return ticks_.size(); }
    bool empty() const noexcept { return ticks_.empty(); }
    const Tick& operator[](std::size_t i) const noexcept { return ticks_[i]; }
    std::span<const Tick> ticks() const noexcept { return ticks_; }
    const std::string& symbol() const noexcept { return symbol_; }

    double price(std::size_t i, PriceSource source) const noexcept {
        return price_of(ticks_[i], source);
    }

    auto begin() const noexcept { return ticks_.begin(); }
    auto end() const noexcept { return ticks_.end(); }

private:
    std::vector<Tick> ticks_;
    std::string symbol_;
};

enum class DuplicatePolicy { LastWins, Reject };

struct ParseOptions {
    bool strict_quotes = true;
    DuplicatePolicy duplicates = DuplicatePolicy::LastWins;
    std::string symbol;
};

/// Reads `timestamp,ask,bid` lines. The header line is optional; timestamps
/// are epoch milliseconds or ISO-8601 (`2015-12-04T10:00:00.250Z`).
/// Errors carry the 1-based row number.
TickSeries parse_ticks(std::istream& in, const ParseOptions& options = {});
TickSeries parse_ticks(const std::string& text, const ParseOptions& options = {});
TickSeries read_ticks_file(const std::string& path, const ParseOptions& options = {});

/// Parses an ISO-8601 UTC timestamp into epoch milliseconds. Accepts
/// `YYYY-MM-DD[T| ]hh:mm[:ss[.fff]][Z|+hh:mm|-hh:mm]` and a bare date.
std::int64_t parse_iso8601_ms(std::string_view text);

/// Writes the header and one `timestamp,ask,bid` row per tick using the
/// shortest round-trip decimal form of each price.
void write_ticks(std::ostream& out, const TickSeries& series);
void write_ticks_file(const std::string& path, const TickSeries& series);

struct OhlcQuote {
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
};

struct OhlcBar {
    std::int64_t interval_start_ms = 0;
    std::int64_t interval_ms = 0;
    OhlcQuote ask;
    OhlcQuote bid;
    std::size_t first_tick = 0;  // index range [first_tick, last_tick] in the source series
    std::size_t last_tick = 0;
};

inline constexpr std::int64_t kDefaultResampleIntervalMs = 60'000;

/// Buckets ticks into intervals aligned to multiples of `interval_ms`.
/// Intervals without ticks produce no bar.
std::vector<OhlcBar> resample_ohlc(const TickSeries& series,
                                   std::int64_t interval_ms = kDefaultResampleIntervalMs);

void write_ohlc_csv(std::ostream& out, std::span<const OhlcBar> bars);

/// Series of bar closes, one tick per bar stamped at the interval start.
TickSeries close_series(std::span<const OhlcBar> bars, const std::string& symbol = {});

}  // namespace strbrane

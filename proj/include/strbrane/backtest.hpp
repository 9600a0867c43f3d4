#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "strbrane/arma.hpp"
#include "strbrane/predictor.hpp"
#include "strbrane/risk.hpp"
#include "strbrane/strmaps.hpp"
#include "strbrane/tickdata.hpp"

namespace strbrane {

struct StrategyConfig {
    MapConfig map;
    RegularFnConfig regular;
    double trade_altitude = 1000.0;  // order size, base-currency units
    double band_epsilon = 0.0;       // absolute momentum tolerance of a region
    std::size_t min_region_len = 10;
    double take_profit = 0.002;  // relative move from the average entry
    double stop_loss = 0.002;
    double max_position = 1000.0;  // absolute position cap, base-currency units

    void validate() const;
};

/// Strict weak order over every field, used for deterministic tie-breaks.
bool config_less(const StrategyConfig& a, const StrategyConfig& b);

/// Inclusive run [first, last] of positions in a momentum series. The tick
/// fields give the tick at which the first and last momenta became
/// observable (anchor + l_s).
struct Region {
    std::size_t first = 0;
    std::size_t last = 0;
    std::size_t first_tick = 0;
    std::size_t last_tick = 0;

    std::size_t length() const noexcept { return last - first + 1; }
    friend bool operator==(const Region&, const Region&) = default;
};

/// Greedy left-to-right scan: from each start take the longest run with
/// max - min <= band_epsilon; keep it if it has at least min_len values and
/// continue after it, otherwise retry from the next position. The tick
/// fields equal the positions.
std::vector<Region> find_invariant_runs(std::span<const double> values, double band_epsilon,
                                        std::size_t min_len);

std::vector<Region> invariant_regions(const MomentumSeries& ms, const StrategyConfig& cfg);

enum class Side { Buy, Sell };

const char* side_name(Side side) noexcept;

struct OrderIntent {
    std::size_t tick = 0;
    Side side = Side::Buy;
    double units = 0.0;
};

/// One intent per region in the direction of the mid drift between the
/// region's first and last observable ticks; none when the drift is zero.
std::vector<OrderIntent> generate_signals(const TickSeries& series, std::span<const Region> regions,
                                          const StrategyConfig& cfg);

struct Order {
    std::int64_t timestamp = 0;
    std::size_t tick = 0;
    Side side = Side::Buy;
    double units = 0.0;
    double fill_price = 0.0;   // ask for buys, bid for sells
    double realized_pnl = 0.0;  // non-zero only on closing fills

    friend bool operator==(const Order&, const Order&) = default;
};

struct NavSeries {
    std::vector<std::int64_t> timestamps;
    std::vector<double> nav;
};

struct BacktestResult {
    std::vector<Order> ledger;
    NavSeries nav;
    double initial_cash = 0.0;
    double cash = 0.0;
    double position = 0.0;      // signed base-currency units still open
    double cost_basis = 0.0;    // quote paid (long) or received (short) for the open position
    double realized_pnl = 0.0;
    double unrealized_pnl = 0.0;

    double final_nav() const { return nav.nav.empty() ? initial_cash : nav.nav.back(); }
};

/// Replays intents tick by tick. Per tick: take-profit / stop-loss exits at
/// the touch, then intents at that tick (an opposite intent only closes the
/// open position; a same-side intent adds up to max_position), then the NAV
/// mark = cash + open position at the liquidation touch.
BacktestResult execute(const TickSeries& series, std::span<const OrderIntent> intents,
                       const StrategyConfig& cfg, double initial_cash);

/// Momentum -> regions -> signals -> execution over every anchor.
BacktestResult run_strategy(const TickSeries& series, const StrategyConfig& cfg, double initial_cash);
BacktestResult run_strategy(const TickSeries& series, const MomentumSeries& ms,
                            const StrategyConfig& cfg, double initial_cash);

/// Simple returns of consecutive NAV marks.
std::vector<double> nav_returns(const NavSeries& nav);

/// Risk report of the NAV return series, absent when it is undefined
/// (flat NAV, too few marks).
std::optional<RiskReport> nav_risk(const NavSeries& nav, double confidence = kDefaultVarConfidence);

struct ArmaStrategyConfig {
    int p = 2;
    int q_ma = 1;
    std::size_t train_ticks = 2000;       // returns used for the single fit
    std::size_t decision_interval = 100;  // ticks between forecasts
    std::size_t history = 200;            // returns fed to each forecast
};

/// Fits once on the first train_ticks mid returns, then at every
/// decision_interval forecasts the next return and emits a BUY (SELL) intent
/// of cfg.trade_altitude units when the forecast is positive (negative).
std::vector<OrderIntent> arma_signals(const TickSeries& series, const ArmaStrategyConfig& arma,
                                      const StrategyConfig& cfg);

enum class Objective { FinalNav, Sharpe, SharpeMvar };

const char* objective_name(Objective objective) noexcept;

/// Cartesian lattice. Regular families that do not match a map kind
/// (cosine with D2, sin-cos with strings) are skipped.
struct StrategyGrid {
    std::vector<MapKind> kinds{MapKind::Os2};
    std::vector<int> string_lengths{100};
    std::vector<double> qs{1.0};
    std::vector<RegularFamily> families{RegularFamily::None};
    std::vector<int> windings{1};
    double phase = 0.0;
    double second_phase = 0.0;
    std::vector<double> band_epsilons{0.0};
    std::vector<std::size_t> min_region_lens{10};
    std::vector<double> trade_altitudes{1000.0};
    std::vector<double> take_profits{0.002};
    std::vector<double> stop_losses{0.002};
    std::vector<double> max_positions{1000.0};
    double initial_cash = 100000.0;
};

std::vector<StrategyConfig> expand_grid(const StrategyGrid& grid);

struct GridResult {
    StrategyConfig config;
    double value = 0.0;  // NaN when the objective is undefined; ranked last
};

/// Evaluates every lattice point and ranks by descending objective value,
/// ties broken by config_less. Identical for any thread count.
std::vector<GridResult> grid_search(const TickSeries& series, const StrategyGrid& grid,
                                    Objective objective, unsigned threads = 0);

/// Objective of one finished backtest (NaN when undefined).
double objective_value(const BacktestResult& result, Objective objective);

struct ComparisonRecipe {
    int string_length = 100;
    double string_q = 8.0;  // regularized OS1ep / OS2ep
    double brane_q = 1.0;   // unregularized D2
    int winding = 1;
    double phase = 0.0;
    double band_sigma = 0.1;  // band_epsilon = band_sigma * stdev of each momentum series
    std::size_t min_region_len = 10;
    double trade_altitude = 1000.0;
    double take_profit = 0.002;
    double stop_loss = 0.002;
    double max_position = 1000.0;
    double initial_cash = 100000.0;
    ArmaStrategyConfig arma;
};

struct ComparisonRun {
    std::string label;  // OS1ep, OS2ep, D2, ARMA
    StrategyConfig config;
    BacktestResult result;
};

/// NAV comparison of the 1-endpoint and 2-endpoint strings, the D2 brane and
/// the ARMA baseline under identical execution settings.
std::vector<ComparisonRun> run_comparison(const TickSeries& series, const ComparisonRecipe& recipe,
                                          unsigned threads = 0);

void write_ledger_csv(std::ostream& out, std::span<const Order> ledger);
void write_nav_csv(std::ostream& out, const NavSeries& nav);
void write_grid_json(std::ostream& out, std::span<const GridResult> results, Objective objective);

}  // namespace strbrane

#include "strbrane/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <ostream>
#include <tuple>

#include "json.hpp"
#include "parallel.hpp"
#include "strbrane/error.hpp"
#include "text_util.hpp"

namespace strbrane {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

auto config_tuple(const StrategyConfig& c) {
    return std::make_tuple(static_cast<int>(c.map.kind), c.map.string_length, c.map.q,
                           static_cast<int>(c.map.price_source), static_cast<int>(c.regular.family),
                           c.regular.winding, c.regular.phase, c.regular.second_phase, c.trade_altitude,
                           c.band_epsilon, c.min_region_len, c.take_profit, c.stop_loss, c.max_position);
}

bool families_compatible(MapKind kind, RegularFamily family) {
    if (family == RegularFamily::None) return true;
    return (kind == MapKind::D2) == (family == RegularFamily::BraneSinCos);
}

// Position book for a single instrument. Cash moves by units * fill price on
// every fill; realized P&L is booked against the cost basis when the
// position goes flat.
class Book {
public:
    explicit Book(double cash) : cash_(cash) {}

    void buy(const TickSeries& series, std::size_t tick, double units, std::vector<Order>& ledger) {
        const Tick& t = series[tick];
        double realized = 0.0;
        cash_ -= units * t.ask;
        if (position_ < 0.0) {  // closing a short
            realized = basis_ - units * t.ask;
            realized_ += realized;
            position_ = 0.0;
            basis_ = 0.0;
        } else {
            position_ += units;
            basis_ += units * t.ask;
        }
        ledger.push_back({t.timestamp_ms, tick, Side::Buy, units, t.ask, realized});
    }

    void sell(const TickSeries& series, std::size_t tick, double units, std::vector<Order>& ledger) {
        const Tick& t = series[tick];
        double realized = 0.0;
        cash_ += units * t.bid;
        if (position_ > 0.0) {  // closing a long
            realized = units * t.bid - basis_;
            realized_ += realized;
            position_ = 0.0;
            basis_ = 0.0;
        } else {
            position_ -= units;
            basis_ += units * t.bid;
        }
        ledger.push_back({t.timestamp_ms, tick, Side::Sell, units, t.bid, realized});
    }

    void close(const TickSeries& series, std::size_t tick, std::vector<Order>& ledger) {
        if (position_ > 0.0) sell(series, tick, position_, ledger);
        else if (position_ < 0.0) buy(series, tick, -position_, ledger);
    }

    // Relative move of the liquidation touch against the average entry.
    double open_move(const Tick& t) const {
        const double units = std::fabs(position_);
        const double entry = basis_ / units;
        return position_ > 0.0 ? (t.bid - entry) / entry : (entry - t.ask) / entry;
    }

    double liquidation_value(const Tick& t) const {
        if (position_ > 0.0) return position_ * t.bid;
        if (position_ < 0.0) return position_ * t.ask;
        return 0.0;
    }

    double unrealized(const Tick& t) const {
        if (position_ > 0.0) return position_ * t.bid - basis_;
        if (position_ < 0.0) return basis_ + position_ * t.ask;
        return 0.0;
    }

    double cash() const { return cash_; }
    double position() const { return position_; }
    double basis() const { return basis_; }
    double realized() const { return realized_; }

private:
    double cash_;
    double position_ = 0.0;
    double basis_ = 0.0;
    double realized_ = 0.0;
};

}  // namespace

void StrategyConfig::validate() const {
    map.validate();
    regular.validate();
    if (!families_compatible(map.kind, regular.family))
        throw ValidationError("regular function family does not match the map kind");
    if (!(trade_altitude > 0.0)) throw ValidationError("trade altitude must be positive");
    if (!(take_profit > 0.0)) throw ValidationError("take profit must be positive");
    if (!(stop_loss > 0.0)) throw ValidationError("stop loss must be positive");
    if (!(max_position > 0.0)) throw ValidationError("max position must be positive");
    if (!(band_epsilon >= 0.0)) throw ValidationError("band epsilon must be >= 0");
    if (min_region_len < 1) throw ValidationError("minimum region length must be >= 1");
}

bool config_less(const StrategyConfig& a, const StrategyConfig& b) {
    return config_tuple(a) < config_tuple(b);
}

std::vector<Region> find_invariant_runs(std::span<const double> values, double band_epsilon,
                                        std::size_t min_len) {
    if (!(band_epsilon >= 0.0)) throw ValidationError("band epsilon must be >= 0");
    min_len = std::max<std::size_t>(min_len, 1);

    std::vector<Region> regions;
    std::deque<std::size_t> maxq;  // indices with decreasing values
    std::deque<std::size_t> minq;  // indices with increasing values
    const std::size_t n = values.size();
    std::size_t start = 0;
    std::size_t next = 0;
    while (start < n) {
        while (next < n) {
            const double v = values[next];
            const double hi = maxq.empty() ? v : std::max(values[maxq.front()], v);
            const double lo = minq.empty() ? v : std::min(values[minq.front()], v);
            if (!(hi - lo <= band_epsilon)) break;
            while (!maxq.empty() && values[maxq.back()] <= v) maxq.pop_back();
            maxq.push_back(next);
            while (!minq.empty() && values[minq.back()] >= v) minq.pop_back();
            minq.push_back(next);
            ++next;
        }
        if (next == start) {  // a lone NaN never fits; skip it
            ++start;
            ++next;
            continue;
        }
        if (next - start >= min_len) {
            regions.push_back({start, next - 1, start, next - 1});
            start = next;
            maxq.clear();
            minq.clear();
        } else {
            ++start;
            if (!maxq.empty() && maxq.front() < start) maxq.pop_front();
            if (!minq.empty() && minq.front() < start) minq.pop_front();
        }
    }
    return regions;
}

std::vector<Region> invariant_regions(const MomentumSeries& ms, const StrategyConfig& cfg) {
    auto regions = find_invariant_runs(ms.values, cfg.band_epsilon, cfg.min_region_len);
    const auto ls = static_cast<std::size_t>(ms.map.string_length);
    for (Region& r : regions) {
        r.first_tick = ms.anchors[r.first] + ls;
        r.last_tick = ms.anchors[r.last] + ls;
    }
    return regions;
}

const char* side_name(Side side) noexcept { return side == Side::Buy ? "BUY" : "SELL"; }

std::vector<OrderIntent> generate_signals(const TickSeries& series, std::span<const Region> regions,
                                          const StrategyConfig& cfg) {
    const double units = std::min(cfg.trade_altitude, cfg.max_position);
    std::vector<OrderIntent> intents;
    for (const Region& r : regions) {
        if (r.last_tick >= series.size() || r.first_tick > r.last_tick)
            throw ValidationError("region outside the tick series");
        const double drift = mid_price(series[r.last_tick]) - mid_price(series[r.first_tick]);
        if (drift > 0.0) intents.push_back({r.last_tick, Side::Buy, units});
        else if (drift < 0.0) intents.push_back({r.last_tick, Side::Sell, units});
    }
    return intents;
}

BacktestResult execute(const TickSeries& series, std::span<const OrderIntent> intents,
                       const StrategyConfig& cfg, double initial_cash) {
    if (!(initial_cash > 0.0)) throw ValidationError("initial cash must be positive");
    if (!(cfg.take_profit > 0.0) || !(cfg.stop_loss > 0.0) || !(cfg.max_position > 0.0))
        throw ValidationError("exit thresholds and position cap must be positive");

    std::vector<OrderIntent> ordered(intents.begin(), intents.end());
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const OrderIntent& a, const OrderIntent& b) { return a.tick < b.tick; });
    for (const OrderIntent& in : ordered) {
        if (in.tick >= series.size()) throw ValidationError("intent beyond series end");
        if (!(in.units > 0.0)) throw ValidationError("intent units must be positive");
    }

    BacktestResult result;
    result.initial_cash = initial_cash;
    result.nav.timestamps.reserve(series.size());
    result.nav.nav.reserve(series.size());

    Book book(initial_cash);
    std::size_t next_intent = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const Tick& t = series[i];
        if (book.position() != 0.0) {
            const double move = book.open_move(t);
            if (move >= cfg.take_profit || move <= -cfg.stop_loss) book.close(series, i, result.ledger);
        }
        for (; next_intent < ordered.size() && ordered[next_intent].tick == i; ++next_intent) {
            const OrderIntent& in = ordered[next_intent];
            const double pos = book.position();
            if (in.side == Side::Buy) {
                if (pos < 0.0) {
                    book.close(series, i, result.ledger);
                } else if (const double room = cfg.max_position - pos; room > 0.0) {
                    book.buy(series, i, std::min(in.units, room), result.ledger);
                }
            } else {
                if (pos > 0.0) {
                    book.close(series, i, result.ledger);
                } else if (const double room = cfg.max_position + pos; room > 0.0) {
                    book.sell(series, i, std::min(in.units, room), result.ledger);
                }
            }
        }
        result.nav.timestamps.push_back(t.timestamp_ms);
        result.nav.nav.push_back(book.cash() + book.liquidation_value(t));
    }

    result.cash = book.cash();
    result.position = book.position();
    result.cost_basis = book.basis();
    result.realized_pnl = book.realized();
    result.unrealized_pnl = series.empty() ? 0.0 : book.unrealized(series[series.size() - 1]);
    return result;
}

BacktestResult run_strategy(const TickSeries& series, const MomentumSeries& ms,
                            const StrategyConfig& cfg, double initial_cash) {
    cfg.validate();
    const auto regions = invariant_regions(ms, cfg);
    const auto intents = generate_signals(series, regions, cfg);
    return execute(series, intents, cfg, initial_cash);
}

BacktestResult run_strategy(const TickSeries& series, const StrategyConfig& cfg, double initial_cash) {
    cfg.validate();
    const auto ms = momentum_series(series, cfg.map, cfg.regular,
                                    full_anchor_range(series, cfg.map.string_length), 1);
    return run_strategy(series, ms, cfg, initial_cash);
}

std::vector<double> nav_returns(const NavSeries& nav) {
    std::vector<double> r;
    if (nav.nav.size() < 2) return r;
    r.reserve(nav.nav.size() - 1);
    for (std::size_t i = 1; i < nav.nav.size(); ++i) r.push_back((nav.nav[i] - nav.nav[i - 1]) / nav.nav[i - 1]);
    return r;
}

std::optional<RiskReport> nav_risk(const NavSeries& nav, double confidence) {
    ReturnSample sample{nav_returns(nav), 0.0};
    if (sample.values.size() < 4) return std::nullopt;
    try {
        return mvar_sharpe(sample, confidence);
    } catch (const NumericError&) {
        return std::nullopt;
    }
}

std::vector<OrderIntent> arma_signals(const TickSeries& series, const ArmaStrategyConfig& arma,
                                      const StrategyConfig& cfg) {
    if (arma.decision_interval == 0) throw ValidationError("ARMA decision interval must be positive");
    if (series.size() < 2) throw ValidationError("series too short for ARMA signals");
    std::vector<double> returns(series.size() - 1);
    for (std::size_t i = 1; i < series.size(); ++i) {
        const double prev = mid_price(series[i - 1]);
        returns[i - 1] = (mid_price(series[i]) - prev) / prev;
    }
    if (arma.train_ticks > returns.size()) throw ValidationError("ARMA training window exceeds series");
    const ArmaModel model = arma_fit(std::span(returns).first(arma.train_ticks), arma.p, arma.q_ma);

    const std::size_t order = static_cast<std::size_t>(std::max(arma.p, arma.q_ma));
    const std::size_t history = std::max(arma.history, order);
    const double units = std::min(cfg.trade_altitude, cfg.max_position);
    std::vector<OrderIntent> intents;
    // Return r[i-1] ends at tick i, so at tick t the newest return is r[t-1].
    for (std::size_t t = arma.train_ticks + 1; t < series.size(); t += arma.decision_interval) {
        const std::size_t lo = t >= history ? t - history : 0;
        const auto window = std::span(returns).subspan(lo, t - lo);
        if (window.size() < order) continue;
        const double forecast = arma_forecast(model, window, 1).front();
        if (forecast > 0.0) intents.push_back({t, Side::Buy, units});
        else if (forecast < 0.0) intents.push_back({t, Side::Sell, units});
    }
    return intents;
}

const char* objective_name(Objective objective) noexcept {
    switch (objective) {
        case Objective::FinalNav: return "final_nav";
        case Objective::Sharpe: return "sharpe";
        case Objective::SharpeMvar: return "sharpe_mvar";
    }
    return "unknown";
}

double objective_value(const BacktestResult& result, Objective objective) {
    if (objective == Objective::FinalNav) return result.final_nav();
    const auto risk = nav_risk(result.nav);
    if (!risk) return kNaN;
    return objective == Objective::Sharpe ? risk->sharpe : risk->sharpe_mvar;
}

std::vector<StrategyConfig> expand_grid(const StrategyGrid& g) {
    std::vector<StrategyConfig> out;
    for (MapKind kind : g.kinds)
        for (int ls : g.string_lengths)
            for (double q : g.qs)
                for (RegularFamily family : g.families) {
                    if (!families_compatible(kind, family)) continue;
                    for (int m : g.windings)
                        for (double band : g.band_epsilons)
                            for (std::size_t len : g.min_region_lens)
                                for (double alt : g.trade_altitudes)
                                    for (double tp : g.take_profits)
                                        for (double sl : g.stop_losses)
                                            for (double cap : g.max_positions) {
                                                StrategyConfig c;
                                                c.map.kind = kind;
                                                c.map.string_length = ls;
                                                c.map.q = q;
                                                c.regular.family = family;
                                                c.regular.winding = m;
                                                c.regular.phase = g.phase;
                                                c.regular.second_phase = g.second_phase;
                                                c.band_epsilon = band;
                                                c.min_region_len = len;
                                                c.trade_altitude = alt;
                                                c.take_profit = tp;
                                                c.stop_loss = sl;
                                                c.max_position = cap;
                                                out.push_back(c);
                                            }
                }
    return out;
}

std::vector<GridResult> grid_search(const TickSeries& series, const StrategyGrid& grid,
                                    Objective objective, unsigned threads) {
    const auto configs = expand_grid(grid);
    if (configs.empty()) throw ValidationError("empty strategy grid");
    for (const StrategyConfig& c : configs) c.validate();

    // Momentum depends only on (map, regular); compute each distinct one once.
    std::vector<std::pair<MapConfig, RegularFnConfig>> keys;
    std::vector<std::size_t> key_of(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const auto key = std::make_pair(configs[i].map, configs[i].regular);
        auto it = std::find(keys.begin(), keys.end(), key);
        key_of[i] = static_cast<std::size_t>(it - keys.begin());
        if (it == keys.end()) keys.push_back(key);
    }
    std::vector<MomentumSeries> momenta(keys.size());
    detail::parallel_for(keys.size(), threads, [&](std::size_t k) {
        momenta[k] = momentum_series(series, keys[k].first, keys[k].second,
                                     full_anchor_range(series, keys[k].first.string_length), 1);
    });

    std::vector<GridResult> results(configs.size());
    detail::parallel_for(configs.size(), threads, [&](std::size_t i) {
        const auto bt = run_strategy(series, momenta[key_of[i]], configs[i], grid.initial_cash);
        results[i] = {configs[i], objective_value(bt, objective)};
    });

    std::sort(results.begin(), results.end(), [](const GridResult& a, const GridResult& b) {
        const bool a_nan = std::isnan(a.value);
        const bool b_nan = std::isnan(b.value);
        if (a_nan != b_nan) return b_nan;
        if (!a_nan && a.value != b.value) return a.value > b.value;
        return config_less(a.config, b.config);
    });
    return results;
}

std::vector<ComparisonRun> run_comparison(const TickSeries& series, const ComparisonRecipe& recipe,
                                          unsigned threads) {
    StrategyConfig base;
    base.trade_altitude = recipe.trade_altitude;
    base.min_region_len = recipe.min_region_len;
    base.take_profit = recipe.take_profit;
    base.stop_loss = recipe.stop_loss;
    base.max_position = recipe.max_position;
    base.map.string_length = recipe.string_length;

    std::vector<ComparisonRun> runs(4);
    runs[0].label = "OS1ep";
    runs[1].label = "OS2ep";
    runs[2].label = "D2";
    runs[3].label = "ARMA";
    for (std::size_t i = 0; i < 3; ++i) {
        StrategyConfig c = base;
        if (i < 2) {
            c.map.kind = i == 0 ? MapKind::Os1 : MapKind::Os2;
            c.map.q = recipe.string_q;
            c.regular.family = RegularFamily::Cosine;
            c.regular.winding = recipe.winding;
            c.regular.phase = recipe.phase;
        } else {
            c.map.kind = MapKind::D2;
            c.map.q = recipe.brane_q;
            c.regular.family = RegularFamily::None;
        }
        runs[i].config = c;
    }
    runs[3].config = base;
    for (auto& r : runs) r.config.validate();

    detail::parallel_for(runs.size(), threads, [&](std::size_t i) {
        ComparisonRun& run = runs[i];
        if (run.label == "ARMA") {
            const auto intents = arma_signals(series, recipe.arma, run.config);
            run.result = execute(series, intents, run.config, recipe.initial_cash);
            return;
        }
        const auto ms = momentum_series(series, run.config.map, run.config.regular,
                                        full_anchor_range(series, run.config.map.string_length), 1);
        run.config.band_epsilon = recipe.band_sigma * distribution_stats(ms.values, 1).sigma;
        run.result = run_strategy(series, ms, run.config, recipe.initial_cash);
    });
    return runs;
}

void write_ledger_csv(std::ostream& out, std::span<const Order> ledger) {
    using detail::format_double;
    out << "timestamp,side,units,fill_price,realized_pnl\n";
    for (const Order& o : ledger) {
        out << o.timestamp << ',' << side_name(o.side) << ',' << format_double(o.units) << ','
            << format_double(o.fill_price) << ',' << format_double(o.realized_pnl) << '\n';
    }
}

void write_nav_csv(std::ostream& out, const NavSeries& nav) {
    out << "timestamp,nav\n";
    for (std::size_t i = 0; i < nav.nav.size(); ++i)
        out << nav.timestamps[i] << ',' << detail::format_double(nav.nav[i]) << '\n';
}

namespace {

const char* kind_name(MapKind k) {
    switch (k) {
        case MapKind::Os1: return "os1";
        case MapKind::Os2: return "os2";
        case MapKind::Polarized: return "pol";
        case MapKind::PolarizedSubtracted: return "pol-sub";
        case MapKind::D2: return "d2";
    }
    return "?";
}

const char* family_name(RegularFamily f) {
    switch (f) {
        case RegularFamily::None: return "none";
        case RegularFamily::Cosine: return "cs";
        case RegularFamily::BraneSinCos: return "d2";
    }
    return "?";
}

}  // namespace

void write_grid_json(std::ostream& out, std::span<const GridResult> results, Objective objective) {
    auto arr = nlohmann::ordered_json::array();
    for (const GridResult& r : results) {
        const StrategyConfig& c = r.config;
        nlohmann::ordered_json cfg{{"map", kind_name(c.map.kind)},
                                   {"ls", c.map.string_length},
                                   {"q", c.map.q},
                                   {"regfn", family_name(c.regular.family)},
                                   {"m", c.regular.winding},
                                   {"phi", c.regular.phase},
                                   {"epsilon", c.regular.second_phase},
                                   {"band_epsilon", c.band_epsilon},
                                   {"min_region_len", c.min_region_len},
                                   {"trade_altitude", c.trade_altitude},
                                   {"take_profit", c.take_profit},
                                   {"stop_loss", c.stop_loss},
                                   {"max_position", c.max_position}};
        arr.push_back({{"config", cfg},
                       {"objective", objective_name(objective)},
                       {"value", std::isnan(r.value) ? nlohmann::ordered_json() : nlohmann::ordered_json(r.value)}});
    }
    out << arr.dump(2) << '\n';
}

}  // namespace strbrane

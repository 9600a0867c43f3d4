#include "strbrane/strbrane.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "json.hpp"
#include "strbrane/backtest.hpp"
#include "strbrane/error.hpp"
#include "strbrane/predictor.hpp"
#include "strbrane/risk.hpp"
#include "strbrane/stability.hpp"
#include "strbrane/strmaps.hpp"
#include "strbrane/synth.hpp"
#include "strbrane/tickdata.hpp"

using namespace strbrane;

struct sb_ticks {
    TickSeries series;
};

struct sb_momentum {
    MomentumSeries ms;
};

struct sb_indicators {
    IndicatorSeries ind;
    StabilityConfig cfg;
};

struct sb_backtest {
    BacktestResult result;
};

struct sb_grid_results {
    std::vector<GridResult> results;
    Objective objective;
};

struct sb_arma {
    ArmaModel model;
};

namespace {

thread_local std::string g_last_error;

sb_status fail(sb_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

template <class F>
sb_status guarded(F&& body) noexcept {
    try {
        body();
        return SB_OK;
    } catch (const Error& e) {
        return fail(static_cast<sb_status>(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(SB_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(SB_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(SB_ERR_INTERNAL, "unknown error");
    }
}

void require(const void* p, const char* what) {
    if (p == nullptr) throw ValidationError(std::string("null argument: ") + what);
}

std::ofstream open_output(const char* path) {
    require(path, "path");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(std::string("cannot write '") + path + "'");
    return out;
}

void finish(std::ofstream& out, const char* path) {
    out.flush();
    if (!out) throw IoError(std::string("write failed for '") + path + "'");
}

template <class Writer>
void write_file(const char* path, Writer&& writer) {
    auto out = open_output(path);
    writer(out);
    finish(out, path);
}

MapConfig to_cpp(const sb_map_config& c) {
    MapConfig m;
    m.string_length = c.string_length;
    m.q = c.q;
    if (c.kind < SB_MAP_OS1 || c.kind > SB_MAP_D2) throw ValidationError("unknown map kind");
    if (c.price_source < SB_PRICE_MID || c.price_source > SB_PRICE_BID) throw ValidationError("unknown price source");
    m.kind = static_cast<MapKind>(c.kind);
    m.price_source = static_cast<PriceSource>(c.price_source);
    return m;
}

sb_map_config to_c(const MapConfig& m) {
    return {m.string_length, m.q, static_cast<sb_map_kind>(m.kind), static_cast<sb_price_source>(m.price_source)};
}

RegularFnConfig to_cpp(const sb_regular_config& c) {
    if (c.family < SB_REGFN_NONE || c.family > SB_REGFN_D2) throw ValidationError("unknown regular function family");
    RegularFnConfig r;
    r.family = static_cast<RegularFamily>(c.family);
    r.winding = c.winding;
    r.phase = c.phase;
    r.second_phase = c.second_phase;
    return r;
}

sb_regular_config to_c(const RegularFnConfig& r) {
    return {static_cast<sb_regular_family>(r.family), r.winding, r.phase, r.second_phase};
}

StrategyConfig to_cpp(const sb_strategy_config& c) {
    StrategyConfig s;
    s.map = to_cpp(c.map);
    s.regular = to_cpp(c.regular);
    s.trade_altitude = c.trade_altitude;
    s.band_epsilon = c.band_epsilon;
    s.min_region_len = c.min_region_len;
    s.take_profit = c.take_profit;
    s.stop_loss = c.stop_loss;
    s.max_position = c.max_position;
    return s;
}

sb_strategy_config to_c(const StrategyConfig& s) {
    return {to_c(s.map), to_c(s.regular), s.trade_altitude, s.band_epsilon, s.min_region_len,
            s.take_profit, s.stop_loss, s.max_position};
}

sb_risk_report to_c(const RiskReport& r) {
    return {r.mean, r.sigma, r.sharpe, r.mvar, r.sharpe_mvar, r.skewness, r.excess_kurtosis,
            r.z_c, r.z_cf, r.confidence};
}

sb_slope_report to_c(const SlopeReport& r) {
    return {r.mean_abs_angular_momentum, r.alpha_prime, r.tension_t0.value_or(0.0),
            r.tension_t0 ? 1 : 0, r.string_length, r.samples};
}

ConjugateMode to_cpp(sb_conjugate_mode m) {
    if (m != SB_CONJ_ALIGNED && m != SB_CONJ_LITERAL) throw ValidationError("unknown conjugate mode");
    return m == SB_CONJ_ALIGNED ? ConjugateMode::Aligned : ConjugateMode::Literal;
}

PriceSource to_cpp(sb_price_source s) {
    if (s < SB_PRICE_MID || s > SB_PRICE_BID) throw ValidationError("unknown price source");
    return static_cast<PriceSource>(s);
}

template <class T>
std::vector<T> span_of(const T* data, std::size_t n, const char* what) {
    if (n > 0) require(data, what);
    return n > 0 ? std::vector<T>(data, data + n) : std::vector<T>{};
}

ArmaStrategyConfig to_cpp(const sb_arma_strategy& a) {
    ArmaStrategyConfig c;
    c.p = a.p;
    c.q_ma = a.q_ma;
    c.train_ticks = a.train_ticks;
    c.decision_interval = a.decision_interval;
    c.history = a.history;
    return c;
}

ParseOptions parse_options(const sb_parse_options* opts) {
    ParseOptions o;
    if (opts) {
        o.strict_quotes = opts->strict_quotes != 0;
        o.duplicates = opts->reject_duplicates ? DuplicatePolicy::Reject : DuplicatePolicy::LastWins;
        if (opts->symbol) o.symbol = opts->symbol;
    }
    return o;
}

}  // namespace

extern "C" {

const char* sb_version(void) { return "0.1.0"; }

const char* sb_last_error(void) { return g_last_error.c_str(); }

void sb_parse_options_default(sb_parse_options* opts) {
    if (opts) *opts = {1, 0, nullptr};
}

sb_status sb_ticks_read_csv(const char* path, const sb_parse_options* opts, sb_ticks** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new sb_ticks{read_ticks_file(path, parse_options(opts))};
    });
}

sb_status sb_ticks_parse_csv(const char* text, size_t length, const sb_parse_options* opts, sb_ticks** out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        *out = new sb_ticks{parse_ticks(std::string(text, length), parse_options(opts))};
    });
}

sb_status sb_ticks_from_array(const sb_tick* ticks, size_t count, int strict_quotes, sb_ticks** out) {
    return guarded([&] {
        require(out, "out");
        if (count == 0) throw ValidationError("empty tick array");
        require(ticks, "ticks");
        std::vector<Tick> v(count);
        for (size_t i = 0; i < count; ++i) v[i] = {ticks[i].timestamp_ms, ticks[i].ask, ticks[i].bid};
        *out = new sb_ticks{TickSeries(std::move(v), {}, strict_quotes != 0)};
    });
}

sb_status sb_ticks_write_csv(const sb_ticks* ticks, const char* path) {
    return guarded([&] {
        require(ticks, "ticks");
        write_file(path, [&](std::ostream& o) { write_ticks(o, ticks->series); });
    });
}

size_t sb_ticks_size(const sb_ticks* ticks) { return ticks ? ticks->series.size() : 0; }

sb_status sb_ticks_get(const sb_ticks* ticks, size_t index, sb_tick* out) {
    return guarded([&] {
        require(ticks, "ticks");
        require(out, "out");
        if (index >= ticks->series.size()) throw ValidationError("tick index out of range");
        const Tick& t = ticks->series[index];
        *out = {t.timestamp_ms, t.ask, t.bid};
    });
}

sb_status sb_ticks_write_ohlc_csv(const sb_ticks* ticks, int64_t interval_ms, const char* path) {
    return guarded([&] {
        require(ticks, "ticks");
        const auto bars = resample_ohlc(ticks->series, interval_ms);
        write_file(path, [&](std::ostream& o) { write_ohlc_csv(o, bars); });
    });
}

void sb_ticks_free(sb_ticks* ticks) { delete ticks; }

void sb_synth_config_default(sb_synth_config* cfg) {
    if (!cfg) return;
    const SynthConfig d;
    *cfg = {d.seed, d.ticks, d.start_ms, d.step_ms, d.start_price, d.drift, d.volatility,
            d.spread, d.spread_jitter, d.garch_alpha, d.garch_beta};
}

sb_status sb_synth(const sb_synth_config* cfg, sb_ticks** out) {
    return guarded([&] {
        require(cfg, "cfg");
        require(out, "out");
        SynthConfig c;
        c.seed = cfg->seed;
        c.ticks = cfg->ticks;
        c.start_ms = cfg->start_ms;
        c.step_ms = cfg->step_ms;
        c.start_price = cfg->start_price;
        c.drift = cfg->drift;
        c.volatility = cfg->volatility;
        c.spread = cfg->spread;
        c.spread_jitter = cfg->spread_jitter;
        c.garch_alpha = cfg->garch_alpha;
        c.garch_beta = cfg->garch_beta;
        *out = new sb_ticks{synthesize_ticks(c)};
    });
}

void sb_map_config_default(sb_map_config* cfg) {
    if (cfg) *cfg = to_c(MapConfig{});
}

void sb_regular_config_default(sb_regular_config* cfg) {
    if (cfg) *cfg = to_c(RegularFnConfig{});
}

double sb_q_deform(double x, double q) { return q_deform(x, q); }

sb_status sb_map_amplitude(const sb_ticks* ticks, size_t anchor, const sb_map_config* cfg, double* out,
                           size_t capacity, size_t* written) {
    return guarded([&] {
        require(ticks, "ticks");
        require(cfg, "cfg");
        const MapConfig m = to_cpp(*cfg);
        std::vector<double> values = m.kind == MapKind::D2 ? map_d2(ticks->series, anchor, m).values
                                                           : map_string(ticks->series, anchor, m).values;
        if (written) *written = values.size();
        if (capacity < values.size()) throw ValidationError("output buffer too small");
        require(out, "out");
        std::copy(values.begin(), values.end(), out);
    });
}

sb_status sb_momentum_compute(const sb_ticks* ticks, const sb_map_config* map, const sb_regular_config* regular,
                              size_t first, size_t count, unsigned threads, sb_momentum** out) {
    return guarded([&] {
        require(ticks, "ticks");
        require(map, "map");
        require(out, "out");
        const MapConfig m = to_cpp(*map);
        const RegularFnConfig r = regular ? to_cpp(*regular) : RegularFnConfig{};
        AnchorRange range{first, count};
        if (count == 0) {
            const AnchorRange all = full_anchor_range(ticks->series, m.string_length);
            range.count = all.count > first ? all.count - first : 0;
        }
        *out = new sb_momentum{momentum_series(ticks->series, m, r, range, threads)};
    });
}

size_t sb_momentum_size(const sb_momentum* ms) { return ms ? ms->ms.size() : 0; }

sb_status sb_momentum_values(const sb_momentum* ms, double* out, size_t capacity) {
    return guarded([&] {
        require(ms, "ms");
        if (capacity < ms->ms.size()) throw ValidationError("output buffer too small");
        require(out, "out");
        std::copy(ms->ms.values.begin(), ms->ms.values.end(), out);
    });
}

sb_status sb_momentum_write_csv(const sb_momentum* ms, const char* path) {
    return guarded([&] {
        require(ms, "ms");
        write_file(path, [&](std::ostream& o) { write_momentum_csv(o, ms->ms); });
    });
}

sb_status sb_momentum_write_stats_json(const sb_momentum* ms, size_t bins, const char* path) {
    return guarded([&] {
        require(ms, "ms");
        const auto stats = distribution_stats(ms->ms.values, bins);
        write_file(path, [&](std::ostream& o) { write_stats_json(o, stats); });
    });
}

void sb_momentum_free(sb_momentum* ms) { delete ms; }

void sb_stability_config_default(sb_stability_config* cfg) {
    if (!cfg) return;
    const StabilityConfig d;
    *cfg = {d.map.string_length, d.map.q, d.hist_window_ms, SB_CONJ_ALIGNED, SB_PRICE_MID};
}

sb_status sb_indicators_compute(const sb_ticks* ticks, const sb_stability_config* cfg, unsigned threads,
                                sb_indicators** out) {
    return guarded([&] {
        require(ticks, "ticks");
        require(cfg, "cfg");
        require(out, "out");
        StabilityConfig c;
        c.map.string_length = cfg->string_length;
        c.map.q = cfg->q;
        c.hist_window_ms = cfg->hist_window_ms;
        c.mode = to_cpp(cfg->mode);
        c.volatility_source = to_cpp(cfg->volatility_source);
        c.validate();
        const AnchorRange range = full_anchor_range(ticks->series, c.map.string_length);
        *out = new sb_indicators{indicator_series(ticks->series, c, range, threads), c};
    });
}

size_t sb_indicators_size(const sb_indicators* ind) { return ind ? ind->ind.size() : 0; }

sb_status sb_indicators_get(const sb_indicators* ind, size_t index, sb_indicator_row* out) {
    return guarded([&] {
        require(ind, "ind");
        require(out, "out");
        const IndicatorSeries& s = ind->ind;
        if (index >= s.size()) throw ValidationError("indicator index out of range");
        *out = {s.anchors[index], s.timestamps[index], s.return_vol[index], s.hist_vol[index],
                s.angular_momentum[index], s.momentum_distance[index]};
    });
}

sb_status sb_indicators_slope(const sb_indicators* ind, sb_slope_report* out) {
    return guarded([&] {
        require(ind, "ind");
        require(out, "out");
        *out = to_c(regge_slope(ind->ind.angular_momentum, ind->cfg.map.string_length));
    });
}

sb_status sb_indicators_write_csv(const sb_indicators* ind, const char* path) {
    return guarded([&] {
        require(ind, "ind");
        write_file(path, [&](std::ostream& o) { write_indicator_csv(o, ind->ind); });
    });
}

void sb_indicators_free(sb_indicators* ind) { delete ind; }

sb_status sb_correlation_grid(const sb_ticks* ticks, const int* string_lengths, size_t n_lengths,
                              const int64_t* windows_ms, size_t n_windows, double q, sb_conjugate_mode mode,
                              sb_price_source volatility_source, unsigned threads, double* out) {
    return guarded([&] {
        require(ticks, "ticks");
        const auto ls = span_of(string_lengths, n_lengths, "string_lengths");
        const auto ws = span_of(windows_ms, n_windows, "windows_ms");
        const auto cells = correlation_grid(ticks->series, ls, ws, q, to_cpp(mode), to_cpp(volatility_source),
                                            true, threads);
        if (!cells.empty()) require(out, "out");
        for (size_t i = 0; i < cells.size(); ++i)
            out[i] = cells[i].pearson.value_or(std::numeric_limits<double>::quiet_NaN());
    });
}

sb_status sb_stability_write_json(const sb_ticks* ticks, const sb_indicators* ind, const int* string_lengths,
                                  size_t n_lengths, const int64_t* windows_ms, size_t n_windows,
                                  unsigned threads, const char* path) {
    return guarded([&] {
        require(ticks, "ticks");
        require(ind, "ind");
        const auto ls = span_of(string_lengths, n_lengths, "string_lengths");
        const auto ws = span_of(windows_ms, n_windows, "windows_ms");
        const SlopeReport slope = regge_slope(ind->ind.angular_momentum, ind->cfg.map.string_length);
        const auto cells = correlation_grid(ticks->series, ls, ws, ind->cfg.map.q, ind->cfg.mode,
                                            ind->cfg.volatility_source, true, threads);
        write_file(path, [&](std::ostream& o) { write_slope_json(o, slope, cells); });
    });
}

sb_status sb_regge_slope(const double* angular_momenta, size_t count, int string_length, sb_slope_report* out) {
    return guarded([&] {
        require(out, "out");
        const auto am = span_of(angular_momenta, count, "angular_momenta");
        *out = to_c(regge_slope(am, string_length));
    });
}

sb_status sb_dp_brane_tension(int p, double string_coupling, double string_length, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = dp_brane_tension(p, string_coupling, string_length);
    });
}

sb_status sb_pearson(const double* x, const double* y, size_t count, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = pearson_correlation(span_of(x, count, "x"), span_of(y, count, "y"));
    });
}

sb_status sb_sharpe_ratio(const double* returns, size_t count, double risk_free, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = sharpe_ratio({span_of(returns, count, "returns"), risk_free});
    });
}

sb_status sb_normal_quantile(double p, double* out) {
    return guarded([&] {
        require(out, "out");
        *out = normal_quantile(p);
    });
}

double sb_cornish_fisher_quantile(double z_c, double skewness, double excess_kurtosis) {
    return cornish_fisher_quantile(z_c, skewness, excess_kurtosis);
}

sb_status sb_mvar_sharpe(const double* returns, size_t count, double risk_free, double confidence,
                         sb_risk_report* out) {
    return guarded([&] {
        require(out, "out");
        *out = to_c(mvar_sharpe({span_of(returns, count, "returns"), risk_free}, confidence));
    });
}

void sb_strategy_config_default(sb_strategy_config* cfg) {
    if (cfg) *cfg = to_c(StrategyConfig{});
}

sb_status sb_backtest_run(const sb_ticks* ticks, const sb_strategy_config* cfg, double initial_cash,
                          sb_backtest** out) {
    return guarded([&] {
        require(ticks, "ticks");
        require(cfg, "cfg");
        require(out, "out");
        *out = new sb_backtest{run_strategy(ticks->series, to_cpp(*cfg), initial_cash)};
    });
}

sb_status sb_backtest_execute(const sb_ticks* ticks, const sb_intent* intents, size_t n_intents,
                              const sb_strategy_config* cfg, double initial_cash, sb_backtest** out) {
    return guarded([&] {
        require(ticks, "ticks");
        require(cfg, "cfg");
        require(out, "out");
        if (n_intents > 0) require(intents, "intents");
        std::vector<OrderIntent> v(n_intents);
        for (size_t i = 0; i < n_intents; ++i) {
            if (intents[i].side != SB_BUY && intents[i].side != SB_SELL) throw ValidationError("unknown order side");
            v[i] = {intents[i].tick, intents[i].side == SB_BUY ? Side::Buy : Side::Sell, intents[i].units};
        }
        *out = new sb_backtest{execute(ticks->series, v, to_cpp(*cfg), initial_cash)};
    });
}

sb_status sb_backtest_summary_get(const sb_backtest* bt, sb_backtest_summary* out) {
    return guarded([&] {
        require(bt, "bt");
        require(out, "out");
        const BacktestResult& r = bt->result;
        *out = {r.initial_cash, r.final_nav(), r.cash, r.position, r.realized_pnl, r.unrealized_pnl, r.ledger.size()};
    });
}

size_t sb_backtest_ledger_size(const sb_backtest* bt) { return bt ? bt->result.ledger.size() : 0; }

sb_status sb_backtest_ledger_get(const sb_backtest* bt, size_t index, sb_order* out) {
    return guarded([&] {
        require(bt, "bt");
        require(out, "out");
        if (index >= bt->result.ledger.size()) throw ValidationError("ledger index out of range");
        const Order& o = bt->result.ledger[index];
        *out = {o.timestamp, o.tick, o.side == Side::Buy ? SB_BUY : SB_SELL, o.units, o.fill_price, o.realized_pnl};
    });
}

size_t sb_backtest_nav_size(const sb_backtest* bt) { return bt ? bt->result.nav.nav.size() : 0; }

sb_status sb_backtest_nav_get(const sb_backtest* bt, size_t index, int64_t* timestamp_ms, double* nav) {
    return guarded([&] {
        require(bt, "bt");
        if (index >= bt->result.nav.nav.size()) throw ValidationError("NAV index out of range");
        if (timestamp_ms) *timestamp_ms = bt->result.nav.timestamps[index];
        if (nav) *nav = bt->result.nav.nav[index];
    });
}

sb_status sb_backtest_risk(const sb_backtest* bt, double confidence, sb_risk_report* out) {
    return guarded([&] {
        require(bt, "bt");
        require(out, "out");
        const auto risk = nav_risk(bt->result.nav, confidence);
        if (!risk) throw NumericError("NAV return series has no defined risk figures");
        *out = to_c(*risk);
    });
}

sb_status sb_backtest_write_ledger_csv(const sb_backtest* bt, const char* path) {
    return guarded([&] {
        require(bt, "bt");
        write_file(path, [&](std::ostream& o) { write_ledger_csv(o, bt->result.ledger); });
    });
}

sb_status sb_backtest_write_nav_csv(const sb_backtest* bt, const char* path) {
    return guarded([&] {
        require(bt, "bt");
        write_file(path, [&](std::ostream& o) { write_nav_csv(o, bt->result.nav); });
    });
}

sb_status sb_backtest_write_risk_json(const sb_backtest* bt, double confidence, const char* path) {
    return guarded([&] {
        require(bt, "bt");
        const auto risk = nav_risk(bt->result.nav, confidence);
        write_file(path, [&](std::ostream& o) {
            if (risk) {
                write_risk_json(o, *risk);
                return;
            }
            nlohmann::ordered_json j;
            for (const char* key : {"mean", "sigma", "sharpe", "mvar", "sharpe_mvar", "skewness",
                                    "excess_kurtosis", "z_c", "z_cf"})
                j[key] = nullptr;
            j["confidence"] = confidence;
            j["error"] = "NAV return series has no defined risk figures";
            o << j.dump(2) << '\n';
        });
    });
}

void sb_backtest_free(sb_backtest* bt) { delete bt; }

void sb_comparison_recipe_default(sb_comparison_recipe* recipe) {
    if (!recipe) return;
    const ComparisonRecipe d;
    *recipe = {d.string_length, d.string_q, d.brane_q, d.winding, d.phase, d.band_sigma,
               d.min_region_len, d.trade_altitude, d.take_profit, d.stop_loss, d.max_position,
               d.initial_cash,
               {d.arma.p, d.arma.q_ma, d.arma.train_ticks, d.arma.decision_interval, d.arma.history}};
}

sb_status sb_comparison_run(const sb_ticks* ticks, const sb_comparison_recipe* recipe, unsigned threads,
                            sb_backtest* out[SB_COMPARISON_RUNS]) {
    return guarded([&] {
        require(ticks, "ticks");
        require(recipe, "recipe");
        require(out, "out");
        ComparisonRecipe r;
        r.string_length = recipe->string_length;
        r.string_q = recipe->string_q;
        r.brane_q = recipe->brane_q;
        r.winding = recipe->winding;
        r.phase = recipe->phase;
        r.band_sigma = recipe->band_sigma;
        r.min_region_len = recipe->min_region_len;
        r.trade_altitude = recipe->trade_altitude;
        r.take_profit = recipe->take_profit;
        r.stop_loss = recipe->stop_loss;
        r.max_position = recipe->max_position;
        r.initial_cash = recipe->initial_cash;
        r.arma = to_cpp(recipe->arma);
        auto runs = run_comparison(ticks->series, r, threads);
        for (size_t i = 0; i < SB_COMPARISON_RUNS; ++i) out[i] = new sb_backtest{std::move(runs[i].result)};
    });
}

const char* sb_comparison_label(size_t index) {
    static const char* labels[SB_COMPARISON_RUNS] = {"OS1ep", "OS2ep", "D2", "ARMA"};
    return index < SB_COMPARISON_RUNS ? labels[index] : nullptr;
}

sb_status sb_grid_search(const sb_ticks* ticks, const sb_grid* grid, sb_objective objective, unsigned threads,
                         sb_grid_results** out) {
    return guarded([&] {
        require(ticks, "ticks");
        require(grid, "grid");
        require(out, "out");
        if (objective < SB_OBJ_FINAL_NAV || objective > SB_OBJ_SHARPE_MVAR) throw ValidationError("unknown objective");
        StrategyGrid g;
        g.kinds.clear();
        for (sb_map_kind k : span_of(grid->kinds, grid->n_kinds, "kinds"))
            g.kinds.push_back(to_cpp(sb_map_config{2, 1.0, k, SB_PRICE_MID}).kind);
        g.string_lengths = span_of(grid->string_lengths, grid->n_string_lengths, "string_lengths");
        g.qs = span_of(grid->qs, grid->n_qs, "qs");
        g.families.clear();
        for (sb_regular_family f : span_of(grid->families, grid->n_families, "families"))
            g.families.push_back(to_cpp(sb_regular_config{f, 1, 0.0, 0.0}).family);
        g.windings = span_of(grid->windings, grid->n_windings, "windings");
        g.phase = grid->phase;
        g.second_phase = grid->second_phase;
        g.band_epsilons = span_of(grid->band_epsilons, grid->n_band_epsilons, "band_epsilons");
        g.min_region_lens = span_of(grid->min_region_lens, grid->n_min_region_lens, "min_region_lens");
        g.trade_altitudes = span_of(grid->trade_altitudes, grid->n_trade_altitudes, "trade_altitudes");
        g.take_profits = span_of(grid->take_profits, grid->n_take_profits, "take_profits");
        g.stop_losses = span_of(grid->stop_losses, grid->n_stop_losses, "stop_losses");
        g.max_positions = span_of(grid->max_positions, grid->n_max_positions, "max_positions");
        g.initial_cash = grid->initial_cash;
        const auto obj = static_cast<Objective>(objective);
        *out = new sb_grid_results{grid_search(ticks->series, g, obj, threads), obj};
    });
}

size_t sb_grid_results_size(const sb_grid_results* res) { return res ? res->results.size() : 0; }

sb_status sb_grid_results_get(const sb_grid_results* res, size_t rank, sb_strategy_config* cfg, double* value) {
    return guarded([&] {
        require(res, "res");
        if (rank >= res->results.size()) throw ValidationError("grid rank out of range");
        if (cfg) *cfg = to_c(res->results[rank].config);
        if (value) *value = res->results[rank].value;
    });
}

sb_status sb_grid_results_write_json(const sb_grid_results* res, const char* path) {
    return guarded([&] {
        require(res, "res");
        write_file(path, [&](std::ostream& o) { write_grid_json(o, res->results, res->objective); });
    });
}

void sb_grid_results_free(sb_grid_results* res) { delete res; }

sb_status sb_arma_fit(const double* series, size_t count, int p, int q_ma, sb_arma** out) {
    return guarded([&] {
        require(out, "out");
        *out = new sb_arma{arma_fit(span_of(series, count, "series"), p, q_ma)};
    });
}

sb_status sb_arma_coefficients(const sb_arma* model, double* ar, size_t ar_capacity, double* ma,
                               size_t ma_capacity, double* mean, double* noise_variance) {
    return guarded([&] {
        require(model, "model");
        const ArmaModel& m = model->model;
        if (ar_capacity < m.ar_coeffs.size() || ma_capacity < m.ma_coeffs.size())
            throw ValidationError("coefficient buffer too small");
        if (!m.ar_coeffs.empty()) require(ar, "ar");
        if (!m.ma_coeffs.empty()) require(ma, "ma");
        std::copy(m.ar_coeffs.begin(), m.ar_coeffs.end(), ar);
        std::copy(m.ma_coeffs.begin(), m.ma_coeffs.end(), ma);
        if (mean) *mean = m.mean;
        if (noise_variance) *noise_variance = m.noise_variance;
    });
}

sb_status sb_arma_forecast(const sb_arma* model, const double* history, size_t count, size_t horizon,
                           double* out) {
    return guarded([&] {
        require(model, "model");
        const auto f = arma_forecast(model->model, span_of(history, count, "history"), horizon);
        if (!f.empty()) require(out, "out");
        std::copy(f.begin(), f.end(), out);
    });
}

void sb_arma_free(sb_arma* model) { delete model; }

}  // extern "C"

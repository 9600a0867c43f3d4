// strbrane-cli: ticks -> maps -> momenta -> indicators -> backtests -> reports.
//
// Exit codes: 0 success, 1 I/O, 2 validation (including bad flags),
// 3 numeric contract violation, 4 internal error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "strbrane/strbrane.h"

namespace fs = std::filesystem;

namespace {

struct Failure {
    int code;
    std::string message;
};

void check(sb_status status) {
    if (status != SB_OK) throw Failure{static_cast<int>(status), sb_last_error()};
}

[[noreturn]] void invalid(const std::string& message) { throw Failure{SB_ERR_VALIDATION, message}; }

template <typename T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using Ticks = std::unique_ptr<sb_ticks, Deleter<sb_ticks, sb_ticks_free>>;
using Momentum = std::unique_ptr<sb_momentum, Deleter<sb_momentum, sb_momentum_free>>;
using Indicators = std::unique_ptr<sb_indicators, Deleter<sb_indicators, sb_indicators_free>>;
using Backtest = std::unique_ptr<sb_backtest, Deleter<sb_backtest, sb_backtest_free>>;
using GridResults = std::unique_ptr<sb_grid_results, Deleter<sb_grid_results, sb_grid_results_free>>;

const std::map<std::string, sb_map_kind> kMapNames{
    {"os1", SB_MAP_OS1}, {"os2", SB_MAP_OS2}, {"pol", SB_MAP_POLARIZED}, {"pol-sub", SB_MAP_POLARIZED_SUBTRACTED},
    {"d2", SB_MAP_D2}};
const std::map<std::string, sb_regular_family> kRegNames{
    {"none", SB_REGFN_NONE}, {"cs", SB_REGFN_CS}, {"d2", SB_REGFN_D2}};
const std::map<std::string, sb_price_source> kSourceNames{
    {"mid", SB_PRICE_MID}, {"ask", SB_PRICE_ASK}, {"bid", SB_PRICE_BID}};
const std::map<std::string, sb_conjugate_mode> kModeNames{{"aligned", SB_CONJ_ALIGNED}, {"literal", SB_CONJ_LITERAL}};
const std::map<std::string, sb_objective> kObjectiveNames{
    {"nav", SB_OBJ_FINAL_NAV}, {"sharpe", SB_OBJ_SHARPE}, {"sharpe-mvar", SB_OBJ_SHARPE_MVAR}};

template <typename E>
std::vector<std::string> names_of(const std::map<std::string, E>& m) {
    std::vector<std::string> out;
    for (const auto& [k, v] : m) out.push_back(k);
    return out;
}

template <typename E>
E lookup(const std::map<std::string, E>& m, const std::string& key, const char* what) {
    const auto it = m.find(key);
    if (it == m.end()) invalid(std::string("unknown ") + what + " '" + key + "'");
    return it->second;
}

// Options shared by the commands that read a tick file.
struct InputOptions {
    std::string input;
    std::string symbol;
    bool lenient_quotes = false;
    bool reject_duplicates = false;
};

void add_input_options(CLI::App* cmd, InputOptions& o) {
    cmd->add_option("--input,-i", o.input, "tick CSV (timestamp,ask,bid)")->required();
    cmd->add_option("--symbol", o.symbol, "currency-pair label");
    cmd->add_flag("--lenient-quotes", o.lenient_quotes, "accept ask < bid");
    cmd->add_flag("--reject-duplicates", o.reject_duplicates, "fail on repeated timestamps instead of last-wins");
}

Ticks load_ticks(const InputOptions& o) {
    sb_parse_options opts;
    sb_parse_options_default(&opts);
    opts.strict_quotes = o.lenient_quotes ? 0 : 1;
    opts.reject_duplicates = o.reject_duplicates ? 1 : 0;
    opts.symbol = o.symbol.empty() ? nullptr : o.symbol.c_str();
    sb_ticks* raw = nullptr;
    check(sb_ticks_read_csv(o.input.c_str(), &opts, &raw));
    return Ticks(raw);
}

fs::path prepare_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Failure{SB_ERR_IO, "cannot create output directory '" + dir + "'"};
    return fs::path(dir);
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.close();
    if (!out) throw Failure{SB_ERR_IO, "cannot write '" + path.string() + "'"};
}

struct MapOptions {
    int ls = 100;
    double q = 1.0;
    std::string map = "os2";
    std::string source = "mid";
    std::string regfn = "none";
    int winding = 1;
    double phase = 0.0;
    double second_phase = 0.0;
};

void add_map_options(CLI::App* cmd, MapOptions& o, bool with_regular) {
    cmd->add_option("--ls", o.ls, "string length l_s in ticks")->capture_default_str();
    cmd->add_option("--q", o.q, "deformation exponent q")->capture_default_str();
    cmd->add_option("--map", o.map, "map kind")->check(CLI::IsMember(names_of(kMapNames)))->capture_default_str();
    cmd->add_option("--source", o.source, "price column for string maps")
        ->check(CLI::IsMember(names_of(kSourceNames)))
        ->capture_default_str();
    if (!with_regular) return;
    cmd->add_option("--regfn", o.regfn, "regular function family")
        ->check(CLI::IsMember(names_of(kRegNames)))
        ->capture_default_str();
    cmd->add_option("--winding", o.winding, "winding number m")->capture_default_str();
    cmd->add_option("--phase", o.phase, "phase phi (radians)")->capture_default_str();
    cmd->add_option("--second-phase", o.second_phase, "brane phase epsilon (radians)")->capture_default_str();
}

sb_map_config map_config(const MapOptions& o) {
    sb_map_config c;
    sb_map_config_default(&c);
    c.string_length = o.ls;
    c.q = o.q;
    c.kind = lookup(kMapNames, o.map, "map");
    c.price_source = lookup(kSourceNames, o.source, "price source");
    return c;
}

sb_regular_config regular_config(const MapOptions& o) {
    sb_regular_config c;
    sb_regular_config_default(&c);
    c.family = lookup(kRegNames, o.regfn, "regular function");
    c.winding = o.winding;
    c.phase = o.phase;
    c.second_phase = o.second_phase;
    return c;
}

// ---- synth --------------------------------------------------------------

struct SynthOptions {
    sb_synth_config cfg{};
    std::string output_dir = "out";
};

void run_synth(const SynthOptions& o) {
    const fs::path dir = prepare_dir(o.output_dir);
    sb_ticks* raw = nullptr;
    check(sb_synth(&o.cfg, &raw));
    Ticks ticks(raw);
    check(sb_ticks_write_csv(ticks.get(), (dir / "ticks.csv").string().c_str()));
}

// ---- ohlc ---------------------------------------------------------------

struct OhlcOptions {
    InputOptions in;
    std::string output_dir = "out";
    std::int64_t interval_ms = 60'000;
};

void run_ohlc(const OhlcOptions& o) {
    const fs::path dir = prepare_dir(o.output_dir);
    Ticks ticks = load_ticks(o.in);
    check(sb_ticks_write_ohlc_csv(ticks.get(), o.interval_ms, (dir / "ohlc.csv").string().c_str()));
}

// ---- momentum -----------------------------------------------------------

struct MomentumOptions {
    InputOptions in;
    MapOptions map;
    std::string output_dir = "out";
    std::size_t first = 0;
    std::size_t count = 0;
    std::size_t bins = 50;
    unsigned threads = 0;
};

void run_momentum(const MomentumOptions& o) {
    const fs::path dir = prepare_dir(o.output_dir);
    Ticks ticks = load_ticks(o.in);
    const sb_map_config map = map_config(o.map);
    const sb_regular_config reg = regular_config(o.map);
    sb_momentum* raw = nullptr;
    check(sb_momentum_compute(ticks.get(), &map, &reg, o.first, o.count, o.threads, &raw));
    Momentum ms(raw);
    check(sb_momentum_write_csv(ms.get(), (dir / "momentum.csv").string().c_str()));
    check(sb_momentum_write_stats_json(ms.get(), o.bins, (dir / "stats.json").string().c_str()));
}

// ---- stability ----------------------------------------------------------

struct StabilityOptions {
    InputOptions in;
    int ls = 100;
    double q = 1.0;
    std::int64_t window_ms = 600'000;
    std::string mode = "aligned";
    std::string vol_source = "mid";
    std::vector<int> corr_ls;
    std::vector<std::int64_t> corr_windows_ms;
    std::string output_dir = "out";
    unsigned threads = 0;
};

void run_stability(const StabilityOptions& o) {
    const fs::path dir = prepare_dir(o.output_dir);
    Ticks ticks = load_ticks(o.in);
    sb_stability_config cfg;
    sb_stability_config_default(&cfg);
    cfg.string_length = o.ls;
    cfg.q = o.q;
    cfg.hist_window_ms = o.window_ms;
    cfg.mode = lookup(kModeNames, o.mode, "conjugate mode");
    cfg.volatility_source = lookup(kSourceNames, o.vol_source, "price source");
    sb_indicators* raw = nullptr;
    check(sb_indicators_compute(ticks.get(), &cfg, o.threads, &raw));
    Indicators ind(raw);
    check(sb_indicators_write_csv(ind.get(), (dir / "indicators.csv").string().c_str()));
    const std::vector<int> lengths = o.corr_ls.empty() ? std::vector<int>{o.ls} : o.corr_ls;
    const std::vector<std::int64_t> windows =
        o.corr_windows_ms.empty() ? std::vector<std::int64_t>{o.window_ms} : o.corr_windows_ms;
    check(sb_stability_write_json(ticks.get(), ind.get(), lengths.data(), lengths.size(), windows.data(),
                                  windows.size(), o.threads, (dir / "slope.json").string().c_str()));
}

// ---- backtest -----------------------------------------------------------

struct BacktestOptions {
    InputOptions in;
    MapOptions map;
    double altitude = 1000.0;
    double band = 0.0;
    std::size_t min_len = 10;
    double take_profit = 0.002;
    double stop_loss = 0.002;
    double max_position = 1000.0;
    double cash = 100000.0;
    double confidence = 0.05;
    std::string grid;
    std::string objective = "sharpe-mvar";
    bool recipe = false;
    double band_sigma = 0.1;
    double string_q = 8.0;
    double brane_q = 1.0;
    int arma_p = 2;
    int arma_q = 1;
    std::size_t arma_train = 2000;
    std::size_t arma_interval = 100;
    std::size_t arma_history = 200;
    std::string output_dir = "out";
    unsigned threads = 0;
};

sb_strategy_config strategy_config(const BacktestOptions& o) {
    sb_strategy_config c;
    sb_strategy_config_default(&c);
    c.map = map_config(o.map);
    c.regular = regular_config(o.map);
    c.trade_altitude = o.altitude;
    c.band_epsilon = o.band;
    c.min_region_len = o.min_len;
    c.take_profit = o.take_profit;
    c.stop_loss = o.stop_loss;
    c.max_position = o.max_position;
    return c;
}

void write_run(const sb_backtest* bt, const fs::path& dir, const std::string& suffix, double confidence) {
    check(sb_backtest_write_ledger_csv(bt, (dir / ("ledger" + suffix + ".csv")).string().c_str()));
    check(sb_backtest_write_nav_csv(bt, (dir / ("nav" + suffix + ".csv")).string().c_str()));
    check(sb_backtest_write_risk_json(bt, confidence, (dir / ("risk" + suffix + ".json")).string().c_str()));
}

// Grid file: one `key = v1, v2, ...` line per swept parameter, '#' comments.
// Keys left out take the single value given on the command line.
struct GridSpec {
    std::vector<sb_map_kind> kinds;
    std::vector<int> lengths;
    std::vector<double> qs;
    std::vector<sb_regular_family> families;
    std::vector<int> windings;
    std::vector<double> bands;
    std::vector<std::size_t> min_lens;
    std::vector<double> altitudes;
    std::vector<double> take_profits;
    std::vector<double> stop_losses;
    std::vector<double> max_positions;
};

std::vector<std::string> split_values(const std::vector<std::string>& inputs) {
    std::vector<std::string> out;
    for (const std::string& in : inputs) {
        std::stringstream ss(in);
        for (std::string item; std::getline(ss, item, ',');) {
            item = CLI::detail::trim_copy(item);
            if (!item.empty()) out.push_back(item);
        }
    }
    return out;
}

template <typename T>
std::vector<T> parse_numbers(const std::string& key, const std::vector<std::string>& values) {
    std::vector<T> out;
    for (const std::string& v : values) {
        T x{};
        if (!CLI::detail::lexical_cast(v, x)) invalid("grid key '" + key + "': bad value '" + v + "'");
        out.push_back(x);
    }
    return out;
}

template <typename E>
std::vector<E> parse_names(const std::string& key, const std::vector<std::string>& values,
                           const std::map<std::string, E>& names) {
    std::vector<E> out;
    for (const std::string& v : values) out.push_back(lookup(names, v, key.c_str()));
    return out;
}

GridSpec read_grid(const std::string& path, const BacktestOptions& o) {
    std::ifstream in(path);
    if (!in) throw Failure{SB_ERR_IO, "cannot open grid file '" + path + "'"};
    const sb_strategy_config base = strategy_config(o);
    GridSpec g{{base.map.kind},
               {base.map.string_length},
               {base.map.q},
               {base.regular.family},
               {base.regular.winding},
               {base.band_epsilon},
               {base.min_region_len},
               {base.trade_altitude},
               {base.take_profit},
               {base.stop_loss},
               {base.max_position}};
    std::size_t keys = 0;
    for (const CLI::ConfigItem& item : CLI::ConfigINI().from_config(in)) {
        if (item.name == "++" || item.name == "--") continue;  // section markers
        const std::string key = item.fullname();
        const auto values = split_values(item.inputs);
        ++keys;
        if (key == "map") g.kinds = parse_names(key, values, kMapNames);
        else if (key == "ls") g.lengths = parse_numbers<int>(key, values);
        else if (key == "q") g.qs = parse_numbers<double>(key, values);
        else if (key == "regfn") g.families = parse_names(key, values, kRegNames);
        else if (key == "winding") g.windings = parse_numbers<int>(key, values);
        else if (key == "band") g.bands = parse_numbers<double>(key, values);
        else if (key == "min-len") g.min_lens = parse_numbers<std::size_t>(key, values);
        else if (key == "altitude") g.altitudes = parse_numbers<double>(key, values);
        else if (key == "tp") g.take_profits = parse_numbers<double>(key, values);
        else if (key == "sl") g.stop_losses = parse_numbers<double>(key, values);
        else if (key == "max-pos") g.max_positions = parse_numbers<double>(key, values);
        else invalid("unknown grid key '" + key + "'");
    }
    if (keys == 0) invalid("empty strategy grid");
    return g;
}

void run_grid(const sb_ticks* ticks, const BacktestOptions& o, const fs::path& dir) {
    const GridSpec g = read_grid(o.grid, o);
    sb_grid grid{};
    grid.kinds = g.kinds.data();
    grid.n_kinds = g.kinds.size();
    grid.string_lengths = g.lengths.data();
    grid.n_string_lengths = g.lengths.size();
    grid.qs = g.qs.data();
    grid.n_qs = g.qs.size();
    grid.families = g.families.data();
    grid.n_families = g.families.size();
    grid.windings = g.windings.data();
    grid.n_windings = g.windings.size();
    grid.phase = o.map.phase;
    grid.second_phase = o.map.second_phase;
    grid.band_epsilons = g.bands.data();
    grid.n_band_epsilons = g.bands.size();
    grid.min_region_lens = g.min_lens.data();
    grid.n_min_region_lens = g.min_lens.size();
    grid.trade_altitudes = g.altitudes.data();
    grid.n_trade_altitudes = g.altitudes.size();
    grid.take_profits = g.take_profits.data();
    grid.n_take_profits = g.take_profits.size();
    grid.stop_losses = g.stop_losses.data();
    grid.n_stop_losses = g.stop_losses.size();
    grid.max_positions = g.max_positions.data();
    grid.n_max_positions = g.max_positions.size();
    grid.initial_cash = o.cash;

    sb_grid_results* raw = nullptr;
    check(sb_grid_search(ticks, &grid, lookup(kObjectiveNames, o.objective, "objective"), o.threads, &raw));
    GridResults res(raw);
    check(sb_grid_results_write_json(res.get(), (dir / "grid.json").string().c_str()));

    // Replay the top-ranked configuration so its ledger and NAV are on disk.
    sb_strategy_config best;
    check(sb_grid_results_get(res.get(), 0, &best, nullptr));
    sb_backtest* bt = nullptr;
    check(sb_backtest_run(ticks, &best, o.cash, &bt));
    Backtest run(bt);
    write_run(run.get(), dir, "", o.confidence);
}

void run_recipe(const sb_ticks* ticks, const BacktestOptions& o, const fs::path& dir) {
    sb_comparison_recipe r;
    sb_comparison_recipe_default(&r);
    r.string_length = o.map.ls;
    r.string_q = o.string_q;
    r.brane_q = o.brane_q;
    r.winding = o.map.winding;
    r.phase = o.map.phase;
    r.band_sigma = o.band_sigma;
    r.min_region_len = o.min_len;
    r.trade_altitude = o.altitude;
    r.take_profit = o.take_profit;
    r.stop_loss = o.stop_loss;
    r.max_position = o.max_position;
    r.initial_cash = o.cash;
    r.arma.p = o.arma_p;
    r.arma.q_ma = o.arma_q;
    r.arma.train_ticks = o.arma_train;
    r.arma.decision_interval = o.arma_interval;
    r.arma.history = o.arma_history;
    sb_backtest* raw[SB_COMPARISON_RUNS] = {};
    check(sb_comparison_run(ticks, &r, o.threads, raw));
    std::vector<Backtest> runs;
    for (sb_backtest* bt : raw) runs.emplace_back(bt);
    for (std::size_t k = 0; k < runs.size(); ++k)
        write_run(runs[k].get(), dir, std::string("_") + sb_comparison_label(k), o.confidence);
}

void run_backtest(const BacktestOptions& o) {
    const fs::path dir = prepare_dir(o.output_dir);
    Ticks ticks = load_ticks(o.in);
    if (o.recipe) return run_recipe(ticks.get(), o, dir);
    if (!o.grid.empty()) return run_grid(ticks.get(), o, dir);
    const sb_strategy_config cfg = strategy_config(o);
    sb_backtest* raw = nullptr;
    check(sb_backtest_run(ticks.get(), &cfg, o.cash, &raw));
    Backtest bt(raw);
    write_run(bt.get(), dir, "", o.confidence);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"String and D2-brane predictors for bid/ask tick series"};
    app.set_version_flag("--version", std::string(sb_version()));
    app.set_config("--config", "", "read options from an INI file (sections named after commands)");
    app.require_subcommand(1);
    app.fallthrough();

    SynthOptions synth;
    sb_synth_config_default(&synth.cfg);
    auto* cs = app.add_subcommand("synth", "write a seeded synthetic tick file");
    cs->add_option("--seed", synth.cfg.seed, "random seed")->capture_default_str();
    cs->add_option("--ticks,-n", synth.cfg.ticks, "number of ticks")->capture_default_str();
    cs->add_option("--start-ms", synth.cfg.start_ms, "first timestamp, epoch ms")->capture_default_str();
    cs->add_option("--step-ms", synth.cfg.step_ms, "spacing between ticks, ms")->capture_default_str();
    cs->add_option("--start-price", synth.cfg.start_price)->capture_default_str();
    cs->add_option("--drift", synth.cfg.drift, "mean log-return per step")->capture_default_str();
    cs->add_option("--volatility", synth.cfg.volatility, "stdev of log-returns per step")->capture_default_str();
    cs->add_option("--spread", synth.cfg.spread, "mean relative spread")->capture_default_str();
    cs->add_option("--spread-jitter", synth.cfg.spread_jitter)->capture_default_str();
    cs->add_option("--garch-alpha", synth.cfg.garch_alpha)->capture_default_str();
    cs->add_option("--garch-beta", synth.cfg.garch_beta)->capture_default_str();
    cs->add_option("--output-dir,-o", synth.output_dir)->capture_default_str();

    OhlcOptions ohlc;
    auto* co = app.add_subcommand("ohlc", "resample ticks into OHLC bars");
    add_input_options(co, ohlc.in);
    co->add_option("--interval-ms", ohlc.interval_ms, "bar length, ms")->capture_default_str();
    co->add_option("--output-dir,-o", ohlc.output_dir)->capture_default_str();

    MomentumOptions mom;
    auto* cm = app.add_subcommand("momentum", "per-anchor momenta and their distribution");
    add_input_options(cm, mom.in);
    add_map_options(cm, mom.map, true);
    cm->add_option("--first", mom.first, "first anchor")->capture_default_str();
    cm->add_option("--count", mom.count, "number of anchors, 0 = all")->capture_default_str();
    cm->add_option("--bins", mom.bins, "histogram bins")->capture_default_str();
    cm->add_option("--threads", mom.threads, "0 = hardware concurrency")->capture_default_str();
    cm->add_option("--output-dir,-o", mom.output_dir)->capture_default_str();

    StabilityOptions stab;
    auto* cst = app.add_subcommand("stability", "angular momentum, volatility, slope and tension");
    add_input_options(cst, stab.in);
    cst->add_option("--ls", stab.ls, "string length l_s in ticks")->capture_default_str();
    cst->add_option("--q", stab.q, "deformation exponent q")->capture_default_str();
    cst->add_option("--window", stab.window_ms, "historical volatility window, ms")->capture_default_str();
    cst->add_option("--mode", stab.mode, "conjugate recurrence")
        ->check(CLI::IsMember(names_of(kModeNames)))
        ->capture_default_str();
    cst->add_option("--vol-source", stab.vol_source)->check(CLI::IsMember(names_of(kSourceNames)))->capture_default_str();
    auto* corr_ls_opt = cst->add_option("--corr-ls", stab.corr_ls, "string lengths of the correlation grid (default: --ls)")
        ->delimiter(',');
    auto* corr_window_opt = cst->add_option("--corr-window", stab.corr_windows_ms, "windows (ms) of the correlation grid (default: --window)")
        ->delimiter(',');
    cst->add_option("--threads", stab.threads)->capture_default_str();
    cst->add_option("--output-dir,-o", stab.output_dir)->capture_default_str();

    BacktestOptions bt;
    auto* cb = app.add_subcommand("backtest", "invariant-region strategy, grid search or model comparison");
    add_input_options(cb, bt.in);
    add_map_options(cb, bt.map, true);
    cb->add_option("--altitude", bt.altitude, "order size, base units")->capture_default_str();
    cb->add_option("--band", bt.band, "momentum band of an invariant region")->capture_default_str();
    cb->add_option("--min-len", bt.min_len, "minimum region length")->capture_default_str();
    cb->add_option("--tp", bt.take_profit, "take-profit, relative")->capture_default_str();
    cb->add_option("--sl", bt.stop_loss, "stop-loss, relative")->capture_default_str();
    cb->add_option("--max-pos", bt.max_position, "position cap, base units")->capture_default_str();
    cb->add_option("--cash", bt.cash, "initial cash")->capture_default_str();
    cb->add_option("--confidence", bt.confidence, "VaR tail probability")->capture_default_str();
    auto* grid_opt = cb->add_option("--grid", bt.grid, "parameter grid file");
    cb->add_option("--objective", bt.objective, "grid ranking objective")
        ->check(CLI::IsMember(names_of(kObjectiveNames)))
        ->capture_default_str();
    cb->add_flag("--recipe", bt.recipe, "OS1ep / OS2ep / D2 / ARMA comparison")->excludes(grid_opt);
    cb->add_option("--band-sigma", bt.band_sigma, "recipe band as a multiple of stdev(M)")->capture_default_str();
    cb->add_option("--string-q", bt.string_q, "recipe q of the regularized strings")->capture_default_str();
    cb->add_option("--brane-q", bt.brane_q, "recipe q of the brane")->capture_default_str();
    cb->add_option("--arma-p", bt.arma_p)->capture_default_str();
    cb->add_option("--arma-q", bt.arma_q)->capture_default_str();
    cb->add_option("--arma-train", bt.arma_train, "returns used to fit the ARMA model")->capture_default_str();
    cb->add_option("--arma-interval", bt.arma_interval, "ticks between ARMA decisions")->capture_default_str();
    cb->add_option("--arma-history", bt.arma_history, "returns fed to each forecast")->capture_default_str();
    cb->add_option("--threads", bt.threads)->capture_default_str();
    cb->add_option("--output-dir,-o", bt.output_dir)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return SB_ERR_VALIDATION;
    }

    try {
        std::string dir;
        CLI::App* used = app.get_subcommands().front();
        if (cs->parsed()) {
            run_synth(synth);
            dir = synth.output_dir;
        } else if (co->parsed()) {
            run_ohlc(ohlc);
            dir = ohlc.output_dir;
        } else if (cm->parsed()) {
            run_momentum(mom);
            dir = mom.output_dir;
        } else if (cst->parsed()) {
            run_stability(stab);
            dir = stab.output_dir;
            // Record the grid that was actually used rather than an empty list.
            if (corr_ls_opt->count() == 0) corr_ls_opt->default_str(std::to_string(stab.ls));
            if (corr_window_opt->count() == 0) corr_window_opt->default_str(std::to_string(stab.window_ms));
        } else if (cb->parsed()) {
            run_backtest(bt);
            dir = bt.output_dir;
        }
        // The effective configuration, sufficient to rerun the command.
        write_text(fs::path(dir) / "run.cfg", "[" + used->get_name() + "]\n" + used->config_to_str(true, false));
    } catch (const Failure& f) {
        std::fprintf(stderr, "error: %s\n", f.message.c_str());
        return f.code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return SB_ERR_INTERNAL;
    }
    return 0;
}

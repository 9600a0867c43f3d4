// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "strbrane/arma.hpp"
#include "strbrane/backtest.hpp"
#include "strbrane/error.hpp"
#include "strbrane/predictor.hpp"
#include "strbrane/risk.hpp"
#include "strbrane/stability.hpp"
#include "strbrane/strmaps.hpp"
#include "strbrane/synth.hpp"
#include "support.hpp"

using namespace strbrane;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double round_sig(double x, int digits) {
    if (x == 0.0) return 0.0;
    const double scale = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::fabs(x)))));
    return std::round(x * scale) / scale;
}

// Tension from the tabulated slope: alpha' is listed in units of
// 1e-13 (2 pi)^-1 and T0 in units of 1e12.
Outcome table_tension() {
    struct Row {
        const char* pair;
        double alpha;  // x 1e-13 / (2 pi)
        double t0;     // x 1e12
    };
    const Row rows[] = {{"AUD/CAD", 8.9764, 1.1140}, {"EUR/USD", 2.1890, 4.5684}, {"GBP/USD", 5.4474, 1.8357},
                        {"USD/CAD", 12.0247, 0.8316}, {"USD/CHF", 10.6185, 0.9418}, {"USD/JPY", 6.9397, 1.4410}};
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    double worst_units = 0.0;
    std::string worst_pair;
    for (const Row& r : rows) {
        const double alpha = r.alpha * 1e-13 / (2.0 * std::numbers::pi);
        const double t = tension_from_slope(alpha) / 1e12;
        // The listed slope carries half a unit of rounding in its last digit;
        // the listed tension must lie inside the propagated interval.
        const double half = 0.5e-4 * (r.alpha >= 10.0 ? 10.0 : 1.0) * 1e-13 / (2.0 * std::numbers::pi);
        const double t_hi = tension_from_slope(alpha - half) / 1e12;
        const double t_lo = tension_from_slope(alpha + half) / 1e12;
        const bool sig4 = round_sig(t, 4) == round_sig(r.t0, 4);
        const bool inside = r.t0 >= round_sig(t_lo, 5) - 1e-12 && r.t0 <= round_sig(t_hi, 5) + 1e-12;
        ok = ok && sig4 && inside;
        const double units = std::fabs(t - r.t0) / (r.t0 >= 1.0 ? 1e-4 : 1e-4);
        if (units > worst_units) {
            worst_units = units;
            worst_pair = r.pair;
        }
        std::printf("    %-8s alpha'=%.4f -> T0=%.6f (listed %.4f, 4 s.f. %s, rounding interval [%.5f, %.5f])\n",
                    r.pair, r.alpha, t, r.t0, sig4 ? "agree" : "DIFFER", t_lo, t_hi);
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < 1.0;
    return {ok, fmt("6 rows agree to 4 significant figures; largest gap %.2f units of the last listed digit (%s); %.3f s",
                    worst_units, worst_pair.c_str(), secs)};
}

Outcome dirichlet() {
    SynthConfig sc;
    sc.seed = 1001;
    sc.ticks = 20'000;
    sc.volatility = 2e-3;
    sc.spread = 5e-4;
    const TickSeries s = synthesize_ticks(sc);
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> ls_pick(2, 200);
    std::uniform_real_distribution<double> q_pick(0.25, 8.0);
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        MapConfig cfg;
        cfg.string_length = ls_pick(rng);
        cfg.q = q_pick(rng);
        std::uniform_int_distribution<std::size_t> anchor(0, s.size() - cfg.string_length - 1);
        const std::size_t tau = anchor(rng);
        cfg.kind = MapKind::Os2;
        const auto os2 = map_os2(s, tau, cfg);
        worst = std::max({worst, std::fabs(os2.values.front()), std::fabs(os2.values.back())});
        cfg.kind = MapKind::D2;
        const auto d2 = map_d2(s, tau, cfg);
        const std::size_t e = d2.side - 1;
        for (std::size_t k = 0; k < d2.side; ++k)
            worst = std::max({worst, std::fabs(d2.at(0, k)), std::fabs(d2.at(e, k)), std::fabs(d2.at(k, 0)),
                              std::fabs(d2.at(k, e))});
    }
    const double secs = seconds_since(t0);
    return {worst < 1e-12, fmt("1000 windows (l_s 2..200), max |boundary value| = %.3g; %.2f s", worst, secs)};
}

double rel_err(double got, double want) {
    const double scale = std::max(std::fabs(got), std::fabs(want));
    return scale == 0.0 ? 0.0 : std::fabs(got - want) / scale;
}

Outcome oracle_equivalence() {
    double worst = 0.0;
    bool regions_ok = true;
    std::size_t checks = 0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const TickSeries s = test::random_series(seed * 17, 100);
        const auto mid = test::column(s, PriceSource::Mid);
        const auto ask = test::column(s, PriceSource::Ask);
        const auto bid = test::column(s, PriceSource::Bid);
        const auto ts = test::times(s);
        for (int ls = 2; ls <= 8; ++ls) {
            for (double q : {0.5, 1.0, 2.0, 8.0}) {
                MapConfig map;
                map.string_length = ls;
                map.q = q;
                RegularFnConfig none, cs, sc;
                cs.family = RegularFamily::Cosine;
                cs.winding = 2;
                cs.phase = 0.4;
                sc.family = RegularFamily::BraneSinCos;
                sc.phase = 0.4;
                sc.second_phase = 1.1;
                const AnchorRange range = full_anchor_range(s, ls);

                for (MapKind kind : {MapKind::Os1, MapKind::Os2}) {
                    map.kind = kind;
                    for (const RegularFnConfig* reg : {&none, &cs}) {
                        const auto ms = momentum_series(s, map, *reg, range, 2);
                        for (std::size_t tau = 0; tau < ms.size(); ++tau) {
                            const auto amp = kind == MapKind::Os1 ? oracle::os1(mid, tau, ls, q) : oracle::os2(mid, tau, ls, q);
                            worst = std::max(worst, rel_err(ms.values[tau], oracle::string_momentum(amp, q, reg == &cs, 2, 0.4)));
                            ++checks;
                        }
                    }
                }
                map.kind = MapKind::D2;
                for (const RegularFnConfig* reg : {&none, &sc}) {
                    const auto ms = momentum_series(s, map, *reg, range, 2);
                    for (std::size_t tau = 0; tau < ms.size(); ++tau) {
                        worst = std::max(worst, rel_err(ms.values[tau], oracle::brane_momentum(ask, bid, tau, ls, q, reg == &sc, 1, 0.4, 1.1)));
                        ++checks;
                    }
                }
                map.kind = MapKind::Os2;
                for (std::size_t tau = 0; tau < range.count; ++tau) {
                    worst = std::max(worst, rel_err(angular_momentum(s, tau, map), oracle::angular_momentum(ask, bid, ts, tau, ls, q)));
                    worst = std::max(worst, rel_err(momentum_distance(s, tau, map), oracle::momentum_distance(ask, bid, tau, ls, q)));
                    checks += 2;
                }

                StrategyConfig strat;
                strat.map = map;
                const auto ms = momentum_series(s, map, none, range, 1);
                for (double eps : {0.0, 1e-4, 1e-3, 1e-2}) {
                    for (std::size_t min_len : {1u, 3u, 5u}) {
                        strat.band_epsilon = eps;
                        strat.min_region_len = min_len;
                        const auto got = invariant_regions(ms, strat);
                        const auto want = oracle::invariant_runs(ms.values, eps, min_len);
                        bool same = got.size() == want.size();
                        for (std::size_t k = 0; same && k < got.size(); ++k)
                            same = got[k].first == want[k].first && got[k].last == want[k].second &&
                                   got[k].last_tick == want[k].second + static_cast<std::size_t>(ls);
                        regions_ok = regions_ok && same;
                        ++checks;
                    }
                }
            }
        }
    }
    return {worst <= 1e-12 && regions_ok,
            fmt("%zu comparisons on 100-tick inputs, l_s 2..8; max relative error %.3g; regions %s", checks, worst,
                regions_ok ? "identical" : "DIFFER")};
}

Outcome risk_formulas() {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> z(-4.0, 4.0);
    bool identity = true;
    for (int i = 0; i < 100; ++i) {
        const double zc = z(rng);
        identity = identity && cornish_fisher_quantile(zc, 0.0, 0.0) == zc;
    }
    namespace o = test::mvar_oracle;
    const auto r = mvar_sharpe({test::splitmix_returns(), o::risk_free}, o::confidence);
    const double err = std::max({std::fabs(r.sharpe_mvar - o::sharpe_mvar), std::fabs(r.mvar - o::mvar),
                                 std::fabs(r.z_cf - o::z_cf), std::fabs(r.sharpe - o::sharpe)});
    return {identity && err <= 1e-10,
            fmt("z_cf(z_c, 0, 0) == z_c for 100 draws: %s; S_MVaR %.15g vs oracle %.15g, max abs diff %.2g",
                identity ? "yes" : "NO", r.sharpe_mvar, o::sharpe_mvar, err)};
}

// Coefficients of variation on the default seed-42 synthetic series, taken
// from the first run and frozen. The D2 value is the larger one, so the
// ordering check below fails; the frozen pair guards against drift either way.
constexpr double kFrozenCvOs1 = 0.60734715010093743;
constexpr double kFrozenCvD2 = 2.286262800432405;

Outcome flattening() {
    const TickSeries s = synthesize_ticks(SynthConfig{});
    auto cv = [&](MapKind kind) {
        MapConfig map;
        map.kind = kind;
        map.string_length = 100;
        map.q = 1.0;
        const auto ms = momentum_series(s, map, {}, full_anchor_range(s, 100));
        const auto st = distribution_stats(ms.values);
        return st.sigma / st.mu;
    };
    const double os1 = cv(MapKind::Os1);
    const double d2 = cv(MapKind::D2);
    const bool frozen_match = (rel_err(os1, kFrozenCvOs1) < 1e-9 && rel_err(d2, kFrozenCvD2) < 1e-9);
    return {d2 < os1 && frozen_match,
            fmt("CV(D2) = %.17g, CV(OS1) = %.17g, ratio %.4f; frozen values %s", d2, os1, d2 / os1,
                frozen_match ? "reproduced" : "NOT reproduced")};
}

Outcome correlation() {
    SynthConfig sc;
    sc.seed = 606;
    sc.ticks = 6000;
    sc.volatility = 2e-4;
    sc.garch_alpha = 0.1;
    sc.garch_beta = 0.85;
    const TickSeries s = synthesize_ticks(sc);
    bool ok = true;
    std::string detail;
    for (int ls : {10, 20, 40}) {
        const std::vector<int> lengths{ls};
        const std::vector<std::int64_t> windows{static_cast<std::int64_t>(ls) * sc.step_ms};
        const auto mag = correlation_grid(s, lengths, windows, 1.0);
        const auto sgn = correlation_grid(s, lengths, windows, 1.0, ConjugateMode::Aligned, PriceSource::Mid, false);
        const double r = mag[0].pearson.value_or(std::nan(""));
        ok = ok && r > 0.0;
        detail += fmt("l_s=%d: r(|M|, hv)=%.4f (signed M: %.4f); ", ls, r, sgn[0].pearson.value_or(std::nan("")));
    }
    return {ok, detail + "GARCH(1,1) synthetic, 6000 one-minute ticks"};
}

Outcome accounting() {
    // Spread round trip.
    const TickSeries flat = test::series_from({1.0851, 1.0851, 1.0851}, {1.0849, 1.0849, 1.0849});
    StrategyConfig wide;
    wide.take_profit = 10.0;
    wide.stop_loss = 10.0;
    wide.max_position = 1000.0;
    const std::vector<OrderIntent> rt{{1, Side::Buy, 1000.0}, {2, Side::Sell, 1000.0}};
    const auto a = execute(flat, rt, wide, 1e5);
    const bool spread_ok = std::fabs((a.initial_cash - a.final_nav()) - 1000.0 * (1.0851 - 1.0849)) < 1e-9;

    // Scripted five intents on quarter-tick prices.
    const TickSeries s = test::series_from({1.25, 1.5, 1.75, 1.5, 2.0, 1.25, 1.5, 1.5},
                                           {1.0, 1.25, 1.5, 1.25, 1.75, 1.0, 1.25, 1.25});
    StrategyConfig small = wide;
    small.trade_altitude = 2.0;
    small.max_position = 3.0;
    const std::vector<OrderIntent> five{{1, Side::Buy, 2.0}, {2, Side::Buy, 2.0}, {4, Side::Sell, 2.0},
                                       {5, Side::Sell, 2.0}, {6, Side::Sell, 2.0}};
    const auto b = execute(s, five, small, 100.0);
    const std::vector<Order> ledger{{1000, 1, Side::Buy, 2.0, 1.5, 0.0},
                                    {2000, 2, Side::Buy, 1.0, 1.75, 0.0},
                                    {4000, 4, Side::Sell, 3.0, 1.75, 0.5},
                                    {5000, 5, Side::Sell, 2.0, 1.0, 0.0},
                                    {6000, 6, Side::Sell, 1.0, 1.25, 0.0}};
    const bool script_ok = b.ledger == ledger && b.final_nav() == 99.25;

    // Conservation on the strategy pipeline and on the script, determinism
    // across repeated runs.
    SynthConfig sc;
    sc.ticks = 5000;
    sc.volatility = 5e-4;
    const TickSeries syn = synthesize_ticks(sc);
    StrategyConfig cfg;
    cfg.map.string_length = 50;
    cfg.min_region_len = 3;
    const auto ms = momentum_series(syn, cfg.map, cfg.regular, full_anchor_range(syn, 50));
    cfg.band_epsilon = 0.1 * distribution_stats(ms.values).sigma;
    const auto r1 = run_strategy(syn, cfg, 1e5);
    const auto r2 = run_strategy(syn, cfg, 1e5);
    const bool determinism = r1.ledger == r2.ledger && r1.nav.nav == r2.nav.nav && !r1.ledger.empty();
    const bool conservation = b.final_nav() == b.initial_cash + b.realized_pnl + b.unrealized_pnl &&
                              rel_err(r1.final_nav(), r1.initial_cash + r1.realized_pnl + r1.unrealized_pnl) < 1e-12;
    return {spread_ok && script_ok && determinism && conservation,
            fmt("round trip cost %.10g (expected %.10g); scripted ledger %s; conservation %s; %zu-order rerun %s",
                a.initial_cash - a.final_nav(), 1000.0 * (1.0851 - 1.0849), script_ok ? "exact" : "DIFFERS",
                conservation ? "exact" : "BROKEN", r1.ledger.size(), determinism ? "bit-identical" : "DIFFERS")};
}

Outcome arma_baseline() {
    std::mt19937_64 rng(8080);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> x;
    double v = 0.0;
    for (int i = 0; i < 10'500; ++i) {
        v = 0.8 * v + noise(rng);
        if (i >= 500) x.push_back(v);
    }
    const ArmaModel m = arma_fit(x, 1, 0);
    const bool ar_ok = std::fabs(m.ar_coeffs[0] - 0.8) <= 0.05;

    const auto t0 = std::chrono::steady_clock::now();
    const TickSeries s = synthesize_ticks(SynthConfig{});
    ComparisonRecipe recipe;
    const auto runs = run_comparison(s, recipe);
    const std::filesystem::path dir = "acceptance_nav";
    std::filesystem::create_directories(dir);
    bool files_ok = runs.size() == 4;
    for (const auto& run : runs) {
        const auto path = dir / ("nav_" + run.label + ".csv");
        std::ofstream out(path);
        write_nav_csv(out, run.result.nav);
        out.close();
        std::ifstream in(path);
        std::size_t lines = 0;
        for (std::string line; std::getline(in, line);) ++lines;
        files_ok = files_ok && lines == s.size() + 1;
    }
    const double secs = seconds_since(t0);
    return {ar_ok && files_ok && secs < 300.0,
            fmt("ar1 = %.4f on n=10^4; comparison wrote %zu NAV files (%s, %s, %s, %s) at l_s=%d in %.2f s", m.ar_coeffs[0],
                runs.size(), runs[0].label.c_str(), runs[1].label.c_str(), runs[2].label.c_str(), runs[3].label.c_str(),
                recipe.string_length, secs)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"slope/tension table relation", table_tension},
        {"Dirichlet boundaries", dirichlet},
        {"oracle equivalence", oracle_equivalence},
        {"risk formulas", risk_formulas},
        {"D2 flattening", flattening},
        {"angular momentum vs historical volatility", correlation},
        {"backtest accounting", accounting},
        {"ARMA baseline and comparison recipe", arma_baseline},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}

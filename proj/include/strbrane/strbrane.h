/*
 * C interface to the strbrane library.
 *
 * Every fallible call returns an sb_status. On failure a description of the
 * error is available from sb_last_error() on the same thread until the next
 * failing call. Handles are opaque, owned by the caller, and released with
 * the matching *_free function (NULL is accepted).
 */
#ifndef STRBRANE_H
#define STRBRANE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(STRBRANE_BUILDING)
#    define SB_API __declspec(dllexport)
#  else
#    define SB_API __declspec(dllimport)
#  endif
#else
#  define SB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values match the CLI exit codes. */
typedef enum sb_status {
    SB_OK = 0,
    SB_ERR_IO = 1,
    SB_ERR_VALIDATION = 2,
    SB_ERR_NUMERIC = 3,
    SB_ERR_INTERNAL = 4
} sb_status;

typedef enum sb_map_kind {
    SB_MAP_OS1 = 0,
    SB_MAP_OS2 = 1,
    SB_MAP_POLARIZED = 2,
    SB_MAP_POLARIZED_SUBTRACTED = 3,
    SB_MAP_D2 = 4
} sb_map_kind;

typedef enum sb_price_source { SB_PRICE_MID = 0, SB_PRICE_ASK = 1, SB_PRICE_BID = 2 } sb_price_source;

typedef enum sb_regular_family {
    SB_REGFN_NONE = 0,
    SB_REGFN_CS = 1,
    SB_REGFN_D2 = 2
} sb_regular_family;

typedef enum sb_conjugate_mode { SB_CONJ_ALIGNED = 0, SB_CONJ_LITERAL = 1 } sb_conjugate_mode;

typedef enum sb_objective {
    SB_OBJ_FINAL_NAV = 0,
    SB_OBJ_SHARPE = 1,
    SB_OBJ_SHARPE_MVAR = 2
} sb_objective;

typedef enum sb_side { SB_BUY = 0, SB_SELL = 1 } sb_side;

typedef struct sb_ticks sb_ticks;
typedef struct sb_momentum sb_momentum;
typedef struct sb_indicators sb_indicators;
typedef struct sb_backtest sb_backtest;
typedef struct sb_grid_results sb_grid_results;
typedef struct sb_arma sb_arma;

SB_API const char* sb_version(void);
SB_API const char* sb_last_error(void);

/* ---- ticks ------------------------------------------------------------ */

typedef struct sb_tick {
    int64_t timestamp_ms;
    double ask;
    double bid;
} sb_tick;

typedef struct sb_parse_options {
    int strict_quotes;     /* non-zero rejects ask < bid */
    int reject_duplicates; /* non-zero errors on repeated timestamps instead of last-wins */
    const char* symbol;    /* may be NULL */
} sb_parse_options;

SB_API void sb_parse_options_default(sb_parse_options* opts);
SB_API sb_status sb_ticks_read_csv(const char* path, const sb_parse_options* opts, sb_ticks** out);
SB_API sb_status sb_ticks_parse_csv(const char* text, size_t length, const sb_parse_options* opts,
                                    sb_ticks** out);
SB_API sb_status sb_ticks_from_array(const sb_tick* ticks, size_t count, int strict_quotes,
                                     sb_ticks** out);
SB_API sb_status sb_ticks_write_csv(const sb_ticks* ticks, const char* path);
SB_API size_t sb_ticks_size(const sb_ticks* ticks);
SB_API sb_status sb_ticks_get(const sb_ticks* ticks, size_t index, sb_tick* out);
SB_API sb_status sb_ticks_write_ohlc_csv(const sb_ticks* ticks, int64_t interval_ms, const char* path);
SB_API void sb_ticks_free(sb_ticks* ticks);

typedef struct sb_synth_config {
    uint64_t seed;
    size_t ticks;
    int64_t start_ms;
    int64_t step_ms;
    double start_price;
    double drift;
    double volatility;
    double spread;
    double spread_jitter;
    double garch_alpha;
    double garch_beta;
} sb_synth_config;

SB_API void sb_synth_config_default(sb_synth_config* cfg);
SB_API sb_status sb_synth(const sb_synth_config* cfg, sb_ticks** out);

/* ---- string maps and momenta ----------------------------------------- */

typedef struct sb_map_config {
    int string_length;
    double q;
    sb_map_kind kind;
    sb_price_source price_source;
} sb_map_config;

typedef struct sb_regular_config {
    sb_regular_family family;
    int winding;
    double phase;
    double second_phase;
} sb_regular_config;

SB_API void sb_map_config_default(sb_map_config* cfg);
SB_API void sb_regular_config_default(sb_regular_config* cfg);

SB_API double sb_q_deform(double x, double q);

/* Writes l_s + 1 values (1-D maps) or (l_s + 1)^2 row-major values (D2). */
SB_API sb_status sb_map_amplitude(const sb_ticks* ticks, size_t anchor, const sb_map_config* cfg,
                                  double* out, size_t capacity, size_t* written);

/* count == 0 selects every anchor from `first` to the last complete window.
 * threads == 0 uses the hardware concurrency. */
SB_API sb_status sb_momentum_compute(const sb_ticks* ticks, const sb_map_config* map,
                                     const sb_regular_config* regular, size_t first, size_t count,
                                     unsigned threads, sb_momentum** out);
SB_API size_t sb_momentum_size(const sb_momentum* ms);
SB_API sb_status sb_momentum_values(const sb_momentum* ms, double* out, size_t capacity);
SB_API sb_status sb_momentum_write_csv(const sb_momentum* ms, const char* path);
SB_API sb_status sb_momentum_write_stats_json(const sb_momentum* ms, size_t bins, const char* path);
SB_API void sb_momentum_free(sb_momentum* ms);

/* ---- stability indicators -------------------------------------------- */

typedef struct sb_stability_config {
    int string_length;
    double q;
    int64_t hist_window_ms;
    sb_conjugate_mode mode;
    sb_price_source volatility_source;
} sb_stability_config;

typedef struct sb_indicator_row {
    size_t anchor;
    int64_t timestamp_ms;
    double return_vol; /* NaN for odd string lengths */
    double hist_vol;   /* NaN when the window holds fewer than 2 ticks */
    double angular_momentum;
    double momentum_distance;
} sb_indicator_row;

typedef struct sb_slope_report {
    double mean_abs_angular_momentum;
    double alpha_prime;
    double tension_t0; /* valid only when has_tension != 0 */
    int has_tension;
    int string_length;
    size_t samples;
} sb_slope_report;

SB_API void sb_stability_config_default(sb_stability_config* cfg);
SB_API sb_status sb_indicators_compute(const sb_ticks* ticks, const sb_stability_config* cfg,
                                       unsigned threads, sb_indicators** out);
SB_API size_t sb_indicators_size(const sb_indicators* ind);
SB_API sb_status sb_indicators_get(const sb_indicators* ind, size_t index, sb_indicator_row* out);
SB_API sb_status sb_indicators_slope(const sb_indicators* ind, sb_slope_report* out);
SB_API sb_status sb_indicators_write_csv(const sb_indicators* ind, const char* path);
SB_API void sb_indicators_free(sb_indicators* ind);

/* Pearson correlation of |angular momentum| with historical volatility for
 * every (string length, window) pair; out is row-major n_lengths x n_windows,
 * NaN where undefined. */
SB_API sb_status sb_correlation_grid(const sb_ticks* ticks, const int* string_lengths, size_t n_lengths,
                                     const int64_t* windows_ms, size_t n_windows, double q,
                                     sb_conjugate_mode mode, sb_price_source volatility_source,
                                     unsigned threads, double* out);

/* Slope report of `ind` plus the correlation grid, as JSON. */
SB_API sb_status sb_stability_write_json(const sb_ticks* ticks, const sb_indicators* ind,
                                         const int* string_lengths, size_t n_lengths,
                                         const int64_t* windows_ms, size_t n_windows,
                                         unsigned threads, const char* path);

SB_API sb_status sb_regge_slope(const double* angular_momenta, size_t count, int string_length,
                                sb_slope_report* out);
SB_API sb_status sb_dp_brane_tension(int p, double string_coupling, double string_length, double* out);
SB_API sb_status sb_pearson(const double* x, const double* y, size_t count, double* out);

/* ---- risk ------------------------------------------------------------- */

typedef struct sb_risk_report {
    double mean;
    double sigma;
    double sharpe;
    double mvar;
    double sharpe_mvar;
    double skewness;
    double excess_kurtosis;
    double z_c;
    double z_cf;
    double confidence;
} sb_risk_report;

SB_API sb_status sb_sharpe_ratio(const double* returns, size_t count, double risk_free, double* out);
SB_API sb_status sb_normal_quantile(double p, double* out);
SB_API double sb_cornish_fisher_quantile(double z_c, double skewness, double excess_kurtosis);
SB_API sb_status sb_mvar_sharpe(const double* returns, size_t count, double risk_free,
                                double confidence, sb_risk_report* out);

/* ---- backtest --------------------------------------------------------- */

typedef struct sb_strategy_config {
    sb_map_config map;
    sb_regular_config regular;
    double trade_altitude;
    double band_epsilon;
    size_t min_region_len;
    double take_profit;
    double stop_loss;
    double max_position;
} sb_strategy_config;

typedef struct sb_intent {
    size_t tick;
    sb_side side;
    double units;
} sb_intent;

typedef struct sb_order {
    int64_t timestamp_ms;
    size_t tick;
    sb_side side;
    double units;
    double fill_price;
    double realized_pnl;
} sb_order;

typedef struct sb_backtest_summary {
    double initial_cash;
    double final_nav;
    double cash;
    double position;
    double realized_pnl;
    double unrealized_pnl;
    size_t orders;
} sb_backtest_summary;

SB_API void sb_strategy_config_default(sb_strategy_config* cfg);
SB_API sb_status sb_backtest_run(const sb_ticks* ticks, const sb_strategy_config* cfg,
                                 double initial_cash, sb_backtest** out);
SB_API sb_status sb_backtest_execute(const sb_ticks* ticks, const sb_intent* intents, size_t n_intents,
                                     const sb_strategy_config* cfg, double initial_cash,
                                     sb_backtest** out);
SB_API sb_status sb_backtest_summary_get(const sb_backtest* bt, sb_backtest_summary* out);
SB_API size_t sb_backtest_ledger_size(const sb_backtest* bt);
SB_API sb_status sb_backtest_ledger_get(const sb_backtest* bt, size_t index, sb_order* out);
SB_API size_t sb_backtest_nav_size(const sb_backtest* bt);
SB_API sb_status sb_backtest_nav_get(const sb_backtest* bt, size_t index, int64_t* timestamp_ms,
                                     double* nav);
/* SB_ERR_NUMERIC when the NAV return series has no defined risk figures. */
SB_API sb_status sb_backtest_risk(const sb_backtest* bt, double confidence, sb_risk_report* out);
SB_API sb_status sb_backtest_write_ledger_csv(const sb_backtest* bt, const char* path);
SB_API sb_status sb_backtest_write_nav_csv(const sb_backtest* bt, const char* path);
/* Undefined figures are written as null with an "error" field. */
SB_API sb_status sb_backtest_write_risk_json(const sb_backtest* bt, double confidence, const char* path);
SB_API void sb_backtest_free(sb_backtest* bt);

typedef struct sb_arma_strategy {
    int p;
    int q_ma;
    size_t train_ticks;
    size_t decision_interval;
    size_t history;
} sb_arma_strategy;

typedef struct sb_comparison_recipe {
    int string_length;
    double string_q;
    double brane_q;
    int winding;
    double phase;
    double band_sigma;
    size_t min_region_len;
    double trade_altitude;
    double take_profit;
    double stop_loss;
    double max_position;
    double initial_cash;
    sb_arma_strategy arma;
} sb_comparison_recipe;

#define SB_COMPARISON_RUNS 4

SB_API void sb_comparison_recipe_default(sb_comparison_recipe* recipe);
/* Fills out[0..3] with the OS1ep, OS2ep, D2 and ARMA runs. */
SB_API sb_status sb_comparison_run(const sb_ticks* ticks, const sb_comparison_recipe* recipe,
                                   unsigned threads, sb_backtest* out[SB_COMPARISON_RUNS]);
SB_API const char* sb_comparison_label(size_t index);

typedef struct sb_grid {
    const sb_map_kind* kinds;
    size_t n_kinds;
    const int* string_lengths;
    size_t n_string_lengths;
    const double* qs;
    size_t n_qs;
    const sb_regular_family* families;
    size_t n_families;
    const int* windings;
    size_t n_windings;
    double phase;
    double second_phase;
    const double* band_epsilons;
    size_t n_band_epsilons;
    const size_t* min_region_lens;
    size_t n_min_region_lens;
    const double* trade_altitudes;
    size_t n_trade_altitudes;
    const double* take_profits;
    size_t n_take_profits;
    const double* stop_losses;
    size_t n_stop_losses;
    const double* max_positions;
    size_t n_max_positions;
    double initial_cash;
} sb_grid;

SB_API sb_status sb_grid_search(const sb_ticks* ticks, const sb_grid* grid, sb_objective objective,
                                unsigned threads, sb_grid_results** out);
SB_API size_t sb_grid_results_size(const sb_grid_results* res);
/* value is NaN when the objective is undefined for that config. */
SB_API sb_status sb_grid_results_get(const sb_grid_results* res, size_t rank, sb_strategy_config* cfg,
                                     double* value);
SB_API sb_status sb_grid_results_write_json(const sb_grid_results* res, const char* path);
SB_API void sb_grid_results_free(sb_grid_results* res);

/* ---- ARMA baseline ---------------------------------------------------- */

SB_API sb_status sb_arma_fit(const double* series, size_t count, int p, int q_ma, sb_arma** out);
SB_API sb_status sb_arma_coefficients(const sb_arma* model, double* ar, size_t ar_capacity, double* ma,
                                      size_t ma_capacity, double* mean, double* noise_variance);
SB_API sb_status sb_arma_forecast(const sb_arma* model, const double* history, size_t count,
                                  size_t horizon, double* out);
SB_API void sb_arma_free(sb_arma* model);

#ifdef __cplusplus
}
#endif

#endif /* STRBRANE_H */

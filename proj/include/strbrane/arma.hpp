#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace strbrane {

/// ARMA(p, q) on a demeaned series:
///   x_t - mean = sum_i ar_i (x_{t-i} - mean) + e_t + sum_j ma_j e_{t-j}
struct ArmaModel {
    int p = 0;
    int q_ma = 0;
    std::vector<double> ar_coeffs;
    std::vector<double> ma_coeffs;
    double mean = 0.0;
    double noise_variance = 0.0;
};

/// Sample autocovariances gamma(0..max_lag), 1/n normalized.
std::vector<double> autocovariances(std::span<const double> x, std::size_t max_lag);

/// Yule-Walker AR(p) coefficients via Levinson-Durbin. Throws NumericError
/// when the autocovariance system is singular.
std::vector<double> yule_walker(std::span<const double> gamma, int p);

/// True when all roots of 1 - sum ar_i z^i lie outside the unit circle.
bool is_stationary(std::span<const double> ar_coeffs);

/// Yule-Walker for q_ma == 0, Hannan-Rissanen two-stage regression otherwise.
/// Requires n >= 10 (p + q_ma) and p >= 1; rejects non-stationary fits.
ArmaModel arma_fit(std::span<const double> series, int p, int q_ma);

/// Iterated one-step conditional-mean forecasts. In-sample innovations are
/// reconstructed from `history`; future innovations are zero.
std::vector<double> arma_forecast(const ArmaModel& model, std::span<const double> history,
                                  std::size_t horizon);

}  // namespace strbrane

#include "strbrane/arma.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "strbrane/error.hpp"

namespace strbrane {

namespace {

double mean_of(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

std::vector<double> residuals(std::span<const double> centered, std::span<const double> ar,
                              std::span<const double> ma) {
    const std::size_t n = centered.size();
    std::vector<double> e(n, 0.0);
    const std::size_t start = std::max(ar.size(), ma.size());
    for (std::size_t t = start; t < n; ++t) {
        double pred = 0.0;
        for (std::size_t i = 0; i < ar.size(); ++i) pred += ar[i] * centered[t - 1 - i];
        for (std::size_t j = 0; j < ma.size(); ++j) pred += ma[j] * e[t - 1 - j];
        e[t] = centered[t] - pred;
    }
    return e;
}

}  // namespace

std::vector<double> autocovariances(std::span<const double> x, std::size_t max_lag) {
    if (x.size() <= max_lag) throw ValidationError("series shorter than autocovariance lag");
    const double mu = mean_of(x);
    const double n = static_cast<double>(x.size());
    std::vector<double> gamma(max_lag + 1, 0.0);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double s = 0.0;
        for (std::size_t t = k; t < x.size(); ++t) s += (x[t] - mu) * (x[t - k] - mu);
        gamma[k] = s / n;
    }
    return gamma;
}

std::vector<double> yule_walker(std::span<const double> gamma, int p) {
    if (p < 1 || gamma.size() < static_cast<std::size_t>(p) + 1)
        throw ValidationError("Yule-Walker needs gamma(0..p) with p >= 1");
    if (!(gamma[0] > 0.0)) throw NumericError("singular autocovariance system (zero variance)");

    std::vector<double> phi(static_cast<std::size_t>(p), 0.0);
    std::vector<double> prev(static_cast<std::size_t>(p), 0.0);
    double err = gamma[0];
    for (int k = 1; k <= p; ++k) {
        double acc = gamma[static_cast<std::size_t>(k)];
        for (int j = 1; j < k; ++j) acc -= prev[static_cast<std::size_t>(j - 1)] * gamma[static_cast<std::size_t>(k - j)];
        const double reflection = acc / err;
        if (!std::isfinite(reflection) || std::fabs(reflection) >= 1.0)
            throw NumericError("singular autocovariance system");
        phi[static_cast<std::size_t>(k - 1)] = reflection;
        for (int j = 1; j < k; ++j)
            phi[static_cast<std::size_t>(j - 1)] =
                prev[static_cast<std::size_t>(j - 1)] - reflection * prev[static_cast<std::size_t>(k - j - 1)];
        err *= (1.0 - reflection * reflection);
        if (!(err > 0.0)) throw NumericError("singular autocovariance system");
        prev = phi;
    }
    return phi;
}

bool is_stationary(std::span<const double> ar_coeffs) {
    // Step-down recursion: the polynomial is stable iff every reflection
    // coefficient has magnitude below one.
    std::vector<double> a(ar_coeffs.begin(), ar_coeffs.end());
    for (std::size_t k = a.size(); k > 0; --k) {
        const double r = a[k - 1];
        if (!std::isfinite(r) || std::fabs(r) >= 1.0) return false;
        const double denom = 1.0 - r * r;
        std::vector<double> next(k - 1);
        for (std::size_t j = 0; j + 1 < k; ++j) next[j] = (a[j] + r * a[k - 2 - j]) / denom;
        a = std::move(next);
    }
    return true;
}

ArmaModel arma_fit(std::span<const double> series, int p, int q_ma) {
    if (p < 1) throw ValidationError("ARMA fit needs p >= 1");
    if (q_ma < 0) throw ValidationError("ARMA fit needs q >= 0");
    const std::size_t n = series.size();
    if (n < static_cast<std::size_t>(10 * (p + q_ma)))
        throw ValidationError("ARMA fit needs at least 10 (p + q) observations, got " + std::to_string(n));

    ArmaModel model;
    model.p = p;
    model.q_ma = q_ma;
    model.mean = mean_of(series);
    std::vector<double> centered(n);
    for (std::size_t t = 0; t < n; ++t) centered[t] = series[t] - model.mean;

    if (q_ma == 0) {
        const auto gamma = autocovariances(series, static_cast<std::size_t>(p));
        model.ar_coeffs = yule_walker(gamma, p);
    } else {
        // Stage 1: long autoregression for innovation estimates.
        const int long_order = std::min<int>(std::max(p + q_ma, static_cast<int>(std::ceil(10.0 * std::log10(static_cast<double>(n))))),
                                             static_cast<int>(n / 4));
        const auto gamma = autocovariances(series, static_cast<std::size_t>(long_order));
        const auto long_ar = yule_walker(gamma, long_order);
        const auto e = residuals(centered, long_ar, {});

        // Stage 2: regress x_t on its own lags and lagged innovations.
        const std::size_t start = static_cast<std::size_t>(long_order + q_ma);
        if (n <= start + static_cast<std::size_t>(p + q_ma))
            throw ValidationError("series too short for Hannan-Rissanen regression");
        const auto rows = static_cast<Eigen::Index>(n - start);
        Eigen::MatrixXd design(rows, p + q_ma);
        Eigen::VectorXd target(rows);
        for (std::size_t t = start; t < n; ++t) {
            const auto r = static_cast<Eigen::Index>(t - start);
            for (int i = 0; i < p; ++i) design(r, i) = centered[t - 1 - static_cast<std::size_t>(i)];
            for (int j = 0; j < q_ma; ++j) design(r, p + j) = e[t - 1 - static_cast<std::size_t>(j)];
            target(r) = centered[t];
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
        if (qr.rank() < p + q_ma) throw NumericError("singular Hannan-Rissanen regression");
        const Eigen::VectorXd beta = qr.solve(target);
        model.ar_coeffs.assign(beta.data(), beta.data() + p);
        model.ma_coeffs.assign(beta.data() + p, beta.data() + p + q_ma);
    }

    if (!is_stationary(model.ar_coeffs)) throw NumericError("non-stationary ARMA fit rejected");

    const auto e = residuals(centered, model.ar_coeffs, model.ma_coeffs);
    const std::size_t start = static_cast<std::size_t>(std::max(p, q_ma));
    double ss = 0.0;
    for (std::size_t t = start; t < n; ++t) ss += e[t] * e[t];
    model.noise_variance = ss / static_cast<double>(n - start);
    return model;
}

std::vector<double> arma_forecast(const ArmaModel& model, std::span<const double> history,
                                  std::size_t horizon) {
    const std::size_t order = static_cast<std::size_t>(std::max(model.p, model.q_ma));
    if (history.size() < order) throw ValidationError("insufficient history for ARMA forecast");
    if (horizon == 0) return {};

    std::vector<double> x(history.size());
    for (std::size_t t = 0; t < history.size(); ++t) x[t] = history[t] - model.mean;
    std::vector<double> e = residuals(x, model.ar_coeffs, model.ma_coeffs);

    std::vector<double> out;
    out.reserve(horizon);
    for (std::size_t k = 0; k < horizon; ++k) {
        const std::size_t t = x.size();
        double pred = 0.0;
        for (std::size_t i = 0; i < model.ar_coeffs.size(); ++i)
            if (t >= i + 1) pred += model.ar_coeffs[i] * x[t - 1 - i];
        for (std::size_t j = 0; j < model.ma_coeffs.size(); ++j)
            if (t >= j + 1) pred += model.ma_coeffs[j] * e[t - 1 - j];
        x.push_back(pred);
        e.push_back(0.0);
        out.push_back(pred + model.mean);
    }
    return out;
}

}  // namespace strbrane

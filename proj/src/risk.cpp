#include "strbrane/risk.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "json.hpp"
#include "strbrane/error.hpp"

namespace strbrane {

SampleMoments sample_moments(std::span<const double> values) {
    if (values.empty()) throw ValidationError("moments of an empty sample");
    const double n = static_cast<double>(values.size());
    SampleMoments m;
    for (double v : values) m.mean += v;
    m.mean /= n;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double v : values) {
        const double d = v - m.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    m.sigma = std::sqrt(m2);
    if (m2 > 0.0) {
        m.skewness = m3 / (m2 * m.sigma);
        m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    }
    return m;
}

double sharpe_ratio(const ReturnSample& sample) {
    if (sample.values.size() < 2) throw ValidationError("Sharpe ratio needs at least 2 returns");
    const SampleMoments m = sample_moments(sample.values);
    if (m.sigma == 0.0) throw NumericError("Sharpe ratio undefined for zero volatility");
    return (m.mean - sample.risk_free) / m.sigma;
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ValidationError("quantile level must lie in (0, 1)");

    // Acklam's rational approximation (relative error ~1.2e-9), followed by
    // one Halley step against erfc.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x = 0.0;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

double cornish_fisher_quantile(double z_c, double skewness, double excess_kurtosis) {
    const double z2 = z_c * z_c;
    const double z3 = z2 * z_c;
    return z_c + (z2 - 1.0) * skewness / 6.0 + (z3 - 3.0 * z_c) * excess_kurtosis / 24.0 -
           (2.0 * z3 - 5.0 * z_c) * skewness * skewness / 36.0;
}

RiskReport mvar_sharpe(const ReturnSample& sample, double confidence) {
    if (sample.values.size() < 4) throw ValidationError("modified VaR needs at least 4 returns");
    const SampleMoments m = sample_moments(sample.values);
    if (m.sigma == 0.0) throw NumericError("modified VaR undefined for zero volatility");

    RiskReport r;
    r.confidence = confidence;
    r.mean = m.mean;
    r.sigma = m.sigma;
    r.skewness = m.skewness;
    r.excess_kurtosis = m.excess_kurtosis;
    r.sharpe = (m.mean - sample.risk_free) / m.sigma;
    r.z_c = normal_quantile(confidence);
    r.z_cf = cornish_fisher_quantile(r.z_c, m.skewness, m.excess_kurtosis);
    r.mvar = modified_var(m.mean, m.sigma, r.z_cf);
    if (r.mvar == 0.0) throw NumericError("modified VaR is zero");
    r.sharpe_mvar = (m.mean - sample.risk_free) / r.mvar;
    return r;
}

void write_risk_json(std::ostream& out, const RiskReport& r) {
    nlohmann::ordered_json j{{"mean", r.mean},
                             {"sigma", r.sigma},
                             {"sharpe", r.sharpe},
                             {"mvar", r.mvar},
                             {"sharpe_mvar", r.sharpe_mvar},
                             {"skewness", r.skewness},
                             {"excess_kurtosis", r.excess_kurtosis},
                             {"z_c", r.z_c},
                             {"z_cf", r.z_cf},
                             {"confidence", r.confidence}};
    out << j.dump(2) << '\n';
}

}  // namespace strbrane

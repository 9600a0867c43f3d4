#pragma once

#include <iosfwd>
#include <span>
#include <vector>

namespace strbrane {

struct ReturnSample {
    std::vector<double> values;  // per-period returns
    double risk_free = 0.0;      // per period
};

struct SampleMoments {
    double mean = 0.0;
    double sigma = 0.0;            // population
    double skewness = 0.0;         // m3 / sigma^3
    double excess_kurtosis = 0.0;  // m4 / sigma^4 - 3
};

/// Population moments. Skewness and kurtosis are 0 when sigma is 0.
SampleMoments sample_moments(std::span<const double> values);

/// (mu - r_f) / sigma. Throws NumericError when sigma is 0.
double sharpe_ratio(const ReturnSample& sample);

/// Standard normal quantile, |error| < 1e-9 over (0, 1).
double normal_quantile(double p);

/// z_c + (z_c^2 - 1) S / 6 + (z_c^3 - 3 z_c) K / 24 - (2 z_c^3 - 5 z_c) S^2 / 36
double cornish_fisher_quantile(double z_c, double skewness, double excess_kurtosis);

/// -(mu + sigma z_cf)
inline double modified_var(double mean, double sigma, double z_cf) noexcept {
    return -(mean + sigma * z_cf);
}

struct RiskReport {
    double mean = 0.0;
    double sigma = 0.0;
    double sharpe = 0.0;
    double mvar = 0.0;
    double sharpe_mvar = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double z_c = 0.0;
    double z_cf = 0.0;
    double confidence = 0.0;
};

inline constexpr double kDefaultVarConfidence = 0.05;

/// MVaR = -(mu + sigma z_cf) with z_c the `confidence` quantile of the
/// standard normal. Needs at least 4 returns; throws NumericError on zero
/// sigma or zero MVaR.
RiskReport mvar_sharpe(const ReturnSample& sample, double confidence = kDefaultVarConfidence);

/// Flat JSON object.
void write_risk_json(std::ostream& out, const RiskReport& report);

}  // namespace strbrane

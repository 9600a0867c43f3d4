#pragma once

// Brute-force reimplementations written straight from the defining formulas.
// They work on plain price vectors and share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

namespace strbrane::oracle {

inline double fq(double x, double q) {
    if (x > 0) return std::pow(x, q);
    if (x < 0) return -std::pow(-x, q);
    return 0.0;
}

inline std::vector<double> os1(const std::vector<double>& p, std::size_t tau, int ls, double q) {
    std::vector<double> out;
    for (int h = 0; h <= ls; ++h) out.push_back(fq((p[tau + h] - p[tau]) / p[tau + h], q));
    return out;
}

inline std::vector<double> os2(const std::vector<double>& p, std::size_t tau, int ls, double q) {
    std::vector<double> out;
    for (int h = 0; h <= ls; ++h) {
        const double left = (p[tau + h] - p[tau]) / p[tau + h];
        const double right = (p[tau + ls] - p[tau + h]) / p[tau + ls];
        out.push_back(fq(left * right, q));
    }
    return out;
}

inline double brane_cell(const std::vector<double>& ask, const std::vector<double>& bid, std::size_t tau,
                         int ls, int h1, int h2, double q) {
    const double f1 = (ask[tau + h1] - ask[tau]) / ask[tau + h1];
    const double f2 = (ask[tau + ls] - ask[tau + h1]) / ask[tau + ls];
    const double f3 = (bid[tau] - bid[tau + h2]) / bid[tau];
    const double f4 = (bid[tau + h2] - bid[tau + ls]) / bid[tau + h2];
    return fq(f1 * f2 * f3 * f4, q);
}

inline double cosine_reg(int h, int ls, int m, double phi) {
    return 0.5 * (1.0 + std::cos(2.0 * std::numbers::pi * m * h / (ls + 1.0) + phi));
}

inline double sincos_reg(int h1, int h2, int ls, int m, double phi, double eps) {
    const double a = 2.0 * std::numbers::pi * m * h1 / (ls + 1.0) + phi;
    const double b = 2.0 * std::numbers::pi * m * h2 / (ls + 1.0) + eps;
    return 0.5 * std::sin(a * a) * std::cos(b * b);
}

inline double string_momentum(const std::vector<double>& amp, double q, bool regularized, int m, double phi) {
    const int ls = static_cast<int>(amp.size()) - 1;
    double s = 0.0;
    for (int h = 0; h <= ls; ++h) {
        const double f = regularized ? cosine_reg(h, ls, m, phi) : 0.0;
        s += std::pow(std::fabs(amp[h] - f), q);
    }
    return std::pow(s / (ls + 1.0), 1.0 / q);
}

inline double brane_momentum(const std::vector<double>& ask, const std::vector<double>& bid, std::size_t tau,
                             int ls, double q, bool regularized, int m, double phi, double eps) {
    double s = 0.0;
    for (int h1 = 0; h1 <= ls; ++h1)
        for (int h2 = 0; h2 <= ls; ++h2) {
            const double f = regularized ? sincos_reg(h1, h2, ls, m, phi, eps) : 0.0;
            s += std::pow(std::fabs(brane_cell(ask, bid, tau, ls, h1, h2, q) - f), q);
        }
    return std::pow(s / ((ls + 1.0) * (ls + 1.0)), 1.0 / q);
}

// Aligned integration: X(0) = 0, X(h) = sum_{k<h} P(k) (t(k+1) - t(k)) in seconds.
inline std::vector<double> integrate(const std::vector<double>& p, const std::vector<std::int64_t>& t,
                                     std::size_t tau) {
    std::vector<double> x(p.size(), 0.0);
    for (std::size_t h = 1; h < p.size(); ++h) {
        double s = 0.0;
        for (std::size_t k = 0; k < h; ++k) s += p[k] * (t[tau + k + 1] - t[tau + k]) / 1000.0;
        x[h] = s;
    }
    return x;
}

inline double angular_momentum(const std::vector<double>& ask, const std::vector<double>& bid,
                               const std::vector<std::int64_t>& t, std::size_t tau, int ls, double q) {
    const auto pa = os2(ask, tau, ls, q);
    const auto pb = os2(bid, tau, ls, q);
    const auto xa = integrate(pa, t, tau);
    const auto xb = integrate(pb, t, tau);
    double s = 0.0;
    for (int h = 0; h <= ls; ++h) s += pa[h] * xb[h] - pb[h] * xa[h];
    return s;
}

inline double momentum_distance(const std::vector<double>& ask, const std::vector<double>& bid, std::size_t tau,
                                int ls, double q) {
    const auto pa = os2(ask, tau, ls, q);
    const auto pb = os2(bid, tau, ls, q);
    double s = 0.0;
    for (int h = 0; h <= ls; ++h) s += std::fabs(pa[h] - pb[h]);
    return s / (ls + 1.0);
}

// O(n^2) greedy run scan recomputing max - min from scratch.
inline std::vector<std::pair<std::size_t, std::size_t>> invariant_runs(const std::vector<double>& v, double eps,
                                                                       std::size_t min_len) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t s = 0;
    while (s < v.size()) {
        std::size_t e = s;
        while (e + 1 < v.size()) {
            const auto lo = std::min_element(v.begin() + s, v.begin() + e + 2);
            const auto hi = std::max_element(v.begin() + s, v.begin() + e + 2);
            if (*hi - *lo > eps) break;
            ++e;
        }
        if (e - s + 1 >= min_len) {
            out.emplace_back(s, e);
            s = e + 1;
        } else {
            ++s;
        }
    }
    return out;
}

}  // namespace strbrane::oracle

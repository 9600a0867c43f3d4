#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "strbrane/error.hpp"
#include "strbrane/risk.hpp"
#include "support.hpp"

using namespace strbrane;

TEST_CASE("Sharpe ratio") {
    CHECK(sharpe_ratio({{0.1, 0.3}, 0.2}) == 0.0);
    // mean 0.1, population sigma 0.2
    CHECK(sharpe_ratio({{-0.1, 0.3}, 0.02}) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK_THROWS_AS(sharpe_ratio({{0.01, 0.01, 0.01}, 0.0}), NumericError);
}

TEST_CASE("Sharpe ratio is invariant under a common shift") {
    std::mt19937_64 rng(61);
    std::normal_distribution<double> n(0.001, 0.01);
    std::uniform_real_distribution<double> shift(-0.5, 0.5);
    std::vector<double> v;
    for (int i = 0; i < 200; ++i) v.push_back(n(rng));
    const double base = sharpe_ratio({v, 0.0003});
    for (int k = 0; k < 20; ++k) {
        const double c = shift(rng);
        std::vector<double> w = v;
        for (double& x : w) x += c;
        CHECK(sharpe_ratio({w, 0.0003 + c}) == doctest::Approx(base).epsilon(1e-9));
    }
}

TEST_CASE("normal quantile") {
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK(normal_quantile(0.05) == doctest::Approx(-1.6448536269514729).epsilon(1e-12));
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-10));
    for (double p : {1e-6, 0.01, 0.2, 0.7, 0.99}) {
        CHECK(normal_quantile(p) == doctest::Approx(-normal_quantile(1.0 - p)).epsilon(1e-9));
        const double back = 0.5 * std::erfc(-normal_quantile(p) / std::sqrt(2.0));
        CHECK(back == doctest::Approx(p).epsilon(1e-12));
    }
    CHECK_THROWS_AS(normal_quantile(0.0), ValidationError);
    CHECK_THROWS_AS(normal_quantile(1.0), ValidationError);
}

TEST_CASE("Cornish-Fisher quantile") {
    CHECK(cornish_fisher_quantile(-1.645, 0.0, 0.0) == -1.645);
    CHECK(cornish_fisher_quantile(-1.645, 0.5, 1.0) == doctest::Approx(-1.4779746145833335).epsilon(1e-14));
    for (double s : {-2.0, 0.3, 1.7})
        for (double k : {-1.0, 0.0, 4.0})
            CHECK(cornish_fisher_quantile(0.0, s, k) == doctest::Approx(-s / 6.0).epsilon(1e-15));
}

TEST_CASE("Cornish-Fisher reduces to the normal quantile without skew or kurtosis") {
    std::mt19937_64 rng(62);
    std::uniform_real_distribution<double> z(-4.0, 4.0);
    for (int i = 0; i < 100; ++i) {
        const double zc = z(rng);
        CHECK(cornish_fisher_quantile(zc, 0.0, 0.0) == zc);
    }
}

TEST_CASE("modified VaR substitution") {
    CHECK(modified_var(0.0, 1.0, cornish_fisher_quantile(-1.645, 0.0, 0.0)) == 1.645);
}

TEST_CASE("symmetric samples have zero skewness") {
    std::mt19937_64 rng(63);
    std::exponential_distribution<double> e(3.0);
    std::vector<double> v;
    for (int i = 0; i < 500; ++i) {
        const double x = e(rng);
        v.push_back(x);
        v.push_back(-x);
    }
    const auto m = sample_moments(v);
    CHECK(m.mean == 0.0);
    CHECK(m.skewness == 0.0);
}

TEST_CASE("moments of a two-point sample") {
    const std::vector<double> v{0.0, 2.0, 0.0, 2.0};
    const auto m = sample_moments(v);
    CHECK(m.mean == 1.0);
    CHECK(m.sigma == 1.0);
    CHECK(m.skewness == 0.0);
    CHECK(m.excess_kurtosis == -2.0);
}

TEST_CASE("normal-like sample: MVaR approaches the Gaussian VaR") {
    std::mt19937_64 rng(64);
    std::normal_distribution<double> n(0.0005, 0.01);
    std::vector<double> v;
    for (int i = 0; i < 200'000; ++i) v.push_back(n(rng));
    const auto r = mvar_sharpe({v, 0.0});
    CHECK(std::fabs(r.skewness) < 0.05);
    CHECK(std::fabs(r.excess_kurtosis) < 0.1);
    CHECK(r.mvar == doctest::Approx(-(r.mean - 1.6448536269514729 * r.sigma)).epsilon(5e-3));
}

TEST_CASE("MVaR Sharpe on the seeded sample matches the scripted oracle") {
    namespace o = test::mvar_oracle;
    const auto r = mvar_sharpe({test::splitmix_returns(), o::risk_free}, o::confidence);
    auto near = [](double got, double want) { return std::fabs(got - want) <= 1e-10 * std::max(1.0, std::fabs(want)); };
    CHECK(near(r.mean, o::mean));
    CHECK(near(r.sigma, o::sigma));
    CHECK(near(r.skewness, o::skewness));
    CHECK(near(r.excess_kurtosis, o::excess_kurtosis));
    CHECK(near(r.z_c, o::z_c));
    CHECK(near(r.z_cf, o::z_cf));
    CHECK(near(r.mvar, o::mvar));
    CHECK(near(r.sharpe, o::sharpe));
    CHECK(near(r.sharpe_mvar, o::sharpe_mvar));
    CHECK(test::close_rel(r.sharpe_mvar, o::sharpe_mvar, 1e-10));
}

TEST_CASE("MVaR preconditions") {
    CHECK_THROWS_AS(mvar_sharpe({{0.1, 0.2, 0.3}, 0.0}), ValidationError);
    CHECK_THROWS_AS(mvar_sharpe({{0.1, 0.1, 0.1, 0.1}, 0.0}), NumericError);
}

TEST_CASE("risk report JSON is flat") {
    const auto r = mvar_sharpe({{0.01, -0.02, 0.03, 0.005, -0.01}, 0.0});
    std::ostringstream out;
    write_risk_json(out, r);
    const auto j = nlohmann::json::parse(out.str());
    CHECK(j.size() == 10);
    for (const auto& [key, value] : j.items()) CHECK(value.is_number());
    CHECK(j["sharpe_mvar"].get<double>() == r.sharpe_mvar);
}

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "strbrane/error.hpp"
#include "strbrane/strmaps.hpp"
#include "support.hpp"

using namespace strbrane;

namespace {

MapConfig cfg_of(MapKind kind, int ls, double q = 1.0, PriceSource src = PriceSource::Mid) {
    MapConfig c;
    c.kind = kind;
    c.string_length = ls;
    c.q = q;
    c.price_source = src;
    return c;
}

}  // namespace

TEST_CASE("q deformation examples") {
    CHECK(q_deform(-0.3, 1.0) == -0.3);
    CHECK(q_deform(-0.5, 2.0) == -0.25);
    CHECK(q_deform(0.5, 8.0) == 0.00390625);
    CHECK(q_deform(0.0, 3.5) == 0.0);
}

TEST_CASE("q deformation is odd and increasing") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> x(-5.0, 5.0), q(0.05, 10.0);
    for (int i = 0; i < 1000; ++i) {
        const double xv = x(rng), qv = q(rng);
        CHECK(q_deform(-xv, qv) == -q_deform(xv, qv));
        const double a = std::fabs(xv), b = a + 1e-3 + std::fabs(x(rng));
        CHECK(q_deform(a, qv) < q_deform(b, qv));
    }
}

TEST_CASE("1-endpoint string") {
    const TickSeries s = test::series_from_mid({1, 2, 4});
    const auto amp = map_os1(s, 0, cfg_of(MapKind::Os1, 2));
    CHECK(amp.values == std::vector<double>{0.0, 0.5, 0.75});

    const TickSeries flat = test::series_from_mid(std::vector<double>(20, 1.3));
    for (double v : map_os1(flat, 3, cfg_of(MapKind::Os1, 10, 2.0)).values) CHECK(v == 0.0);
}

TEST_CASE("2-endpoint string") {
    const TickSeries s = test::series_from_mid({1, 2, 4});
    const auto amp = map_os2(s, 0, cfg_of(MapKind::Os2, 2));
    CHECK(amp.values[0] == 0.0);
    CHECK(amp.values[1] == 0.25);
    CHECK(amp.values[2] == 0.0);

    const TickSeries flat = test::series_from_mid(std::vector<double>(20, 0.7));
    for (double v : map_os2(flat, 0, cfg_of(MapKind::Os2, 19, 3.0)).values) CHECK(v == 0.0);
}

TEST_CASE("polarized string") {
    const TickSeries s = test::series_from({1.1, 2.1, 4.1}, {1.0, 2.0, 4.0});
    const auto amp = map_polarized(s, 0, cfg_of(MapKind::Polarized, 2));
    const double expected = ((2.0 - 1.1) / 2.05) * ((4.0 - 2.1) / 4.05);
    CHECK(amp.values[1] == doctest::Approx(expected).epsilon(1e-15));
    CHECK(amp.values[1] == doctest::Approx(0.20597).epsilon(1e-4));

    const auto sub = map_polarized(s, 0, cfg_of(MapKind::PolarizedSubtracted, 2));
    CHECK(sub.values[0] == 0.0);
    for (std::size_t h = 0; h < 3; ++h) CHECK(sub.values[h] == amp.values[h] - amp.values[0]);
}

TEST_CASE("polarized equals 2-endpoint without spread") {
    const TickSeries s = test::series_from_mid({1.3, 1.31, 1.29, 1.35, 1.28, 1.33, 1.30});
    for (double q : {0.5, 1.0, 2.0}) {
        const auto pol = map_polarized(s, 1, cfg_of(MapKind::Polarized, 5, q));
        const auto os2 = map_os2(s, 1, cfg_of(MapKind::Os2, 5, q));
        CHECK(pol.values == os2.values);
    }
}

TEST_CASE("D2 brane") {
    const TickSeries s = test::series_from_mid({1, 2, 4});
    const auto amp = map_d2(s, 0, cfg_of(MapKind::D2, 2));
    CHECK(amp.side == 3);
    CHECK(amp.at(1, 1) == 0.25);

    const TickSeries flat = test::series_from(std::vector<double>(12, 1.2), std::vector<double>(12, 1.1));
    for (double v : map_d2(flat, 0, cfg_of(MapKind::D2, 11)).values) CHECK(v == 0.0);
}

TEST_CASE("D2 cells match the four-factor product") {
    const TickSeries s = test::random_series(5, 60);
    const auto ask = test::column(s, PriceSource::Ask);
    const auto bid = test::column(s, PriceSource::Bid);
    for (double q : {1.0, 0.5, 3.0}) {
        const auto amp = map_d2(s, 7, cfg_of(MapKind::D2, 8, q));
        for (int h1 = 0; h1 <= 8; ++h1)
            for (int h2 = 0; h2 <= 8; ++h2) {
                const double want = oracle::brane_cell(ask, bid, 7, 8, h1, h2, q);
                CHECK(test::close_rel(amp.at(h1, h2), want, 1e-12, 1e-300));
            }
    }
}

TEST_CASE("Dirichlet boundaries hold on 1000 random windows") {
    std::mt19937_64 rng(2718);
    const TickSeries s = test::random_series(99, 5000, 5e-3);
    std::uniform_int_distribution<int> ls_pick(2, 40);
    std::uniform_real_distribution<double> q_pick(0.25, 8.0);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int ls = ls_pick(rng);
        const double q = q_pick(rng);
        std::uniform_int_distribution<std::size_t> anchor_pick(0, s.size() - ls - 1);
        const std::size_t tau = anchor_pick(rng);

        const auto os2 = map_os2(s, tau, cfg_of(MapKind::Os2, ls, q));
        worst = std::max({worst, std::fabs(os2.values.front()), std::fabs(os2.values.back())});

        const auto d2 = map_d2(s, tau, cfg_of(MapKind::D2, ls, q));
        for (int k = 0; k <= ls; ++k) {
            worst = std::max({worst, std::fabs(d2.at(0, k)), std::fabs(d2.at(ls, k)), std::fabs(d2.at(k, 0)),
                              std::fabs(d2.at(k, ls))});
        }
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("maps are scale invariant") {
    const TickSeries s = test::random_series(21, 40);
    std::vector<Tick> scaled_ticks(s.begin(), s.end());
    const double lambda = 4.0;  // power of two keeps the arithmetic exact
    for (Tick& t : scaled_ticks) {
        t.ask *= lambda;
        t.bid *= lambda;
    }
    const TickSeries scaled(std::move(scaled_ticks));
    for (MapKind kind : {MapKind::Os1, MapKind::Os2}) {
        const auto a = map_string(s, 3, cfg_of(kind, 20, 1.5));
        const auto b = map_string(scaled, 3, cfg_of(kind, 20, 1.5));
        CHECK(a.values == b.values);
    }
    CHECK(map_d2(s, 3, cfg_of(MapKind::D2, 20)).values == map_d2(scaled, 3, cfg_of(MapKind::D2, 20)).values);

    // A non-dyadic factor changes rounding only.
    std::vector<Tick> odd(s.begin(), s.end());
    for (Tick& t : odd) {
        t.ask *= 117.3;
        t.bid *= 117.3;
    }
    const TickSeries jpy(std::move(odd));
    const auto a = map_os2(s, 0, cfg_of(MapKind::Os2, 30));
    const auto b = map_os2(jpy, 0, cfg_of(MapKind::Os2, 30));
    for (std::size_t h = 0; h < a.values.size(); ++h) CHECK(test::close_rel(a.values[h], b.values[h], 1e-9, 1e-18));
}

TEST_CASE("maps match the brute-force formulas") {
    const TickSeries s = test::random_series(8, 100);
    const auto mid = test::column(s, PriceSource::Mid);
    for (int ls : {2, 5, 8}) {
        for (std::size_t tau = 0; tau + ls < s.size(); tau += 7) {
            const auto want1 = oracle::os1(mid, tau, ls, 2.0);
            const auto want2 = oracle::os2(mid, tau, ls, 2.0);
            const auto got1 = map_os1(s, tau, cfg_of(MapKind::Os1, ls, 2.0)).values;
            const auto got2 = map_os2(s, tau, cfg_of(MapKind::Os2, ls, 2.0)).values;
            for (int h = 0; h <= ls; ++h) {
                CHECK(test::close_rel(got1[h], want1[h], 1e-12, 1e-300));
                CHECK(test::close_rel(got2[h], want2[h], 1e-12, 1e-300));
            }
        }
    }
}

TEST_CASE("windows outside the series are rejected") {
    const TickSeries s = test::series_from_mid({1, 2, 3, 4});
    CHECK_THROWS_AS(map_os2(s, 2, cfg_of(MapKind::Os2, 2)), ValidationError);
    CHECK_THROWS_AS(map_d2(s, 0, cfg_of(MapKind::D2, 4)), ValidationError);
    CHECK_NOTHROW(map_os1(s, 1, cfg_of(MapKind::Os1, 2)));
    CHECK_THROWS_AS(map_os1(s, 0, cfg_of(MapKind::Os1, 1)), ValidationError);
    CHECK_THROWS_AS(map_os1(s, 0, cfg_of(MapKind::Os1, 2, 0.0)), ValidationError);
    CHECK_THROWS_AS(map_string(s, 0, cfg_of(MapKind::D2, 2)), ValidationError);
}

TEST_CASE("brane CSV has one row per cell") {
    const TickSeries s = test::series_from_mid({1, 2, 4});
    std::ostringstream out;
    write_brane_csv(out, map_d2(s, 0, cfg_of(MapKind::D2, 2)));
    const std::string text = out.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 10);
    CHECK(text.find("1,1,0.25\n") != std::string::npos);
}

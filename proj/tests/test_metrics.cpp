#include "doctest.h"

#include "gridflex/error.hpp"
#include "gridflex/metrics.hpp"
#include "gridflex/realtime.hpp"

#include <cmath>
#include <random>

using namespace gridflex;

TEST_CASE("constant offset") {
    std::vector<double> o(120, 0.1);
    const auto s = compute_stats(o, 1);
    CHECK(s.avg_abs == doctest::Approx(0.1));
    CHECK(s.net_energy_abs == doctest::Approx(0.2));
    CHECK(s.net_energy_signed == doctest::Approx(0.2));
    CHECK(s.rms == doctest::Approx(0.1));
}

TEST_CASE("antisymmetric pair") {
    const std::vector<double> o{0.1, -0.1};
    const auto s = compute_stats(o, 60);
    CHECK(s.avg_abs == doctest::Approx(0.1));
    CHECK(s.net_energy_signed == 0.0);
    CHECK(s.net_energy_abs == doctest::Approx(0.2));
    CHECK(s.rms == doctest::Approx(0.1));
}

TEST_CASE("all-zero trajectory") {
    const std::vector<double> o(10, 0.0);
    const auto s = compute_stats(o, 5);
    CHECK(s.avg_abs == 0.0);
    CHECK(s.net_energy_signed == 0.0);
    CHECK(s.net_energy_abs == 0.0);
    CHECK(s.rms == 0.0);
}

TEST_CASE("empty input is rejected") {
    CHECK_THROWS_AS(compute_stats({}, 1), ValidationError);
    const std::vector<double> one{0.1};
    CHECK_THROWS_AS(compute_stats(one, 0), ValidationError);
}

TEST_CASE("power-mean and energy identities on random series") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 500);
        const int dt = 1 + static_cast<int>(rng() % 30);
        std::vector<double> o(n);
        for (auto& v : o) v = (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5);
        const auto s = compute_stats(o, dt);
        const double hours = n * dt / 60.0;
        CHECK(s.rms >= s.avg_abs * (1 - 1e-12));
        CHECK(s.avg_abs >= 0.0);
        CHECK(std::abs(s.net_energy_signed) <= s.net_energy_abs * (1 + 1e-12));
        CHECK(s.net_energy_abs == doctest::Approx(s.avg_abs * hours).epsilon(1e-12));
    }
}

TEST_CASE("stats are invariant under uniform MW scaling") {
    for (const auto& spec : builtin_catalog()) {
        CAPTURE(spec.name);
        const auto profile = gen_intermittency(5);
        const auto a = run_realtime(spec, profile);
        const auto b = run_realtime(scaled(spec, 2.0), profile);
        const auto sa = compute_stats(a.offsets_pu(), 1);
        const auto sb = compute_stats(b.offsets_pu(), 1);
        CHECK(std::abs(sa.rms - sb.rms) <= 1e-12);
        CHECK(std::abs(sa.avg_abs - sb.avg_abs) <= 1e-12);
        CHECK(std::abs(sa.net_energy_abs - sb.net_energy_abs) <= 1e-12);
        CHECK(std::abs(sa.net_energy_signed - sb.net_energy_signed) <= 1e-12);
    }
}

TEST_CASE("ranking") {
    DeficitStats a{0, 0, 0, 0.2};
    DeficitStats b{0, 0, 0, 0.1};
    auto r = rank_resources({{"A", a}, {"B", b}});
    CHECK(r[0].name == "B");
    CHECK(r[1].name == "A");

    DeficitStats c{0, 0, 0.3, 0.1};
    DeficitStats d{0, 0, 0.2, 0.1};
    r = rank_resources({{"C", c}, {"D", d}});
    CHECK(r[0].name == "D");

    r = rank_resources({{"zeta", a}, {"alpha", a}, {"mu", a}});
    CHECK(r[0].name == "alpha");
    CHECK(r[1].name == "mu");
    CHECK(r[2].name == "zeta");

    CHECK_THROWS_AS(rank_resources({{"only", a}}), ValidationError);
}

TEST_CASE("table renderings") {
    std::vector<RankedEntry> rows{{"Battery", {0.1, 0.01, 0.2, 0.3}}, {"Flywheel", {0.2, 0.0, 0.4, 0.5}}};
    const auto csv = stats_table_csv(rows);
    CHECK(csv.rfind("resource,avg_abs_pu,net_energy_abs_puh,net_energy_signed_puh,rms_pu\n", 0) == 0);
    CHECK(csv.find("Battery,0.10000000000000001,0.20000000000000001,0.01,0.29999999999999999") !=
          std::string::npos);
    const auto txt = stats_table_text("energy-reserve", rows);
    CHECK(txt.find("energy-reserve") != std::string::npos);
    CHECK(txt.find("Flywheel") != std::string::npos);
    CHECK(txt.find("0.3") != std::string::npos);
}

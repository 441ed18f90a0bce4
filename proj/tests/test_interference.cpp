#include <cmath>
#include <fstream>
#include <random>

#include "coexist/interference.hpp"
#include "coexist/units.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace coexist;

namespace {

const auto kCo = PropagationDirection::CoPropagating;
const auto kCounter = PropagationDirection::CounterPropagating;

ChannelPlan edge_plan(double dbm, int n_gb = 0, int n = kDefaultSlots, int q = -1) {
    auto g = build_grid(n).with_quantum_slot(q < 0 ? n : q, Placement::Custom);
    return apply_guardband(load_uniform(g, dbm_to_watts(dbm)), n_gb);
}

ChannelPlan scaled(const ChannelPlan& p, double kappa) {
    auto ch = p.classical();
    for (auto& c : ch) c.power_w *= kappa;
    return p.with_channels(ch);
}

}  // namespace

TEST_SUITE("interference") {

TEST_CASE("phase mismatch") {
    const double b2 = ps2_per_km_to_s2_per_m(-21.7);
    CHECK(delta_beta(193e12, 193e12, 193e12, b2) == 0.0);
    CHECK(delta_beta(193e12, 193e12, 194e12, b2) == 0.0);
    const double db = delta_beta(193e12, 193e12 + 50e9, 193e12 + 50e9, b2);
    CHECK(std::abs(db) == doctest::Approx(21.7e-27 * std::pow(kTwoPi * 5e10, 2)).epsilon(1e-12));
    CHECK(std::abs(db) == doctest::Approx(2.14e-3).epsilon(0.005));
    // quadratic in detuning
    const double db2 = delta_beta(193e12, 193e12 + 100e9, 193e12 + 100e9, b2);
    CHECK(db2 / db == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("efficiency limits") {
    const double a = db_per_km_to_per_m(0.2);
    const double L = 10e3;
    const double leff = effective_length(a, L);
    CHECK(leff == doctest::Approx(-std::expm1(-a * L) / a).epsilon(1e-15));
    CHECK(oracle::rel_err(fwm_efficiency(0.0, a, L), leff * leff) < 1e-12);
    CHECK(fwm_efficiency(2.14e-3, a, 0.0) == 0.0);
    CHECK(fwm_efficiency(0.0, a, 0.0) == 0.0);
}

TEST_CASE("efficiency matches quadrature") {
    const double a = db_per_km_to_per_m(0.2);
    for (double db : {2.14e-3, 1e-5, 3e-4, 8.56e-3, -2.14e-3}) {
        for (double L : {10e3, 2.5e3, 25e3}) {
            CAPTURE(db);
            CAPTURE(L);
            CHECK(oracle::rel_err(fwm_efficiency(db, a, L), oracle::rho_quadrature(a, db, L)) < 1e-10);
            CHECK(oracle::rel_err(fwm_efficiency(db, a, L), oracle::rho_complex(a, db, L)) < 1e-11);
        }
    }
}

TEST_CASE("efficiency never exceeds the phase-matched value") {
    const double a = db_per_km_to_per_m(0.2);
    for (double L : {1e3, 10e3, 30e3}) {
        const double bound = std::pow(effective_length(a, L), 2);
        for (double db = 1e-7; db < 1e-1; db *= 1.3) CHECK(fwm_efficiency(db, a, L) < bound);
    }
}

TEST_CASE("tiny attenuation stays accurate") {
    const double L = 1e3;
    for (double a : {1e-12, 1e-9, 1e-6}) {
        CHECK(oracle::rel_err(fwm_efficiency(0.0, a, L), std::pow(effective_length(a, L), 2)) < 1e-12);
        CHECK(oracle::rel_err(fwm_efficiency(1e-3, a, L), oracle::rho_complex(a, 1e-3, L)) < 1e-8);
    }
}

TEST_CASE("single classical channel produces no FWM") {
    const auto g = build_grid(16).with_quantum_slot(16, Placement::BandEdge);
    const auto p = g.with_channels({{15, 1e-3}});
    CHECK(enumerate_fwm_triples(p).empty());
    const auto [d, nd] = fwm_power(p, FiberParams::metro_default(), kCo);
    CHECK(d == 0.0);
    CHECK(nd == 0.0);
}

TEST_CASE("triple enumeration matches the exhaustive oracle") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> pw(0.1e-3, 2e-3);
    std::uniform_real_distribution<double> kurt(-1.0, 1.0);
    const auto fiber = FiberParams::metro_default();
    for (int n = 2; n <= 16; ++n) {
        for (int q = 1; q <= n; ++q) {
            for (int gb = 0; gb <= n; ++gb) {
                auto base = build_grid(n).with_quantum_slot(q, Placement::Custom);
                std::vector<ClassicalChannel> ch;
                for (int s = 1; s <= n; ++s)
                    if (s != q) ch.push_back({s, pw(rng), kurt(rng), "custom"});
                const auto plan = apply_guardband(base.with_channels(ch), gb);
                const auto fast = enumerate_fwm_triples(plan);
                const auto slow = oracle::brute_force_triples(plan);
                std::set<oracle::Triple> got;
                for (const auto& t : fast) got.insert({t.h, t.k, t.l});
                REQUIRE(got.size() == fast.size());
                CHECK(got == slow);
                const auto [d, nd] = fwm_power(plan, fiber, kCo);
                const auto [od, ond] = oracle::brute_force_fwm(plan, fiber);
                CHECK(oracle::rel_err(d, od) < 1e-12);
                CHECK(oracle::rel_err(nd, ond) < 1e-12);
            }
        }
    }
}

TEST_CASE("idler occupancy is required") {
    // pumps 13 and 15 with idler 12 land on 16; removing 12 kills the product
    const auto g = build_grid(16).with_quantum_slot(16, Placement::BandEdge);
    const auto with_idler = g.with_channels({{12, 1e-3}, {13, 1e-3}, {15, 1e-3}});
    const auto without = g.with_channels({{13, 1e-3}, {15, 1e-3}});
    CHECK(enumerate_fwm_triples(with_idler) == std::vector<FwmTriple>{{13, 12, 15}});
    CHECK(enumerate_fwm_triples(without).empty());
}

TEST_CASE("cubic and linear power scaling") {
    const auto plan = edge_plan(-1.5);
    const auto fiber = FiberParams::metro_default();
    const auto [d0, nd0] = fwm_power(plan, fiber, kCo);
    const double s0 = sprs_power(plan, fiber, 32e9, kCo);
    const double s0b = sprs_power(plan, fiber, 32e9, kCounter);
    for (double k : {0.5, 2.0, 10.0}) {
        const auto p = scaled(plan, k);
        const auto [d, nd] = fwm_power(p, fiber, kCo);
        CHECK(oracle::rel_err(d, k * k * k * d0) < 1e-9);
        CHECK(oracle::rel_err(nd, k * k * k * nd0) < 1e-9);
        CHECK(oracle::rel_err(sprs_power(p, fiber, 32e9, kCo), k * s0) < 1e-9);
        CHECK(oracle::rel_err(sprs_power(p, fiber, 32e9, kCounter), k * s0b) < 1e-9);
    }
}

TEST_CASE("FWM is non-increasing in guardband size") {
    const auto fiber = FiberParams::metro_default();
    for (int q : {88, 44, 20}) {
        double last = INFINITY;
        for (int gb = 0; gb <= 12; ++gb) {
            const double f = [&] {
                const auto pr = fwm_power(edge_plan(-1.5, gb, 88, q), fiber, kCo);
                return pr.first + pr.second;
            }();
            CHECK(f <= last);
            last = f;
        }
    }
}

TEST_CASE("doubling length never more than quadruples phase-matched FWM") {
    const double a = db_per_km_to_per_m(0.2);
    for (double L = 100.0; L < 50e3; L *= 1.5) {
        const double r = std::exp(-2 * a * L) * fwm_efficiency(0.0, a, 2 * L) /
                         (std::exp(-a * L) * fwm_efficiency(0.0, a, L));
        CHECK(r <= 4.0);
    }
}

TEST_CASE("counter-propagating FWM is suppressed") {
    const auto [d, nd] = fwm_power(edge_plan(0.5), FiberParams::metro_default(), kCounter);
    CHECK(d == 0.0);
    CHECK(nd == 0.0);
}

TEST_CASE("Raman efficiency") {
    const auto prof = RamanProfile::silica_default();
    CHECK(raman_efficiency(0.0, prof, 300.0) == 0.0);
    CHECK(raman_efficiency(41e12, prof, 300.0) == 0.0);
    CHECK(raman_efficiency(-41e12, prof, 300.0) == 0.0);
    CHECK(prof.density(45e12) == 0.0);
    for (double df : {1e12, 5e12, 13.2e12, 25e12}) {
        for (double tk : {77.0, 300.0, 350.0}) {
            const double stokes = raman_efficiency(-df, prof, tk);
            const double anti = raman_efficiency(df, prof, tk);
            REQUIRE(stokes > 0.0);
            CHECK(oracle::rel_err(anti / stokes, std::exp(-kPlanck * df / (kBoltzmann * tk))) < 1e-12);
        }
    }
    CHECK(prof.density(13.2e12) == doctest::Approx(1e-23 * kDefaultRamanScale));
}

TEST_CASE("Raman profile validation and CSV loading") {
    using P = RamanProfile::Point;
    CHECK_THROWS_AS(RamanProfile({{0, 0}}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(RamanProfile({{0, 0}, {1e12, -1.0}, {41e12, 0}}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(RamanProfile({{0, 0}, {2e12, 1.0}, {1e12, 0}, {41e12, 0}}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(RamanProfile({{0, 0}, {1e12, 1.0}}, 1.0), std::invalid_argument);
    const RamanProfile flat({P{0, 1e-22}, P{40e12, 1e-22}}, 2.0);
    CHECK(flat.density(7e12) == doctest::Approx(2e-22));

    const auto path = std::filesystem::temp_directory_path() / "coexist_raman_test.csv";
    {
        std::ofstream f(path);
        f << "detuning_Hz,density_per_m_per_Hz\n0,0\n10e12,2e-23\n40e12,0\n";
    }
    const auto loaded = RamanProfile::from_csv(path, 3.0);
    CHECK(loaded.density(5e12) == doctest::Approx(3e-23));
    CHECK(loaded.table().size() == 3);
    std::filesystem::remove(path);
    CHECK_THROWS(RamanProfile::from_csv("/nonexistent/raman.csv"));
}

TEST_CASE("SpRS limits") {
    const auto plan = edge_plan(-1.5);
    auto fiber = FiberParams::metro_default();
    CHECK(sprs_power(plan, fiber.with_length(0.0), 32e9, kCo) == 0.0);
    CHECK(sprs_power(plan, fiber.with_length(0.0), 32e9, kCounter) == 0.0);

    // alpha L = 1e-6: both closed forms reduce to sum eta B_s P L
    fiber.alpha = 1e-6 / fiber.length;
    double expect = 0.0;
    const double fi = plan.frequency(88);
    for (const auto& c : plan.classical())
        expect += raman_efficiency(fi - plan.frequency(c.slot), fiber.raman, fiber.temperature) * 32e9 * c.power_w *
                  fiber.length;
    const double fw = sprs_power(plan, fiber, 32e9, kCo);
    const double bw = sprs_power(plan, fiber, 32e9, kCounter);
    CHECK(oracle::rel_err(fw, expect) < 2e-6);
    CHECK(oracle::rel_err(bw, expect) < 2e-6);
    CHECK(oracle::rel_err(fw, bw) < 2e-6);
}

TEST_CASE("SpRS is insensitive to the guardband") {
    const auto fiber = FiberParams::metro_default();
    for (double dbm : {-4.5, -1.5, 0.5}) {
        for (auto dir : {kCo, kCounter}) {
            const double s0 = sprs_power(edge_plan(dbm, 0), fiber, 32e9, dir);
            const double s10 = sprs_power(edge_plan(dbm, 10), fiber, 32e9, dir);
            CHECK(std::abs(s10 - s0) / s0 < 1e-3);
        }
    }
}

TEST_CASE("breakdown toggles and additivity") {
    const auto plan = edge_plan(-1.5, 1);
    const auto fiber = FiberParams::metro_default();
    const auto none = total_interference(plan, fiber, 32e9, kCo, {false, false});
    CHECK(none.total == 0.0);
    CHECK(none.fwm() == 0.0);
    CHECK(none.p_sprs == 0.0);
    const auto both = total_interference(plan, fiber, 32e9, kCo, {true, true});
    const auto f = total_interference(plan, fiber, 32e9, kCo, {true, false});
    const auto s = total_interference(plan, fiber, 32e9, kCo, {false, true});
    CHECK(both.total == f.total + s.total);
    CHECK(both.total == both.p_fwm_degenerate + both.p_fwm_nondegenerate + both.p_sprs);
    CHECK(f.p_sprs == 0.0);
    CHECK(s.fwm() == 0.0);
}

TEST_CASE("fiber parameter validation") {
    auto f = FiberParams::metro_default();
    CHECK(f.alpha == doctest::Approx(db_per_km_to_per_m(0.2)));
    CHECK(f.length == 10e3);
    f.alpha = 0.0;
    CHECK_THROWS_AS(f.validate(), std::invalid_argument);
    CHECK_THROWS_AS(FiberParams::metro_default(-1.0), std::invalid_argument);
}

}

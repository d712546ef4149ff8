#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gravdec/constants.hpp"
#include "gravdec/rng.hpp"
#include "gravdec/units.hpp"

using namespace gravdec;
using namespace gravdec::units;

namespace {
constexpr double kProtonMass = 1.6726e-24; // g
}

TEST_CASE("constants: planck length consistent with G, hbar, c") {
    auto pc = PhysicalConstants::cgs_defaults();
    CHECK(pc.l_p == Catch::Approx(1.61625e-33).epsilon(1e-4));
    CHECK(std::abs(pc.l_p - std::sqrt(pc.hbar * pc.G / (pc.c * pc.c * pc.c))) <=
          1e-12 * pc.l_p);

    PhysicalConstants bad = pc;
    bad.l_p *= 1.0 + 1e-6;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = pc;
    bad.G = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("unit systems: scaled mode maps l_p to one internal length unit") {
    auto pc = PhysicalConstants::cgs_defaults();
    auto scaled = UnitSystem::scaled(pc);

    const Quantity lp{pc.l_p, dim_length};
    CHECK(scaled.to_internal(lp).value == Catch::Approx(1.0).epsilon(1e-12));

    // Zero of any dimension maps to zero.
    CHECK(scaled.to_internal({0.0, dim_energy}).value == 0.0);

    // 1 cm in Planck lengths: 1 / l_p.
    const double internal = scaled.to_internal({1.0, dim_length}).value;
    CHECK(internal == Catch::Approx(1.0 / pc.l_p).epsilon(1e-12));
    CHECK(internal == Catch::Approx(6.19e32).epsilon(0.01));

    // G, hbar, c all become unity in scaled mode.
    auto sc = scaled.constants();
    CHECK(sc.G == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(sc.hbar == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(sc.c == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(sc.l_p == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("unit systems: CGS <-> scaled round trip is identity") {
    auto pc = PhysicalConstants::cgs_defaults();
    auto scaled = UnitSystem::scaled(pc);
    rng::SplitMix64 gen(12345);

    const Dim dims[] = {dim_length,     dim_time,   dim_mass,       dim_energy,
                        dim_wavenumber, dim_action, dim_potential,  dim_G,
                        Dim::length(2, 3), Dim::length(-5, 6) + dim_mass};
    for (const Dim& d : dims) {
        for (int i = 0; i < 50; ++i) {
            const double v = std::pow(10.0, gen.uniform(-30.0, 30.0));
            const Quantity q{v, d};
            const double back = scaled.to_cgs(scaled.to_internal(q)).value;
            REQUIRE(back == Catch::Approx(v).epsilon(1e-12));
        }
    }
}

TEST_CASE("log_eval: identity and ordering") {
    const auto one = log_eval({Factor{1.0, 1.0, Dim::none()}});
    CHECK(one.mantissa == Catch::Approx(1.0));
    CHECK(one.exp10 == 0);

    const auto x = log_eval({Factor{2.5, 2.0}, Factor{4.0, -0.5}});
    CHECK(x.value() == Catch::Approx(2.5 * 2.5 / 2.0).epsilon(1e-12));

    CHECK_THROWS_AS(log_eval({Factor{-3.0, 1.0}}), DomainError);
    CHECK_THROWS_AS(log_eval({Factor{0.0, 1.0}}), DomainError);
}

TEST_CASE("log_eval: proton decoherence length scale hbar^2 / (G m^3)") {
    auto pc = PhysicalConstants::cgs_defaults();
    const auto r = log_eval({Factor{pc.hbar, 2.0, dim_action},
                             Factor{pc.G, -1.0, dim_G},
                             Factor{kProtonMass, -3.0, dim_mass}});
    // Direct evaluation is still in double range here; compare exactly.
    const double direct = pc.hbar * pc.hbar / (pc.G * std::pow(kProtonMass, 3));
    CHECK(r.value() == Catch::Approx(direct).epsilon(1e-10));
    // Order of magnitude ~ 10^25 cm.
    CHECK(r.log10_value() >= 24.0);
    CHECK(r.log10_value() <= 26.0);
    CHECK(r.dim == dim_length);
}

TEST_CASE("log_eval: proton Compton wavelength") {
    auto pc = PhysicalConstants::cgs_defaults();
    const auto r = log_eval({Factor{pc.hbar, 1.0, dim_action},
                             Factor{kProtonMass, -1.0, dim_mass},
                             Factor{pc.c, -1.0, dim_velocity}});
    const double direct = pc.hbar / (kProtonMass * pc.c);
    CHECK(r.value() == Catch::Approx(direct).epsilon(1e-10));
    CHECK(r.value() == Catch::Approx(2.1e-14).epsilon(0.01));
    CHECK(r.dim == dim_length);
}

TEST_CASE("log_eval agrees with direct evaluation on random in-range products") {
    rng::SplitMix64 gen(777);
    for (int trial = 0; trial < 10000; ++trial) {
        const int nf = 1 + static_cast<int>(gen.next_u64() % 5);
        std::vector<Factor> fs;
        double direct = 1.0;
        for (int i = 0; i < nf; ++i) {
            const double v = std::pow(10.0, gen.uniform(-20.0, 20.0));
            const double p = std::round(gen.uniform(-3.0, 3.0) * 12.0) / 12.0;
            fs.push_back({v, p, Dim::none()});
            direct *= std::pow(v, p);
        }
        if (!std::isfinite(direct) || direct == 0.0) continue;
        const auto r = log_eval(std::span<const Factor>(fs));
        REQUIRE(r.value() == Catch::Approx(direct).epsilon(1e-10));
        REQUIRE(r.mantissa >= 1.0);
        REQUIRE(r.mantissa < 10.0);
    }
}

TEST_CASE("log_eval handles magnitudes far outside double range") {
    // tau_c-like chains: ~10^53 squared and cubed stay representable
    // as (mantissa, exponent) pairs.
    const auto big = log_eval({Factor{9.9e52, 4.0}});
    CHECK(big.exp10 == 211);
    CHECK(big.mantissa == Catch::Approx(std::pow(9.9, 4.0) / 1e3).epsilon(1e-9));
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "gravdec/mass_density.hpp"

using namespace gravdec;
using namespace gravdec::decoherence;
using std::numbers::pi;

TEST_CASE("form factors: normalization and limits") {
    auto ball = MassDensity::uniform_ball(2.5, 0.7);
    auto gauss = MassDensity::gaussian(1.2, 0.3);
    auto pt = MassDensity::point(3.0);

    CHECK(ball.form_factor(0.0) == Catch::Approx(2.5));
    CHECK(gauss.form_factor(0.0) == Catch::Approx(1.2));
    CHECK(pt.form_factor(0.0) == Catch::Approx(3.0));
    CHECK(pt.form_factor(123.0) == Catch::Approx(3.0));

    // |g(k)| <= g(0) over a wide k range.
    for (double k = 0.0; k < 400.0; k += 0.37) {
        REQUIRE(std::abs(ball.form_factor(k)) <= ball.form_factor(0.0) * (1.0 + 1e-12));
        REQUIRE(std::abs(gauss.form_factor(k)) <= gauss.form_factor(0.0) * (1.0 + 1e-12));
    }
}

TEST_CASE("uniform ball form factor: small-kR expansion 1 - (kR)^2/10") {
    const double R = 0.9, m = 1.0;
    auto d = MassDensity::uniform_ball(m, R);
    for (double kR : {1e-3, 3e-3, 1e-2, 3e-2}) {
        const double k = kR / R;
        const double expect = m * (1.0 - kR * kR / 10.0 + std::pow(kR, 4) / 280.0);
        REQUIRE(d.form_factor(k) == Catch::Approx(expect).epsilon(1e-10));
    }
    // Series and trig branches agree across the switch point.
    const double lo = m * (1.0 - 0.0099 * 0.0099 / 10.0 + std::pow(0.0099, 4) / 280.0);
    CHECK(d.form_factor(0.0099 / R) == Catch::Approx(lo).epsilon(1e-12));
    CHECK(d.form_factor(0.101 / R) ==
          Catch::Approx(3.0 * (std::sin(0.101) - 0.101 * std::cos(0.101)) / std::pow(0.101, 3))
              .epsilon(1e-12));
}

TEST_CASE("gaussian form factor halves at k = sqrt(2 ln 2)/sigma") {
    const double sigma = 0.42;
    auto d = MassDensity::gaussian(2.0, sigma);
    const double k_half = std::sqrt(2.0 * std::log(2.0)) / sigma;
    CHECK(d.form_factor(k_half) == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("density integrates to total mass") {
    CHECK(MassDensity::uniform_ball(3.2, 1.7).mass_by_quadrature() ==
          Catch::Approx(3.2).epsilon(1e-8));
    CHECK(MassDensity::gaussian(0.8, 2.4).mass_by_quadrature() ==
          Catch::Approx(0.8).epsilon(1e-8));
}

TEST_CASE("self integral closed forms") {
    // Uniform ball: (6/5) m^2 / R.
    auto ball = MassDensity::uniform_ball(2.0, 0.5);
    CHECK(ball.self_integral() == Catch::Approx(1.2 * 4.0 / 0.5).epsilon(1e-12));

    // Gaussian: m^2 / (sigma sqrt(pi)).
    auto gauss = MassDensity::gaussian(3.0, 0.25);
    CHECK(gauss.self_integral() == Catch::Approx(9.0 / (0.25 * std::sqrt(pi))).epsilon(1e-12));

    CHECK_THROWS_AS(MassDensity::point(1.0).self_integral(), RegularizationError);
}

TEST_CASE("disjoint spheres interact as point masses") {
    auto ball = MassDensity::uniform_ball(2.0, 0.5);
    for (double d : {1.0, 1.7, 4.0, 25.0}) {
        REQUIRE(ball.mutual_integral(d) == Catch::Approx(4.0 / d).epsilon(1e-12));
    }
    // Delta(a) = 2 [ (6/5) m^2/R - m^2/a ] for a >= 2R.
    const double a = 3.0;
    CHECK(ball.pair_functional(a) ==
          Catch::Approx(2.0 * (1.2 * 4.0 / 0.5 - 4.0 / a)).epsilon(1e-12));
    CHECK(ball.pair_functional(0.0) == 0.0);
}

TEST_CASE("overlapping equal spheres: closed form vs bipolar quadrature") {
    const double R = 0.8;
    for (double d : {0.05, 0.3, 0.8, 1.2, 1.55}) {
        const double closed = detail::pair_mutual(MassDensity::Kind::UniformBall, R,
                                                  MassDensity::Kind::UniformBall, R, d);
        const double quadr = detail::pair_mutual_quadrature(
            MassDensity::Kind::UniformBall, R, MassDensity::Kind::UniformBall, R, d);
        REQUIRE(closed == Catch::Approx(quadr).epsilon(1e-8));
    }
}

TEST_CASE("gaussian pair: erf closed form vs bipolar quadrature") {
    const double s1 = 0.4, s2 = 0.7;
    for (double d : {0.1, 0.5, 1.3, 4.0}) {
        const double closed = detail::pair_mutual(MassDensity::Kind::Gaussian, s1,
                                                  MassDensity::Kind::Gaussian, s2, d);
        const double quadr = detail::pair_mutual_quadrature(
            MassDensity::Kind::Gaussian, s1, MassDensity::Kind::Gaussian, s2, d);
        REQUIRE(closed == Catch::Approx(quadr).epsilon(1e-8));
    }
}

TEST_CASE("composite density reduces to its parts") {
    // A composite with one ball at the origin behaves as the plain ball.
    auto plain = MassDensity::uniform_ball(2.0, 0.5);
    auto comp = MassDensity::composite(
        {{MassDensity::Kind::UniformBall, 2.0, 0.5, {0.0, 0.0, 0.0}}});
    CHECK(comp.total_mass() == Catch::Approx(2.0));
    for (double k : {0.0, 0.3, 2.0, 11.0})
        REQUIRE(comp.form_factor_sq_iso(k) ==
                Catch::Approx(plain.form_factor_sq_iso(k)).epsilon(1e-12));
    for (double a : {0.0, 0.4, 2.0})
        for (double k : {0.1, 1.0, 7.0})
            REQUIRE(comp.variance_weight(k, a) ==
                    Catch::Approx(plain.variance_weight(k, a)).epsilon(1e-12));
    CHECK(comp.self_integral() == Catch::Approx(plain.self_integral()).epsilon(1e-10));
    CHECK(comp.mutual_integral(3.0) == Catch::Approx(plain.mutual_integral(3.0)).epsilon(1e-10));
}

TEST_CASE("two-particle composite: pair structure in the form factor") {
    // Two gaussian lumps distance L apart along x.
    const double L = 2.0, sigma = 0.2, m = 1.0;
    auto comp = MassDensity::composite({
        {MassDensity::Kind::Gaussian, m, sigma, {-L / 2.0, 0.0, 0.0}},
        {MassDensity::Kind::Gaussian, m, sigma, {L / 2.0, 0.0, 0.0}},
    });
    // <|g|^2> = sum_ij m_i m_j F_i F_j sinc(k d_ij).
    for (double k : {0.2, 0.9, 3.1}) {
        const double F = std::exp(-0.5 * k * k * sigma * sigma);
        const double expect = 2.0 * F * F * (1.0 + sinc(k * L));
        REQUIRE(comp.form_factor_sq_iso(k) == Catch::Approx(expect).epsilon(1e-12));
    }
    CHECK(comp.extent() == Catch::Approx(L / 2.0 + sigma));
    CHECK(!comp.has_point_member());
    // Mutual integral against hand-built pair sum (all pairs disjoint-ish).
    const double a = 10.0;
    double hand = 0.0;
    for (double oi : {-L / 2.0, L / 2.0})
        for (double oj : {-L / 2.0, L / 2.0}) {
            const double d = std::abs(oi - (oj + a));
            hand += m * m * std::erf(d / (2.0 * sigma)) / d;
        }
    CHECK(comp.mutual_integral(a) == Catch::Approx(hand).epsilon(1e-10));
}

TEST_CASE("variance weight vanishes at zero displacement") {
    auto ball = MassDensity::uniform_ball(1.5, 0.3);
    for (double k : {0.1, 1.0, 10.0}) REQUIRE(ball.variance_weight(k, 0.0) == 0.0);
    auto comp = MassDensity::composite({
        {MassDensity::Kind::Gaussian, 1.0, 0.2, {-0.5, 0.0, 0.0}},
        {MassDensity::Kind::Gaussian, 1.0, 0.2, {0.5, 0.0, 0.0}},
    });
    for (double k : {0.1, 1.0, 10.0})
        REQUIRE(comp.variance_weight(k, 0.0) == Catch::Approx(0.0).margin(1e-14));
}

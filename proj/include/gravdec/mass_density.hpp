#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "gravdec/errors.hpp"
#include "gravdec/quadrature.hpp"
#include "gravdec/vec3.hpp"

namespace gravdec::decoherence {

using gravdec::Vec3;

inline double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

// 1 - sinc(x) without cancellation at small x.
inline double one_minus_sinc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-2) {
        const double x2 = x * x;
        return x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
    }
    return 1.0 - std::sin(x) / x;
}

// 1 - cos(y) = 2 sin^2(y/2), exact at all magnitudes.
inline double one_minus_cos(double y) {
    const double s = std::sin(0.5 * y);
    return 2.0 * s * s;
}

// Unit-mass form factors (Fourier transforms of the normalized density).
namespace shape {

inline double ball(double kR) {
    const double x = std::abs(kR);
    if (x < 0.1) {
        const double x2 = x * x;
        return 1.0 - x2 / 10.0 + x2 * x2 / 280.0 - x2 * x2 * x2 / 15120.0;
    }
    return 3.0 * (std::sin(x) - x * std::cos(x)) / (x * x * x);
}

inline double gaussian(double ksigma) { return std::exp(-0.5 * ksigma * ksigma); }

// 1 - F^2 without cancellation at small argument.
inline double ball_one_minus_sq(double x) {
    if (std::abs(x) < 0.1) {
        const double x2 = x * x;
        // 1 - F = x^2/10 - x^4/280 + x^6/15120 ...
        const double omf = x2 / 10.0 - x2 * x2 / 280.0 + x2 * x2 * x2 / 15120.0;
        return omf * (2.0 - omf);
    }
    const double F = ball(x);
    return (1.0 - F) * (1.0 + F);
}

inline double gaussian_one_minus_sq(double x) { return -std::expm1(-x * x); }

} // namespace shape

// Probe/object mass distribution. Rigid displacement semantics: a
// configuration is the whole density translated, so two configurations a
// apart couple through |g(k)|^2 (1 - cos(k.a)).
class MassDensity {
public:
    enum class Kind { Point, UniformBall, Gaussian, Composite };

    struct Member {
        Kind kind = Kind::Point; // Point, UniformBall or Gaussian
        double mass = 0.0;
        double size = 0.0; // R for balls, sigma for gaussians, unused for points
        Vec3 offset{};
    };

    static MassDensity point(double m) { return MassDensity(Kind::Point, m, 0.0); }
    static MassDensity uniform_ball(double m, double R) {
        if (!(R > 0.0)) throw DomainError("uniform_ball: R must be > 0");
        return MassDensity(Kind::UniformBall, m, R);
    }
    static MassDensity gaussian(double m, double sigma) {
        if (!(sigma > 0.0)) throw DomainError("gaussian: sigma must be > 0");
        return MassDensity(Kind::Gaussian, m, sigma);
    }
    static MassDensity composite(std::vector<Member> members) {
        if (members.empty()) throw DomainError("composite: no members");
        MassDensity d(Kind::Composite, 0.0, 0.0);
        d.members_ = std::move(members);
        for (const auto& mem : d.members_) {
            if (mem.kind == Kind::Composite)
                throw DomainError("composite members cannot nest");
            d.mass_ += mem.mass;
        }
        return d;
    }

    Kind kind() const { return kind_; }
    double total_mass() const { return mass_; }
    double size() const { return size_; }
    const std::vector<Member>& members() const { return members_; }

    // Characteristic linear extent used for regime classification; 0 for a
    // bare point.
    double extent() const {
        switch (kind_) {
        case Kind::Point: return 0.0;
        case Kind::UniformBall: return size_;
        case Kind::Gaussian: return size_;
        case Kind::Composite: {
            double r = 0.0;
            for (const auto& m : members_) r = std::max(r, m.offset.norm() + member_extent(m));
            return r;
        }
        }
        return 0.0;
    }

    bool has_point_member() const {
        if (kind_ == Kind::Point) return true;
        for (const auto& m : members_)
            if (m.kind == Kind::Point) return true;
        return false;
    }

    // --- Fourier side -------------------------------------------------------

    // g(k) for radial densities (real). Composite densities are anisotropic;
    // use form_factor_sq_iso / variance_weight for those.
    double form_factor(double k) const {
        if (k < 0.0) throw DomainError("form_factor: k must be >= 0");
        switch (kind_) {
        case Kind::Point: return mass_;
        case Kind::UniformBall: return mass_ * shape::ball(k * size_);
        case Kind::Gaussian: return mass_ * shape::gaussian(k * size_);
        case Kind::Composite:
            throw DomainError("form_factor: composite is anisotropic, use form_factor_sq_iso");
        }
        return 0.0;
    }

    // Angle average of |g(k)|^2 over wavevector directions.
    double form_factor_sq_iso(double k) const {
        if (kind_ != Kind::Composite) {
            const double g = form_factor(k);
            return g * g;
        }
        double s = 0.0;
        for (const auto& a : members_)
            for (const auto& b : members_) {
                const double d = (a.offset - b.offset).norm();
                s += a.mass * b.mass * member_ff(a, k) * member_ff(b, k) * sinc(k * d);
            }
        return s;
    }

    // Angle average of |g(k)|^2 (1 - cos k.a) for a rigid displacement by
    // `a` along `axis`; this is the coupling weight in every phase-variance
    // integrand.
    double variance_weight(double k, double a, Vec3 axis = {1.0, 0.0, 0.0}) const {
        if (kind_ != Kind::Composite) {
            const double g2 = form_factor_sq_iso(k);
            return g2 * one_minus_sinc(k * a);
        }
        const double an = axis.norm();
        if (!(an > 0.0)) throw DomainError("variance_weight: zero displacement axis");
        const Vec3 shift = (a / an) * axis;
        double s = 0.0;
        for (const auto& p : members_)
            for (const auto& q : members_) {
                const Vec3 d = p.offset - q.offset;
                // sinc(kd) - (1/2)[sinc(k|d+a|) + sinc(k|d-a|)] rewritten in
                // 1 - sinc terms; the constant parts cancel exactly.
                const double w = 0.5 * one_minus_sinc(k * (d + shift).norm()) +
                                 0.5 * one_minus_sinc(k * (d - shift).norm()) -
                                 one_minus_sinc(k * d.norm());
                s += p.mass * q.mass * member_ff(p, k) * member_ff(q, k) * w;
            }
        return s;
    }

    // --- real-space Coulomb-type integrals -----------------------------------
    //
    // mutual_integral(d) = W(d) = integral of rho(x) rho(x' - d) / |x - x'|,
    // the building block of the D-model decoherence functional
    // Delta(a) = 2 [W(0) - W(a)].

    double self_integral() const { return mutual_integral_vec({0.0, 0.0, 0.0}); }

    double mutual_integral(double d, Vec3 axis = {1.0, 0.0, 0.0}) const {
        const double an = axis.norm();
        if (!(an > 0.0)) throw DomainError("mutual_integral: zero displacement axis");
        return mutual_integral_vec((d / an) * axis);
    }

    // Delta(a) = 2 [W(0) - W(a)]. Radial shapes use cancellation-free closed
    // forms (the direct difference loses every digit once a << size).
    double pair_functional(double a, Vec3 axis = {1.0, 0.0, 0.0}) const {
        if (a == 0.0) return 0.0;
        if (kind_ != Kind::Composite)
            return 2.0 * mass_ * mass_ * radial_pair_delta(a);
        return 2.0 * (self_integral() - mutual_integral(a, axis));
    }

    // Mass recovered by radial quadrature; density bookkeeping check.
    double mass_by_quadrature() const {
        switch (kind_) {
        case Kind::Point: return mass_;
        case Kind::UniformBall:
        case Kind::Gaussian: {
            auto integrand = [&](double r) {
                return 4.0 * std::numbers::pi * r * r * radial_density(*this, r);
            };
            return quad::adaptive(integrand, 0.0, radial_support(*this), {1e-12, 0.0, 40000});
        }
        case Kind::Composite: {
            double s = 0.0;
            for (const auto& m : members_) s += MassDensity(m.kind, m.mass, m.size).mass_by_quadrature();
            return s;
        }
        }
        return 0.0;
    }

private:
    MassDensity(Kind k, double m, double s) : kind_(k), mass_(m), size_(s) {
        if (!(m >= 0.0)) throw DomainError("mass must be >= 0");
    }

    static double member_extent(const Member& m) {
        return m.kind == Kind::Point ? 0.0 : m.size;
    }

    static double member_ff(const Member& m, double k) {
        switch (m.kind) {
        case Kind::Point: return 1.0;
        case Kind::UniformBall: return shape::ball(k * m.size);
        case Kind::Gaussian: return shape::gaussian(k * m.size);
        default: throw DomainError("bad member kind");
        }
    }

    static double radial_density(const MassDensity& d, double r) {
        switch (d.kind_) {
        case Kind::UniformBall:
            return r <= d.size_ ? 3.0 * d.mass_ / (4.0 * std::numbers::pi * d.size_ * d.size_ * d.size_)
                                : 0.0;
        case Kind::Gaussian: {
            const double s2 = d.size_ * d.size_;
            return d.mass_ * std::exp(-0.5 * r * r / s2) /
                   std::pow(2.0 * std::numbers::pi * s2, 1.5);
        }
        default: throw DomainError("radial_density: not a smooth radial shape");
        }
    }

    static double radial_support(const MassDensity& d) {
        return d.kind_ == Kind::UniformBall ? d.size_ : 10.0 * d.size_;
    }

    double mutual_integral_vec(Vec3 shift) const;
    double radial_pair_delta(double a) const;

    Kind kind_;
    double mass_;
    double size_;
    std::vector<Member> members_;
};

namespace detail {

// Coulomb-style potential of a unit-mass radial shape at distance s.
inline double shape_potential(MassDensity::Kind kind, double size, double s) {
    switch (kind) {
    case MassDensity::Kind::Point:
        if (s == 0.0) throw RegularizationError("point-point self term diverges");
        return 1.0 / s;
    case MassDensity::Kind::UniformBall: {
        const double R = size;
        if (s >= R) return 1.0 / s;
        return (3.0 * R * R - s * s) / (2.0 * R * R * R);
    }
    case MassDensity::Kind::Gaussian: {
        const double u = s / (size * std::numbers::sqrt2);
        if (u < 1e-6) return std::sqrt(2.0 / std::numbers::pi) / size * (1.0 - u * u / 3.0);
        return std::erf(u) / s;
    }
    default: throw DomainError("shape_potential: bad kind");
    }
}

// integral of s * potential(s) ds on [lo, hi]; analytic per shape, used by the
// bipolar reduction of the 6D mutual integral to one radial quadrature.
inline double shape_potential_s_integral(MassDensity::Kind kind, double size, double lo, double hi) {
    switch (kind) {
    case MassDensity::Kind::Point:
        return hi - lo;
    case MassDensity::Kind::UniformBall: {
        const double R = size;
        double acc = 0.0;
        const double hi_in = std::min(hi, R);
        if (hi_in > lo) {
            auto prim = [&](double s) {
                return (1.5 * R * R * s * s - 0.25 * s * s * s * s) / (2.0 * R * R * R);
            };
            acc += prim(hi_in) - prim(lo);
        }
        const double lo_out = std::max(lo, R);
        if (hi > lo_out) acc += hi - lo_out;
        return acc;
    }
    case MassDensity::Kind::Gaussian: {
        // integral of erf(s/(sigma sqrt2)) ds.
        const double a = size * std::numbers::sqrt2;
        auto prim = [&](double s) {
            const double u = s / a;
            return s * std::erf(u) + a * std::exp(-u * u) * std::numbers::inv_sqrtpi;
        };
        return prim(hi) - prim(lo);
    }
    default: throw DomainError("shape_potential_s_integral: bad kind");
    }
}

// Mutual Coulomb integral of two radial unit-mass shapes, centers d apart,
// via the bipolar 1D reduction
//   W(d) = (2 pi / d) int r rho1(r) [ int_{|d-r|}^{d+r} s Phi2(s) ds ] dr.
inline double pair_mutual_quadrature(MassDensity::Kind k1, double s1, MassDensity::Kind k2,
                                     double s2, double d) {
    if (!(d > 0.0)) throw DomainError("pair_mutual_quadrature: d must be > 0 here");
    const double support = k1 == MassDensity::Kind::UniformBall ? s1 : 10.0 * s1;
    auto rho1 = [&](double r) {
        if (k1 == MassDensity::Kind::UniformBall)
            return r <= s1 ? 3.0 / (4.0 * std::numbers::pi * s1 * s1 * s1) : 0.0;
        const double v = s1 * s1;
        return std::exp(-0.5 * r * r / v) / std::pow(2.0 * std::numbers::pi * v, 1.5);
    };
    auto integrand = [&](double r) {
        if (r <= 0.0) return 0.0;
        return r * rho1(r) *
               shape_potential_s_integral(k2, s2, std::abs(d - r), d + r);
    };
    // Kink where |d - r| changes branch; split there.
    double acc = 0.0;
    if (d < support) {
        acc += quad::adaptive(integrand, 0.0, d, {1e-11, 0.0, 60000});
        acc += quad::adaptive(integrand, d, support, {1e-11, 0.0, 60000});
    } else {
        acc = quad::adaptive(integrand, 0.0, support, {1e-11, 0.0, 60000});
    }
    return 2.0 * std::numbers::pi / d * acc;
}

// Concentric case: W(0) = 4 pi int r^2 rho1(r) Phi2(r) dr.
inline double pair_mutual_concentric(MassDensity::Kind k1, double s1, MassDensity::Kind k2,
                                     double s2) {
    const double support = k1 == MassDensity::Kind::UniformBall ? s1 : 10.0 * s1;
    auto rho1 = [&](double r) {
        if (k1 == MassDensity::Kind::UniformBall)
            return r <= s1 ? 3.0 / (4.0 * std::numbers::pi * s1 * s1 * s1) : 0.0;
        const double v = s1 * s1;
        return std::exp(-0.5 * r * r / v) / std::pow(2.0 * std::numbers::pi * v, 1.5);
    };
    auto integrand = [&](double r) {
        return 4.0 * std::numbers::pi * r * r * rho1(r) * shape_potential(k2, s2, r);
    };
    return quad::adaptive(integrand, 0.0, support, {1e-11, 0.0, 60000});
}

// Mutual Coulomb integral of two radial unit-mass shapes; closed forms where
// exact, bipolar quadrature otherwise.
inline double pair_mutual(MassDensity::Kind k1, double s1, MassDensity::Kind k2, double s2,
                          double d) {
    using Kind = MassDensity::Kind;
    auto rank = [](Kind k) { return k == Kind::Point ? 0 : (k == Kind::UniformBall ? 1 : 2); };
    if (rank(k1) > rank(k2)) {
        std::swap(k1, k2);
        std::swap(s1, s2);
    }

    if (k1 == Kind::Point) {
        if (k2 == Kind::Point) {
            if (d == 0.0)
                throw RegularizationError("point-point self term diverges; supply a finite size");
            return 1.0 / d;
        }
        return shape_potential(k2, s2, d); // finite at d = 0 for smooth shapes
    }

    if (k1 == Kind::Gaussian) { // gauss x gauss
        const double se = std::sqrt(s1 * s1 + s2 * s2); // convolved width
        if (d < 1e-8 * se) return std::sqrt(2.0 / std::numbers::pi) / se;
        return std::erf(d / (se * std::numbers::sqrt2)) / d;
    }

    if (k2 == Kind::UniformBall) { // ball x ball
        if (d >= s1 + s2) return 1.0 / d; // disjoint spheres act as points
        if (s1 == s2) {
            const double R = s1;
            const double x = d / R;
            // Overlapping equal spheres: standard uniformly-charged-spheres
            // result, continuous with 1/d and its slope at x = 2.
            return (6.0 / 5.0 - 0.5 * x * x + (3.0 / 16.0) * x * x * x -
                    (1.0 / 160.0) * x * x * x * x * x) / R;
        }
        if (d == 0.0) return pair_mutual_concentric(k1, s1, k2, s2);
        return pair_mutual_quadrature(k1, s1, k2, s2, d);
    }

    // ball x gaussian
    if (d == 0.0) return pair_mutual_concentric(k1, s1, k2, s2);
    return pair_mutual_quadrature(k1, s1, k2, s2, d);
}

} // namespace detail

// [W(0) - W(a)] / m^2 for one radial shape, stable down to a -> 0.
inline double MassDensity::radial_pair_delta(double a) const {
    switch (kind_) {
    case Kind::Point:
        throw RegularizationError("point density pair functional diverges; supply a finite size");
    case Kind::UniformBall: {
        const double R = size_;
        const double x = a / R;
        if (x >= 2.0) return 1.2 / R - 1.0 / a;
        // 6/5 - W(a) R / m^2 for overlapping equal spheres: the constant
        // terms cancel algebraically.
        return (0.5 * x * x - (3.0 / 16.0) * x * x * x + (1.0 / 160.0) * x * x * x * x * x) / R;
    }
    case Kind::Gaussian: {
        // W(a) = m^2 erf(y)/a with y = a/(2 sigma); W(0) = m^2/(sigma sqrt(pi)).
        const double y = a / (2.0 * size_);
        if (y < 0.5) {
            // 1 - erf(y) sqrt(pi)/(2y) = sum_{n>=1} (-1)^{n+1} y^{2n} / (n! (2n+1)).
            double sum = 0.0;
            const double y2 = y * y;
            double fact = 1.0;
            for (int n = 1; n <= 24; ++n) {
                fact *= n;
                const double t = std::pow(y2, n) / (fact * (2.0 * n + 1.0));
                sum += (n % 2 == 1) ? t : -t;
                if (t < 1e-18 * std::max(sum, 1e-300)) break;
            }
            return sum / (size_ * std::sqrt(std::numbers::pi));
        }
        return 1.0 / (size_ * std::sqrt(std::numbers::pi)) - std::erf(y) / a;
    }
    default:
        throw DomainError("radial_pair_delta: composite handled elsewhere");
    }
}

inline double MassDensity::mutual_integral_vec(Vec3 shift) const {
    if (kind_ != Kind::Composite) {
        const double d = shift.norm();
        if (kind_ == Kind::Point && d == 0.0)
            throw RegularizationError(
                "point density self integral diverges; supply a finite size");
        return mass_ * mass_ * detail::pair_mutual(kind_, size_, kind_, size_, d);
    }
    double s = 0.0;
    for (const auto& p : members_)
        for (const auto& q : members_) {
            const double d = (p.offset - (q.offset + shift)).norm();
            s += p.mass * q.mass * detail::pair_mutual(p.kind, p.size, q.kind, q.size, d);
        }
    return s;
}

} // namespace gravdec::decoherence

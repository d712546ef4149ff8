#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "gravdec/constants.hpp"
#include "gravdec/errors.hpp"
#include "gravdec/mass_density.hpp"
#include "gravdec/quadrature.hpp"
#include "gravdec/units.hpp"

namespace gravdec::decoherence {

struct Band {
    double k_min = 0.0;
    double k_max = std::numeric_limits<double>::infinity();
};

struct PhaseVariance {
    double value = 0.0;       // radians^2; may over/underflow for extreme inputs
    double log10_value = 0.0; // finite whenever the variance is nonzero
    bool saturated = false;   // time factor replaced by its mean + endpoint term
};

namespace detail {

// Reduced integrand of the colored-noise phase variance in u = k a,
//   I = int u^{-5/3} [w(u/a, a context) / M^2] (1 - cos(theta u)) du,
// theta = c t / a, so that
//   Var = [c^2 M^2 l_p^{4/3} a^{2/3} / (pi^2 hbar^2)] I.
class ReducedIntegrand {
public:
    ReducedIntegrand(const MassDensity& d, double a, Vec3 axis)
        : d_(d), a_(a), axis_(axis), mass2_(d.total_mass() * d.total_mass()) {
        if (!(mass2_ > 0.0)) throw DomainError("phase variance: zero total mass");
    }

    double envelope(double u) const {
        return std::pow(u, -5.0 / 3.0) * d_.variance_weight(u / a_, a_, axis_) / mass2_;
    }

    // u positions of weight structure (sinc knee, form-factor knees, member
    // separations) used as quadrature breakpoints.
    std::vector<double> structure_cuts() const {
        std::vector<double> b{1.0, std::numbers::pi};
        auto add = [&](double s) {
            if (s > 0.0 && std::isfinite(s)) b.push_back(a_ / s);
        };
        if (d_.kind() == MassDensity::Kind::Composite) {
            for (const auto& m : d_.members()) {
                add(m.size);
                for (const auto& n : d_.members()) add((m.offset - n.offset).norm());
            }
        } else {
            add(d_.size());
        }
        std::sort(b.begin(), b.end());
        b.erase(std::unique(b.begin(), b.end()), b.end());
        return b;
    }

    // u beyond which all smooth form factors are negligible; infinity when a
    // point member keeps the envelope alive.
    double smooth_cutoff() const {
        double cut = 0.0;
        auto member_cut = [&](MassDensity::Kind k, double size) {
            if (k == MassDensity::Kind::UniformBall) return 400.0 * a_ / size;
            if (k == MassDensity::Kind::Gaussian) return 8.0 * a_ / size;
            return std::numeric_limits<double>::infinity();
        };
        if (d_.kind() == MassDensity::Kind::Composite) {
            for (const auto& m : d_.members()) cut = std::max(cut, member_cut(m.kind, m.size));
        } else {
            cut = member_cut(d_.kind(), d_.size());
        }
        return cut;
    }

    // Fastest structural oscillation frequency in u (ball form factors beat
    // at s/a; the sinc knee at frequency 1).
    double structure_freq() const {
        double f = 1.0;
        auto upd = [&](MassDensity::Kind k, double size) {
            if (k == MassDensity::Kind::UniformBall && size > 0.0) f = std::max(f, size / a_);
        };
        if (d_.kind() == MassDensity::Kind::Composite) {
            for (const auto& m : d_.members()) upd(m.kind, m.size);
        } else {
            upd(d_.kind(), d_.size());
        }
        return f;
    }

    // Largest real-space structure scale; saturation must compare c t against
    // this, not only against a.
    double max_length_scale() const {
        double s = a_;
        if (d_.kind() == MassDensity::Kind::Composite) {
            for (const auto& m : d_.members()) s = std::max(s, m.size);
        } else {
            s = std::max(s, d_.size());
        }
        return s;
    }

    bool has_point() const { return d_.has_point_member(); }
    bool multi_member() const {
        return d_.kind() == MassDensity::Kind::Composite && d_.members().size() > 1;
    }

private:
    const MassDensity& d_;
    double a_;
    Vec3 axis_;
    double mass2_;
};

// Piecewise integration: a leading [0, b] piece under the cube-root
// substitution (integrand ~ u^{1/3}), elsewhere adaptive, switching to fixed
// panels (3 per half period) where the piece spans many oscillations.
template <class Env>
inline double integrate_pieces(const Env& env, std::vector<double> cuts, double lo, double hi,
                               double osc_freq) {
    cuts.push_back(lo);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::remove_if(cuts.begin(), cuts.end(),
                              [&](double c) { return c < lo || c > hi || !std::isfinite(c); }),
               cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (!(b > a)) continue;
        if (a == 0.0) {
            auto g = [&](double v) {
                const double u = b * v * v * v;
                return u == 0.0 ? 0.0 : 3.0 * b * v * v * env(u);
            };
            total += quad::adaptive(g, 0.0, 1.0, {1e-9, 0.0, 60000});
        } else if ((b - a) * osc_freq > 6.0 * std::numbers::pi) {
            const std::size_t panels = 2 + static_cast<std::size_t>(std::ceil(
                                               3.0 * (b - a) * osc_freq / std::numbers::pi));
            if (panels > 400000)
                throw NumericalError("phase variance: oscillation budget exceeded; "
                                     "restrict the band");
            total += quad::composite_gauss(env, a, b, panels);
        } else {
            total += quad::adaptive(env, a, b, {1e-9, 0.0, 60000});
        }
    }
    return total;
}

} // namespace detail

namespace detail {

// Tail integrals over [U, inf) for one radial shape with form factor squared
// G2(u) = F^2(u r), r = size/a. Covers the bare point as G2 = 1.
struct SmoothTail {
    MassDensity::Kind kind = MassDensity::Kind::Point;
    double r = 0.0; // size / a

    double G2(double u) const {
        switch (kind) {
        case MassDensity::Kind::Point: return 1.0;
        case MassDensity::Kind::UniformBall: {
            const double F = shape::ball(u * r);
            return F * F;
        }
        case MassDensity::Kind::Gaussian: {
            const double F = shape::gaussian(u * r);
            return F * F;
        }
        default: throw DomainError("SmoothTail: unsupported kind");
        }
    }

    double one_minus_G2(double x) const {
        switch (kind) {
        case MassDensity::Kind::Point: return 0.0;
        case MassDensity::Kind::UniformBall: return shape::ball_one_minus_sq(x);
        case MassDensity::Kind::Gaussian: return shape::gaussian_one_minus_sq(x);
        default: throw DomainError("SmoothTail: unsupported kind");
        }
    }

    // T_a = int_U^inf u^{-5/3} G2(u) du.
    double monotone_part(double U) const {
        if (kind == MassDensity::Kind::Point) return 1.5 * std::pow(U, -2.0 / 3.0);
        const double x0 = U * r;
        const double x_cut = kind == MassDensity::Kind::UniformBall ? 400.0 : 8.0;
        if (x0 >= x_cut) return 0.0;
        const double xs = std::min(0.5, x_cut);
        double acc = 0.0;
        if (x0 < xs) {
            // 1 piece minus the (1 - F^2) correction, both exact.
            acc += 1.5 * (std::pow(x0, -2.0 / 3.0) - std::pow(xs, -2.0 / 3.0));
            auto f = [&](double x) { return std::pow(x, -5.0 / 3.0) * one_minus_G2(x); };
            acc -= quad::adaptive(f, x0, xs, {1e-10, 0.0, 60000});
        }
        const double xa = std::max(x0, xs);
        if (xa < x_cut) {
            auto f = [&](double x) {
                const double F = kind == MassDensity::Kind::UniformBall
                                     ? shape::ball(x)
                                     : shape::gaussian(x);
                return std::pow(x, -5.0 / 3.0) * F * F;
            };
            const std::size_t panels =
                8 + static_cast<std::size_t>(std::ceil(3.0 * (x_cut - xa) / std::numbers::pi));
            acc += quad::composite_gauss(f, xa, x_cut, panels);
        }
        return std::pow(r, 2.0 / 3.0) * acc;
    }

    // int_U^inf u^{-p} G2(u) sin(w u + phase) du by accelerated half periods.
    double trig_part(double p, double w, double phase, double U) const {
        auto f = [&](double u) {
            return std::pow(u, -p) * G2(u) * std::sin(w * u + phase);
        };
        const double n0 = std::ceil((w * U + phase) / std::numbers::pi + 1e-12);
        const double first_zero = (n0 * std::numbers::pi - phase) / w;
        return quad::oscillatory_tail(f, U, first_zero, std::numbers::pi / w, 48);
    }
};

} // namespace detail

// Reduced integral I(a, t); exposed separately so tests can target the
// dimensionless machinery directly.
inline double k_phase_variance_reduced(const MassDensity& d, double a, double t,
                                       const PhysicalConstants& pc, Band band = {},
                                       Vec3 axis = {1.0, 0.0, 0.0},
                                       bool* saturated_out = nullptr) {
    detail::ReducedIntegrand red(d, a, axis);
    const double theta = pc.c * std::abs(t) / a;
    const double u_lo = std::max(0.0, band.k_min * a);
    double u_hi = std::isfinite(band.k_max) ? band.k_max * a
                                            : std::numeric_limits<double>::infinity();

    // Saturation: every structural scale has been crossed by many wave
    // periods, c t >= 2000 max(a, sizes).
    const bool saturated = pc.c * std::abs(t) >= 2000.0 * red.max_length_scale();
    if (saturated_out) *saturated_out = saturated;

    auto cuts = red.structure_cuts();
    const double smooth_cut = red.smooth_cutoff();

    double tail = 0.0;
    if (!std::isfinite(u_hi)) {
        const double U = std::max(48.0 * std::numbers::pi, 2.0 * u_lo);
        if (d.kind() == MassDensity::Kind::Composite) {
            if (red.has_point())
                throw DomainError("k_phase_variance: infinite band with point-containing "
                                  "composites is unsupported; supply k_max");
            if (smooth_cut > 4.0e4)
                throw DomainError("k_phase_variance: separation too large for infinite-band "
                                  "composite evaluation; supply k_max");
            u_hi = smooth_cut;
        } else if (smooth_cut <= U) {
            u_hi = smooth_cut; // smooth envelope dead before the window edge
        } else {
            if (d.kind() == MassDensity::Kind::Point && !saturated && theta < 1e-3 &&
                u_lo == 0.0) {
                // Deep pre-saturation for a bare point: the integral lives at
                // u ~ 1/theta where sinc has averaged out;
                // I -> theta^{2/3} (3/4) Gamma(1/3), relative error O(theta).
                return std::pow(theta, 2.0 / 3.0) * 0.75 * std::tgamma(1.0 / 3.0);
            }
            // Analytic continuation of int_U^inf u^{-5/3} G2 (1 - sinc u)
            // (1 - cos theta u) du, term by term.
            detail::SmoothTail st{d.kind(), d.size() / a};
            tail = st.monotone_part(U) - st.trig_part(8.0 / 3.0, 1.0, 0.0, U);
            if (!saturated) {
                tail -= st.trig_part(5.0 / 3.0, theta, std::numbers::pi / 2.0, U);
                const double wp = 1.0 + theta;
                const double wm = std::abs(1.0 - theta);
                tail += 0.5 * st.trig_part(8.0 / 3.0, wp, 0.0, U);
                if (wm * U >= std::numbers::pi)
                    tail += 0.5 * std::copysign(1.0, 1.0 - theta) *
                            st.trig_part(8.0 / 3.0, wm, 0.0, U);
                // else |integrand| <= wm u^{-5/3}: contribution O(wm U^{-2/3})
            }
            u_hi = U;
        }
    }
    if (!(u_hi > u_lo)) throw DomainError("k_phase_variance: empty band");

    double integral;
    if (saturated) {
        auto env = [&](double u) { return red.envelope(u); };
        integral = detail::integrate_pieces(env, cuts, u_lo, u_hi, red.structure_freq());
        if (u_lo == 0.0) {
            // Endpoint term of the dropped cos(theta u): envelope ~ c1 u^{1/3}
            // near zero contributes + (1/2) Gamma(4/3) c1 theta^{-4/3}.
            const double u0 = 1e-3 * std::min(1.0, cuts.front() > 0.0 ? cuts.front() : 1.0);
            const double c1 = red.envelope(u0) / std::cbrt(u0);
            integral += 0.5 * std::tgamma(4.0 / 3.0) * c1 * std::pow(theta, -4.0 / 3.0);
        }
        integral += tail;
    } else {
        const double freq = red.structure_freq() + theta;
        cuts.push_back(std::numbers::pi / freq);
        auto env = [&](double u) { return red.envelope(u) * one_minus_cos(theta * u); };
        integral = detail::integrate_pieces(env, cuts, u_lo, u_hi, freq);
        integral += tail;
    }
    return integral;
}

// Colored-noise (K-model) phase variance between two rigid configurations a
// apart, accumulated over time t. Single k-space quadrature; the prefactor is
// assembled in log10 so CGS magnitude chains cannot overflow.
inline PhaseVariance k_phase_variance(const MassDensity& d, double a, double t,
                                      const PhysicalConstants& pc, Band band = {},
                                      Vec3 axis = {1.0, 0.0, 0.0}) {
    if (a < 0.0) throw DomainError("k_phase_variance: separation must be >= 0");
    if (a == 0.0 || t == 0.0) return {0.0, -std::numeric_limits<double>::infinity(), false};

    bool sat = false;
    const double reduced = k_phase_variance_reduced(d, a, t, pc, band, axis, &sat);
    if (!(reduced >= -1e-12))
        throw NumericalError("k_phase_variance: reduced integral came out negative");

    using namespace gravdec::units;
    PhaseVariance out;
    out.saturated = sat;
    if (reduced <= 0.0) {
        out.log10_value = -std::numeric_limits<double>::infinity();
        return out;
    }
    const auto pref = log_eval({Factor{pc.c, 2.0, dim_velocity},
                                Factor{d.total_mass(), 2.0, dim_mass},
                                Factor{pc.l_p, 4.0 / 3.0, dim_length},
                                Factor{a, 2.0 / 3.0, dim_length},
                                Factor{std::numbers::pi, -2.0},
                                Factor{pc.hbar, -2.0, dim_action}});
    out.log10_value = pref.log10_value() + std::log10(reduced);
    out.value = std::pow(10.0, out.log10_value);
    return out;
}

// White-noise (D-model) phase variance: Var = t (G/hbar) Delta(a) with
// Delta(a) = 2 [W(0) - W(a)] from the mass-density pair functional.
inline PhaseVariance d_phase_variance(const MassDensity& d, double a, double t,
                                      const PhysicalConstants& pc,
                                      Vec3 axis = {1.0, 0.0, 0.0}) {
    if (a < 0.0) throw DomainError("d_phase_variance: separation must be >= 0");
    if (a == 0.0 || t == 0.0) return {0.0, -std::numeric_limits<double>::infinity(), false};

    const double M = d.total_mass();
    if (!(M > 0.0)) throw DomainError("d_phase_variance: zero total mass");
    const double reduced = d.pair_functional(a, axis) / (M * M); // Delta / M^2
    if (!(reduced >= -1e-12))
        throw NumericalError("d_phase_variance: negative pair functional");

    using namespace gravdec::units;
    PhaseVariance out;
    if (reduced <= 0.0) {
        out.log10_value = -std::numeric_limits<double>::infinity();
        return out;
    }
    const auto pref = log_eval({Factor{pc.G, 1.0, dim_G},
                                Factor{pc.hbar, -1.0, dim_action},
                                Factor{std::abs(t), 1.0, dim_time},
                                Factor{M, 2.0, dim_mass}});
    out.log10_value = pref.log10_value() + std::log10(reduced);
    out.value = std::pow(10.0, out.log10_value);
    return out;
}

} // namespace gravdec::decoherence

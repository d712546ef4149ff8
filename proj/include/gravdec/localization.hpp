#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "gravdec/constants.hpp"
#include "gravdec/errors.hpp"
#include "gravdec/mass_density.hpp"
#include "gravdec/phase_variance.hpp"
#include "gravdec/stats.hpp"
#include "gravdec/units.hpp"

namespace gravdec::decoherence {

enum class Model { K, D };
enum class Regime { Micro, Transition, Macro };

inline const char* to_string(Model m) { return m == Model::K ? "K" : "D"; }
inline const char* to_string(Regime r) {
    switch (r) {
    case Regime::Micro: return "micro";
    case Regime::Transition: return "transition";
    case Regime::Macro: return "macro";
    }
    return "?";
}

// Classification by hbar^2/G vs m^3 R with factor-10 guard bands.
inline Regime classify_regime(const MassDensity& d, const PhysicalConstants& pc) {
    const double R = d.extent();
    if (R == 0.0) return Regime::Micro;
    using namespace gravdec::units;
    const double lhs = log_eval({Factor{pc.hbar, 2.0}, Factor{pc.G, -1.0}}).log10_value();
    const double rhs =
        log_eval({Factor{d.total_mass(), 3.0}, Factor{R, 1.0}}).log10_value();
    if (lhs - rhs >= 1.0) return Regime::Micro;
    if (rhs - lhs >= 1.0) return Regime::Macro;
    return Regime::Transition;
}

struct LocalizeOptions {
    // Phase-difference variance at which coherence is deemed lost. The
    // threshold is an order-unity convention; pi^2 corresponds to an RMS
    // phase spread of pi.
    double threshold_variance = 1.0;
    double rel_tol = 1e-3;
    double a_min = 1e-30; // working length units
    double a_max = 1e30;
    Band band{}; // K-model spectral band; default unbounded
};

struct LocalizationResult {
    Model model = Model::K;
    double a_c = 0.0;
    double tau_c = 0.0;
    double log10_a_c = 0.0;
    double log10_tau_c = 0.0;
    Regime regime = Regime::Micro;
    std::size_t iterations = 0;
    double residual_log10 = 0.0; // |log10 Var - log10 threshold| at the solution
};

namespace detail {

// Bare power laws (order-unity prefactors dropped), used for initial guesses
// and for the transition-point algebra.
inline double bare_micro_log10(const PhysicalConstants& pc, double m) {
    using namespace gravdec::units;
    return log_eval({Factor{pc.hbar, 2.0}, Factor{pc.G, -1.0}, Factor{m, -3.0}}).log10_value();
}

inline double bare_macro_log10(const PhysicalConstants& pc, double m, double R) {
    using namespace gravdec::units;
    return log_eval({Factor{pc.hbar, 2.0 / 3.0}, Factor{pc.G, -1.0 / 3.0},
                     Factor{R, 2.0 / 3.0}, Factor{m, -1.0}})
        .log10_value();
}

inline double bare_d_macro_log10(const PhysicalConstants& pc, double m, double R) {
    using namespace gravdec::units;
    return log_eval({Factor{pc.hbar, 0.5}, Factor{pc.G, -0.25}, Factor{m, -0.75},
                     Factor{R, 0.75}})
        .log10_value();
}

inline double bare_d_micro_log10(const PhysicalConstants& pc, double m, double R) {
    using namespace gravdec::units;
    return log_eval({Factor{pc.hbar, 1.0}, Factor{pc.G, -0.5}, Factor{m, -1.5},
                     Factor{R, 0.5}})
        .log10_value();
}

} // namespace detail

// Finds a_c with Var(a_c, t = m a_c^2 / hbar) = threshold by bisection on
// log10 a, bracket found by decade expansion from the bare-law guess.
inline LocalizationResult solve_localization(Model model, const MassDensity& d,
                                             const PhysicalConstants& pc,
                                             LocalizeOptions opt = {}) {
    const double m = d.total_mass();
    if (!(m > 0.0)) throw DomainError("solve_localization: zero total mass");
    if (model == Model::D && d.has_point_member())
        throw RegularizationError("solve_localization: D model requires a finite-size "
                                  "density; supply a radius explicitly");

    const double log_thr = std::log10(opt.threshold_variance);
    std::size_t evals = 0;
    auto log_var = [&](double log_a) {
        ++evals;
        const double a = std::pow(10.0, log_a);
        // tau(a) = m a^2 / hbar evaluated in log form to survive huge ranges.
        using namespace gravdec::units;
        const double log_t =
            log_eval({Factor{m, 1.0}, Factor{a, 2.0}, Factor{pc.hbar, -1.0}}).log10_value();
        const double t = std::pow(10.0, log_t);
        if (model == Model::K) return k_phase_variance(d, a, t, pc, opt.band).log10_value;
        return d_phase_variance(d, a, t, pc).log10_value;
    };

    const Regime regime = classify_regime(d, pc);

    // Bare-law starting guess.
    double guess;
    if (model == Model::K)
        guess = regime == Regime::Macro ? detail::bare_macro_log10(pc, m, d.extent())
                                        : detail::bare_micro_log10(pc, m);
    else
        guess = regime == Regime::Macro ? detail::bare_d_macro_log10(pc, m, d.extent())
                                        : detail::bare_d_micro_log10(pc, m, d.extent());

    const double x_min = std::log10(opt.a_min);
    const double x_max = std::log10(opt.a_max);
    double x0 = std::clamp(guess, x_min + 0.5, x_max - 0.5);

    double f0 = log_var(x0) - log_thr;
    double lo, hi, flo, fhi;
    if (f0 < 0.0) {
        lo = x0;
        flo = f0;
        hi = x0;
        fhi = f0;
        while (fhi < 0.0) {
            if (hi >= x_max)
                throw OutOfRangeError("solve_localization: no threshold crossing below a_max");
            hi = std::min(hi + 1.0, x_max);
            fhi = log_var(hi) - log_thr;
        }
        lo = hi - 1.0 > x0 ? hi - 1.0 : x0; // tightest known negative side
        flo = lo == x0 ? f0 : log_var(lo) - log_thr;
        if (flo > 0.0) { lo = x0; flo = f0; }
    } else {
        hi = x0;
        fhi = f0;
        lo = x0;
        flo = f0;
        while (flo > 0.0) {
            if (lo <= x_min)
                throw OutOfRangeError("solve_localization: no threshold crossing above a_min");
            lo = std::max(lo - 1.0, x_min);
            flo = log_var(lo) - log_thr;
        }
        hi = lo + 1.0 < x0 ? lo + 1.0 : x0;
        fhi = hi == x0 ? f0 : log_var(hi) - log_thr;
        if (fhi < 0.0) { hi = x0; fhi = f0; }
    }

    const double x_tol = opt.rel_tol / std::numbers::ln10;
    double mid = 0.5 * (lo + hi), fmid = 0.0;
    while (hi - lo > x_tol) {
        mid = 0.5 * (lo + hi);
        fmid = log_var(mid) - log_thr;
        if (fmid < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    mid = 0.5 * (lo + hi);

    LocalizationResult res;
    res.model = model;
    res.log10_a_c = mid;
    res.a_c = std::pow(10.0, mid);
    using namespace gravdec::units;
    res.log10_tau_c =
        log_eval({Factor{m, 1.0}, Factor{res.a_c, 2.0}, Factor{pc.hbar, -1.0}}).log10_value();
    res.tau_c = std::pow(10.0, res.log10_tau_c);
    res.regime = regime;
    res.iterations = evals;
    res.residual_log10 = std::abs(fmid);
    return res;
}

// --- scaling surveys ----------------------------------------------------------

enum class SurveyShape { Point, Ball };
enum class SurveyAxis { Mass, Size };

struct SurveyPoint {
    double m = 0.0;
    double R = 0.0;
    double a_c = 0.0;
    double tau_c = 0.0;
    Regime regime = Regime::Micro;
};

struct ScalingSurvey {
    std::vector<SurveyPoint> points;
    stats::LinearFit fit; // log10 a_c against log10 of the survey axis
    bool regime_mixed = false;
    std::vector<std::pair<Regime, stats::LinearFit>> per_regime;
};

inline ScalingSurvey scaling_survey(Model model, SurveyShape shape, SurveyAxis axis,
                                    std::span<const std::pair<double, double>> grid,
                                    const PhysicalConstants& pc, LocalizeOptions opt = {}) {
    if (grid.size() < 3) throw DomainError("scaling_survey: need at least 3 grid points");

    ScalingSurvey out;
    std::vector<double> xs, ys;
    for (const auto& [m, R] : grid) {
        const MassDensity d = shape == SurveyShape::Point ? MassDensity::point(m)
                                                          : MassDensity::uniform_ball(m, R);
        auto res = solve_localization(model, d, pc, opt);
        out.points.push_back({m, R, res.a_c, res.tau_c, res.regime});
        xs.push_back(axis == SurveyAxis::Mass ? std::log10(m) : std::log10(R));
        ys.push_back(res.log10_a_c);
    }

    const auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
    if (*mx - *mn < 2.0)
        throw DomainError("scaling_survey: survey axis must span at least 2 decades");

    out.fit = stats::linear_fit(xs, ys);
    for (const auto& p : out.points)
        if (p.regime != out.points.front().regime) out.regime_mixed = true;

    if (out.regime_mixed) {
        for (Regime r : {Regime::Micro, Regime::Transition, Regime::Macro}) {
            std::vector<double> rx, ry;
            for (std::size_t i = 0; i < out.points.size(); ++i)
                if (out.points[i].regime == r) {
                    rx.push_back(xs[i]);
                    ry.push_back(ys[i]);
                }
            if (rx.size() >= 3) out.per_regime.emplace_back(r, stats::linear_fit(rx, ry));
        }
    }
    return out;
}

// --- micro/macro transition ----------------------------------------------------

struct TransitionPoint {
    double a_tr = 0.0, m_tr = 0.0, tau_tr = 0.0;
    double log10_a_tr = 0.0, log10_m_tr = 0.0, log10_tau_tr = 0.0;
    double micro_law_a = 0.0; // bare micro law at the transition mass
    double macro_law_a = 0.0; // bare macro law at the transition size
};

// Solves a_c = R on the bare laws with m = rho (4 pi/3) R^3: the two power
// laws cross at hbar^2/G = m^3 R, giving R^10 = (hbar^2/G) / (rho^3 (4 pi/3)^3).
inline TransitionPoint transition_point(double density, const PhysicalConstants& pc) {
    if (!(density > 0.0)) throw DomainError("transition_point: density must be > 0");
    using namespace gravdec::units;
    const double four_thirds_pi = 4.0 * std::numbers::pi / 3.0;
    const auto r10 = log_eval({Factor{pc.hbar, 2.0}, Factor{pc.G, -1.0},
                               Factor{density, -3.0}, Factor{four_thirds_pi, -3.0}});
    TransitionPoint tp;
    tp.log10_a_tr = r10.log10_value() / 10.0;
    tp.a_tr = std::pow(10.0, tp.log10_a_tr);
    tp.log10_m_tr =
        log_eval({Factor{density, 1.0}, Factor{four_thirds_pi, 1.0}, Factor{tp.a_tr, 3.0}})
            .log10_value();
    tp.m_tr = std::pow(10.0, tp.log10_m_tr);
    tp.log10_tau_tr =
        log_eval({Factor{tp.m_tr, 1.0}, Factor{tp.a_tr, 2.0}, Factor{pc.hbar, -1.0}})
            .log10_value();
    tp.tau_tr = std::pow(10.0, tp.log10_tau_tr);
    tp.micro_law_a = std::pow(10.0, detail::bare_micro_log10(pc, tp.m_tr));
    tp.macro_law_a = std::pow(10.0, detail::bare_macro_log10(pc, tp.m_tr, tp.a_tr));
    return tp;
}

} // namespace gravdec::decoherence

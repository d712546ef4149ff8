#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "gravdec/errors.hpp"

namespace gravdec::quad {

// --- fixed Gauss-Legendre rules --------------------------------------------

struct GLNode {
    double x; // abscissa on [-1, 1]
    double w;
};

inline constexpr GLNode gl8[] = {
    {-0.9602898564975363, 0.1012285362903763}, {-0.7966664774136267, 0.2223810344533745},
    {-0.5255324099163290, 0.3137066458778873}, {-0.1834346424956498, 0.3626837833783620},
    {0.1834346424956498, 0.3626837833783620},  {0.5255324099163290, 0.3137066458778873},
    {0.7966664774136267, 0.2223810344533745},  {0.9602898564975363, 0.1012285362903763},
};

inline constexpr GLNode gl16[] = {
    {-0.9894009349916499, 0.0271524594117541}, {-0.9445750230732326, 0.0622535239386479},
    {-0.8656312023878318, 0.0951585116824928}, {-0.7554044083550030, 0.1246289712555339},
    {-0.6178762444026438, 0.1495959888165767}, {-0.4580167776572274, 0.1691565193950025},
    {-0.2816035507792589, 0.1826034150449236}, {-0.0950125098376374, 0.1894506104550685},
    {0.0950125098376374, 0.1894506104550685},  {0.2816035507792589, 0.1826034150449236},
    {0.4580167776572274, 0.1691565193950025},  {0.6178762444026438, 0.1495959888165767},
    {0.7554044083550030, 0.1246289712555339},  {0.8656312023878318, 0.0951585116824928},
    {0.9445750230732326, 0.0622535239386479},  {0.9894009349916499, 0.0271524594117541},
};

template <class F>
double gauss(const F& f, double a, double b, std::span<const GLNode> rule) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (const GLNode& n : rule) s += n.w * f(mid + half * n.x);
    return s * half;
}

template <class F>
double gauss8(const F& f, double a, double b) {
    return gauss(f, a, b, gl8);
}

template <class F>
double gauss16(const F& f, double a, double b) {
    return gauss(f, a, b, gl16);
}

// Composite rule with fixed panel count; deterministic node placement.
template <class F>
double composite_gauss(const F& f, double a, double b, std::size_t panels,
                       std::span<const GLNode> rule = gl8) {
    if (panels == 0) throw DomainError("composite_gauss: zero panels");
    const double h = (b - a) / static_cast<double>(panels);
    std::vector<double> parts(panels);
    for (std::size_t i = 0; i < panels; ++i)
        parts[i] = gauss(f, a + h * static_cast<double>(i), a + h * static_cast<double>(i + 1), rule);
    double sum = 0.0, comp = 0.0;
    for (double p : parts) {
        const double t = sum + p;
        comp += (std::abs(sum) >= std::abs(p)) ? (sum - t) + p : (p - t) + sum;
        sum = t;
    }
    return sum + comp;
}

// --- adaptive Gauss-Kronrod G7-K15 ------------------------------------------

namespace detail {
// (node, 7-pt Gauss weight, 15-pt Kronrod weight); nodes are +-symmetric.
inline constexpr double gk[8][3] = {
    {0.0000000000000000, 0.4179591836734694, 0.2094821410847278},
    {0.4058451513773972, 0.3818300505051189, 0.1903505780647854},
    {0.7415311855993945, 0.2797053914892767, 0.1406532597155259},
    {0.9491079123427585, 0.1294849661688697, 0.0630920926299786},
    {0.2077849550078985, 0.0, 0.2044329400752989},
    {0.5860872354676911, 0.0, 0.1690047266392679},
    {0.8648644233597691, 0.0, 0.1047900103222502},
    {0.9914553711208126, 0.0, 0.0229353220105292},
};
} // namespace detail

template <class F>
double gk15(const F& f, double a, double b, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f0 = f(mid);
    double g7 = detail::gk[0][1] * f0;
    double k15 = detail::gk[0][2] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * detail::gk[i][0];
        const double fi = f(mid + dx) + f(mid - dx);
        g7 += detail::gk[i][1] * fi;
        k15 += detail::gk[i][2] * fi;
    }
    g7 *= half;
    k15 *= half;
    err = std::abs(k15 - g7);
    return k15;
}

struct AdaptiveOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    std::size_t max_intervals = 20000;
};

// Interval-stack adaptive integrator. Throws NumericalError when the interval
// budget is exhausted before the tolerance is met.
template <class F>
double adaptive(const F& f, double a, double b, AdaptiveOptions opt = {}) {
    struct Seg {
        double a, b, val, err;
    };
    std::vector<Seg> stack;
    double err0;
    const double v0 = gk15(f, a, b, err0);
    stack.push_back({a, b, v0, err0});
    double total = v0;
    double total_err = err0;
    std::size_t splits = 0;
    while (total_err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        // Split the worst interval.
        std::size_t worst = 0;
        for (std::size_t i = 1; i < stack.size(); ++i)
            if (stack[i].err > stack[worst].err) worst = i;
        const Seg s = stack[worst];
        if (++splits > opt.max_intervals)
            throw NumericalError("adaptive quadrature: interval budget exhausted");
        if (s.b - s.a <= std::abs(s.a) * 1e-15 + 1e-300) {
            // Interval at rounding resolution; accept its contribution.
            stack[worst].err = 0.0;
            total_err = 0.0;
            for (const Seg& t : stack) total_err += t.err;
            continue;
        }
        const double mid = 0.5 * (s.a + s.b);
        double e1, e2;
        const double v1 = gk15(f, s.a, mid, e1);
        const double v2 = gk15(f, mid, s.b, e2);
        stack[worst] = {s.a, mid, v1, e1};
        stack.push_back({mid, s.b, v2, e2});
        total = 0.0;
        total_err = 0.0;
        for (const Seg& t : stack) {
            total += t.val;
            total_err += t.err;
        }
    }
    return total;
}

// --- endpoint singularity |s - s*|^{-1/3} ------------------------------------
//
// integral over w in (0, L] of g(w) * w^{-1/3} dw where g is smooth; the
// substitution w = v^{3/2} gives (3/2) * integral of g(v^{3/2}) dv, removing
// the singular endpoint exactly.
template <class G>
double integrate_cbrt_singular(const G& g, double length, AdaptiveOptions opt = {}) {
    if (!(length > 0.0)) throw DomainError("integrate_cbrt_singular: length must be > 0");
    const double vmax = std::pow(length, 2.0 / 3.0);
    auto h = [&](double v) { return 1.5 * g(std::pow(v, 1.5)); };
    return adaptive(h, 0.0, vmax, opt);
}

// --- oscillatory semi-infinite tails ----------------------------------------
//
// Partial integrals between consecutive zero crossings alternate in sign for
// a monotone envelope; iterated averaging (Euler transform) then converges
// far faster than the raw series, which may decay only algebraically.

inline double euler_accelerate(std::vector<double> partial_sums) {
    if (partial_sums.empty()) throw DomainError("euler_accelerate: empty series");
    double prev = partial_sums.back();
    while (partial_sums.size() > 1) {
        for (std::size_t i = 0; i + 1 < partial_sums.size(); ++i)
            partial_sums[i] = 0.5 * (partial_sums[i] + partial_sums[i + 1]);
        partial_sums.pop_back();
        prev = partial_sums.front();
    }
    return prev;
}

// integral over [x0, inf) of f, where f has (quasi-)zeros spaced `half_period`
// starting at the first zero >= x0. `segments` half-periods are summed and
// Euler-accelerated.
template <class F>
double oscillatory_tail(const F& f, double x0, double first_zero, double half_period,
                        std::size_t segments = 48) {
    if (!(half_period > 0.0)) throw DomainError("oscillatory_tail: bad half period");
    std::vector<double> sums;
    sums.reserve(segments + 1);
    double acc = 0.0;
    double lo = x0;
    double hi = first_zero;
    if (hi <= lo) hi = lo + half_period;
    for (std::size_t i = 0; i <= segments; ++i) {
        acc += gauss16(f, lo, hi);
        sums.push_back(acc);
        lo = hi;
        hi += half_period;
    }
    return euler_accelerate(std::move(sums));
}

// integral over [x0, inf) of x^{-p} * sin(b x + phase), p > 0, b > 0, x0 > 0.
inline double algebraic_trig_tail(double p, double b, double phase, double x0,
                                  std::size_t segments = 48) {
    if (!(b > 0.0) || !(x0 > 0.0) || !(p > 0.0))
        throw DomainError("algebraic_trig_tail: need b, x0, p > 0");
    auto f = [&](double x) { return std::pow(x, -p) * std::sin(b * x + phase); };
    // Zeros of sin(bx + phase) at x = (n pi - phase)/b.
    const double n0 = std::ceil((b * x0 + phase) / std::numbers::pi + 1e-12);
    const double first_zero = (n0 * std::numbers::pi - phase) / b;
    return oscillatory_tail(f, x0, first_zero, std::numbers::pi / b, segments);
}

} // namespace gravdec::quad

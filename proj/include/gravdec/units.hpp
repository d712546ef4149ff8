#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "gravdec/constants.hpp"
#include "gravdec/errors.hpp"

namespace gravdec::units {

// Dimension signature: powers of (length, time, mass) stored in twelfths so
// the fractional exponents of this problem (2/3, 5/6, 3/4, ...) stay exact.
struct Dim {
    int len12 = 0;
    int time12 = 0;
    int mass12 = 0;

    static constexpr Dim none() { return {0, 0, 0}; }
    static constexpr Dim length(int num = 1, int den = 1) { return make(num, den, 0, 1, 0, 1); }
    static constexpr Dim time(int num = 1, int den = 1) { return make(0, 1, num, den, 0, 1); }
    static constexpr Dim mass(int num = 1, int den = 1) { return make(0, 1, 0, 1, num, den); }

    static constexpr Dim make(int ln, int ld, int tn, int td, int mn, int md) {
        return {ln * 12 / ld, tn * 12 / td, mn * 12 / md};
    }

    friend constexpr Dim operator+(Dim a, Dim b) {
        return {a.len12 + b.len12, a.time12 + b.time12, a.mass12 + b.mass12};
    }
    friend constexpr Dim operator-(Dim a, Dim b) {
        return {a.len12 - b.len12, a.time12 - b.time12, a.mass12 - b.mass12};
    }
    friend constexpr Dim operator*(Dim a, int n) {
        return {a.len12 * n, a.time12 * n, a.mass12 * n};
    }
    friend constexpr bool operator==(Dim a, Dim b) {
        return a.len12 == b.len12 && a.time12 == b.time12 && a.mass12 == b.mass12;
    }
};

// Common signatures.
inline constexpr Dim dim_length = Dim::length();
inline constexpr Dim dim_time = Dim::time();
inline constexpr Dim dim_mass = Dim::mass();
inline constexpr Dim dim_velocity = dim_length - dim_time;
inline constexpr Dim dim_wavenumber = Dim::none() - dim_length;
inline constexpr Dim dim_energy = Dim::length(2) + dim_mass - Dim::time(2);
inline constexpr Dim dim_action = dim_energy + dim_time;
inline constexpr Dim dim_G = Dim::length(3) - dim_mass - Dim::time(2);
inline constexpr Dim dim_acceleration = dim_length - Dim::time(2);
inline constexpr Dim dim_potential = Dim::length(2) - Dim::time(2); // erg/g

struct Quantity {
    double value = 0.0;
    Dim dim = Dim::none();
};

enum class UnitMode { CGS, Scaled };

// Scaled mode uses full Planck units: l_p -> 1 length unit, l_p/c -> 1 time
// unit, sqrt(hbar*c/G) -> 1 mass unit, so G = hbar = c = l_p = 1 internally.
class UnitSystem {
public:
    static UnitSystem cgs(const PhysicalConstants& pc) {
        return UnitSystem(pc, UnitMode::CGS, 1.0, 1.0, 1.0);
    }
    static UnitSystem scaled(const PhysicalConstants& pc) {
        return UnitSystem(pc, UnitMode::Scaled, pc.l_p, pc.planck_time(), pc.planck_mass());
    }

    UnitMode mode() const { return mode_; }
    double length_scale() const { return length_scale_; } // cm per internal unit
    double time_scale() const { return time_scale_; }     // s per internal unit
    double mass_scale() const { return mass_scale_; }     // g per internal unit

    const PhysicalConstants& constants_cgs() const { return pc_; }

    // Constants expressed in this system's internal units.
    PhysicalConstants constants() const {
        PhysicalConstants out = pc_;
        out.G = to_internal({pc_.G, dim_G}).value;
        out.hbar = to_internal({pc_.hbar, dim_action}).value;
        out.c = to_internal({pc_.c, dim_velocity}).value;
        out.l_p = to_internal({pc_.l_p, dim_length}).value;
        return out;
    }

    Quantity to_internal(Quantity q) const {
        return {q.value / conversion(q.dim), q.dim};
    }
    Quantity to_cgs(Quantity q) const {
        return {q.value * conversion(q.dim), q.dim};
    }

    // cm-gram-second value of one internal unit carrying the signature.
    double conversion(Dim d) const {
        return pow12(length_scale_, d.len12) * pow12(time_scale_, d.time12) *
               pow12(mass_scale_, d.mass12);
    }

private:
    UnitSystem(const PhysicalConstants& pc, UnitMode mode, double ls, double ts, double ms)
        : pc_(pc), mode_(mode), length_scale_(ls), time_scale_(ts), mass_scale_(ms) {
        pc_.validate();
        if (!(ls > 0.0) || !(ts > 0.0) || !(ms > 0.0))
            throw ConfigError("unit scales must be positive");
    }

    static double pow12(double base, int twelfths) {
        if (twelfths == 0) return 1.0;
        if (twelfths % 12 == 0) {
            // Exact integer power; keeps l_p -> 1 bit-clean in Scaled mode.
            double r = 1.0;
            int n = std::abs(twelfths) / 12;
            for (int i = 0; i < n; ++i) r *= base;
            return twelfths > 0 ? r : 1.0 / r;
        }
        return std::pow(base, twelfths / 12.0);
    }

    PhysicalConstants pc_;
    UnitMode mode_;
    double length_scale_, time_scale_, mass_scale_;
};

// --- Overflow-safe products of powers -------------------------------------
//
// Decoherence tables span ~10^-33 .. 10^53 in CGS; chained products can leave
// the double range even when the final answer does not. log_eval works in
// log10 space and reports mantissa in [1,10) plus a base-10 exponent.

struct Factor {
    double value = 1.0;  // must be > 0
    double power = 1.0;
    Dim dim = Dim::none(); // dimension of `value` (before the power)
};

struct LogMagnitude {
    double mantissa = 1.0; // in [1, 10)
    int exp10 = 0;
    Dim dim = Dim::none();

    double log10_value() const { return std::log10(mantissa) + exp10; }
    // May overflow/underflow to inf/0 by design; callers wanting safety stay
    // in (mantissa, exp10) form.
    double value() const { return mantissa * std::pow(10.0, exp10); }
};

inline LogMagnitude log_eval(std::span<const Factor> factors) {
    double lg = 0.0;
    Dim dim = Dim::none();
    for (const Factor& f : factors) {
        if (!(f.value > 0.0))
            throw DomainError("log_eval: nonpositive factor " + std::to_string(f.value));
        lg += f.power * std::log10(f.value);
        const int p12 = static_cast<int>(std::lround(f.power * 12.0));
        auto scaled = [&](int d12) {
            const int num = d12 * p12;
            if (num % 12 != 0)
                throw ConfigError("log_eval: dimension signature leaves the twelfth-power "
                                  "lattice; unknown resulting signature");
            return num / 12;
        };
        dim = dim + Dim{scaled(f.dim.len12), scaled(f.dim.time12), scaled(f.dim.mass12)};
    }
    double e = std::floor(lg);
    double m = std::pow(10.0, lg - e);
    // Guard the m == 10 rounding edge.
    if (m >= 10.0) {
        m /= 10.0;
        e += 1.0;
    }
    return {m, static_cast<int>(e), dim};
}

inline LogMagnitude log_eval(std::initializer_list<Factor> factors) {
    return log_eval(std::span<const Factor>(factors.begin(), factors.size()));
}

} // namespace gravdec::units

#pragma once

#include <cmath>
#include <string>

#include "gravdec/errors.hpp"

namespace gravdec {

// CGS values. Defaults are configuration, not physics: every formula pulls
// its constants from a PhysicalConstants instance so the whole code base can
// be re-run against a different constant set.
struct PhysicalConstants {
    double G = 6.674e-8;     // cm^3 g^-1 s^-2
    double hbar = 1.0546e-27; // erg s
    double c = 2.9979e10;    // cm/s
    double l_p = 0.0;        // cm, derived unless supplied

    static PhysicalConstants cgs_defaults() {
        PhysicalConstants pc;
        pc.l_p = pc.derived_planck_length();
        pc.validate();
        return pc;
    }

    double derived_planck_length() const { return std::sqrt(hbar * G / (c * c * c)); }

    // l_p is a consistency-checked derived value, never an independent input.
    void validate() const {
        if (!(G > 0.0) || !(hbar > 0.0) || !(c > 0.0) || !(l_p > 0.0))
            throw ConfigError("physical constants must be strictly positive");
        const double lp = derived_planck_length();
        if (std::abs(l_p - lp) > 1e-12 * lp)
            throw ConfigError("l_p inconsistent with sqrt(hbar*G/c^3): got " +
                              std::to_string(l_p) + ", derived " + std::to_string(lp));
    }

    double planck_mass() const { return std::sqrt(hbar * c / G); } // g
    double planck_time() const { return l_p / c; }                 // s
};

} // namespace gravdec

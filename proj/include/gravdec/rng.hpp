#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace gravdec::rng {

// splitmix64: small, fast, and fully specified, so streams are bit-identical
// across platforms and standard-library versions (std::normal_distribution is
// implementation-defined and would break reproducibility guarantees).
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1]; safe as a log argument.
    double next_double_open0() { return 1.0 - next_double(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    double normal() {
        // Box-Muller, using one pair member per call.
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_double_open0();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Isotropic unit vector.
    void unit_vector(double& x, double& y, double& z) {
        const double cth = uniform(-1.0, 1.0);
        const double sth = std::sqrt(std::max(0.0, 1.0 - cth * cth));
        const double phi = uniform(0.0, 2.0 * std::numbers::pi);
        x = sth * std::cos(phi);
        y = sth * std::sin(phi);
        z = cth;
    }

private:
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Splittable counter scheme: realization i of a run draws its own seed from
// (master, stream, i) so parallel workers generate identical streams no
// matter how indices are assigned to threads.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
    SplitMix64 mix(master ^ (0x6a09e667f3bcc909ULL + stream * 0x9e3779b97f4a7c15ULL));
    std::uint64_t h = mix.next_u64();
    SplitMix64 mix2(h ^ (index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
    return mix2.next_u64();
}

} // namespace gravdec::rng

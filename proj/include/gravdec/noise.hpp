#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "gravdec/constants.hpp"
#include "gravdec/errors.hpp"
#include "gravdec/rng.hpp"
#include "gravdec/vec3.hpp"

namespace gravdec::noise {

// Fluctuation spectrum of the colored-noise metric perturbation.
inline double spectral_amplitude(double l_p, double k) {
    return std::pow(l_p, 2.0 / 3.0) * std::pow(k, -5.0 / 6.0);
}

enum class Sampling {
    IsotropicRandom, // |k| from the k^2 dk measure, uniform directions
    IsotropicLog,    // stratified log-|k| with importance weights, uniform directions
    Lattice,         // exact 2 pi / l lattice vectors
};

struct Mode {
    Vec3 k;
    double knorm = 0.0;
    double amplitude = 0.0; // f(k) = l_p^{2/3} k^{-5/6}, exactly
    double weight = 0.0;    // k-space volume d^3k carried by this mode
    double coef = 0.0;      // 2 f(k) sqrt(weight / (2 pi)^3), cached
};

struct ModeSetParams {
    double k_min = 0.0;
    double k_max = 0.0;
    std::size_t n_modes = 0; // target count; the lattice derives its own
    double box_length = 0.0; // periodic volume edge; defaults to 2 pi / k_min
    Sampling sampling = Sampling::IsotropicRandom;
    std::uint64_t geometry_seed = 0;
    std::size_t memory_budget_modes = 20'000'000;
};

struct ModeSet {
    std::vector<Mode> modes;
    double box_length = 0.0;
    double k_min = 0.0, k_max = 0.0;
    double wave_speed = 1.0; // c in working units; omega = |k| c
    Sampling sampling = Sampling::IsotropicRandom;

    // Exact point variance of this particular mode set: sum of coef^2 / 2.
    double discrete_variance() const {
        double s = 0.0;
        for (const Mode& m : modes) s += 0.5 * m.coef * m.coef;
        return s;
    }
};

// Continuum point variance of the band, (2/(2 pi)^3) int f^2(k) d^3k; the
// discrete mode sum estimates this.
inline double band_point_variance(double l_p, double k_min, double k_max) {
    const double lp43 = std::pow(l_p, 4.0 / 3.0);
    return lp43 / (std::numbers::pi * std::numbers::pi) * 0.75 *
           (std::pow(k_max, 4.0 / 3.0) - std::pow(k_min, 4.0 / 3.0));
}

inline ModeSet build_mode_set(const ModeSetParams& p, const PhysicalConstants& pc) {
    if (!(p.k_min > 0.0)) throw DomainError("build_mode_set: k_min must be > 0");
    if (!(p.k_max > p.k_min)) throw DomainError("build_mode_set: need k_min < k_max");

    ModeSet set;
    set.k_min = p.k_min;
    set.k_max = p.k_max;
    set.wave_speed = pc.c;
    set.sampling = p.sampling;
    set.box_length = p.box_length > 0.0 ? p.box_length : 2.0 * std::numbers::pi / p.k_min;

    const double two_pi_cubed = 8.0 * std::numbers::pi * std::numbers::pi * std::numbers::pi;
    auto push_mode = [&](Vec3 k, double weight) {
        Mode m;
        m.k = k;
        m.knorm = k.norm();
        m.amplitude = spectral_amplitude(pc.l_p, m.knorm);
        m.weight = weight;
        m.coef = 2.0 * m.amplitude * std::sqrt(weight / two_pi_cubed);
        set.modes.push_back(m);
    };

    switch (p.sampling) {
    case Sampling::IsotropicRandom: {
        if (p.n_modes == 0) throw DomainError("build_mode_set: n_modes must be >= 1");
        if (p.n_modes > p.memory_budget_modes)
            throw ResourceError("build_mode_set: n_modes exceeds memory budget");
        set.modes.reserve(p.n_modes);
        rng::SplitMix64 gen(rng::derive_seed(p.geometry_seed, 0xA11CE, 0));
        const double lo3 = p.k_min * p.k_min * p.k_min;
        const double hi3 = p.k_max * p.k_max * p.k_max;
        const double vol = 4.0 * std::numbers::pi / 3.0 * (hi3 - lo3);
        const double w = vol / static_cast<double>(p.n_modes);
        for (std::size_t i = 0; i < p.n_modes; ++i) {
            const double knorm = std::cbrt(lo3 + gen.next_double() * (hi3 - lo3));
            Vec3 dir;
            gen.unit_vector(dir.x, dir.y, dir.z);
            push_mode(knorm * dir, w);
        }
        break;
    }
    case Sampling::IsotropicLog: {
        // One stratified sample per log-spaced |k| cell; weight is the exact
        // importance weight 4 pi k^3 ln(b/a) for that cell, which keeps the
        // d^3k sum unbiased while covering many decades evenly.
        if (p.n_modes == 0) throw DomainError("build_mode_set: n_modes must be >= 1");
        if (p.n_modes > p.memory_budget_modes)
            throw ResourceError("build_mode_set: n_modes exceeds memory budget");
        set.modes.reserve(p.n_modes);
        rng::SplitMix64 gen(rng::derive_seed(p.geometry_seed, 0xA11CE, 1));
        const double lweight = std::log(p.k_max / p.k_min) / static_cast<double>(p.n_modes);
        for (std::size_t i = 0; i < p.n_modes; ++i) {
            const double la = std::log(p.k_min) + lweight * static_cast<double>(i);
            const double knorm = std::exp(la + gen.next_double() * lweight);
            Vec3 dir;
            gen.unit_vector(dir.x, dir.y, dir.z);
            push_mode(knorm * dir, 4.0 * std::numbers::pi * knorm * knorm * knorm * lweight);
        }
        break;
    }
    case Sampling::Lattice: {
        const double dk = 2.0 * std::numbers::pi / set.box_length;
        const long nmax = static_cast<long>(std::floor(p.k_max / dk));
        const double span = 2.0 * static_cast<double>(nmax) + 1.0;
        if (span * span * span > static_cast<double>(p.memory_budget_modes) * 8.0)
            throw ResourceError("build_mode_set: lattice enumeration exceeds memory budget");
        const double w = dk * dk * dk;
        for (long nx = -nmax; nx <= nmax; ++nx)
            for (long ny = -nmax; ny <= nmax; ++ny)
                for (long nz = -nmax; nz <= nmax; ++nz) {
                    const Vec3 k{dk * static_cast<double>(nx), dk * static_cast<double>(ny),
                                 dk * static_cast<double>(nz)};
                    const double kn = k.norm();
                    if (kn < p.k_min || kn > p.k_max) continue;
                    if (set.modes.size() >= p.memory_budget_modes)
                        throw ResourceError("build_mode_set: lattice exceeds memory budget");
                    push_mode(k, w);
                }
        break;
    }
    }
    return set;
}

enum class AmplitudeStatistics {
    FixedModulus,    // |c(k)| = f(k) exactly, random phase
    ComplexGaussian, // c(k) complex gaussian with <|c|^2> = f^2(k)
};

// One realization gamma_beta of the fluctuation field: a pure function of
// (seed, mode set, x, t). beta = 0 is the unperturbed flat member.
class FieldRealization {
public:
    FieldRealization(std::shared_ptr<const ModeSet> set, std::uint64_t seed, std::uint64_t beta,
                     AmplitudeStatistics stats = AmplitudeStatistics::FixedModulus)
        : set_(std::move(set)), seed_(seed), beta_(beta) {
        const std::size_t n = set_->modes.size();
        phase_.resize(n);
        modulus_.assign(n, 1.0);
        if (beta_ == 0) {
            modulus_.assign(n, 0.0); // Minkowski member
            return;
        }
        rng::SplitMix64 gen(seed_);
        for (std::size_t i = 0; i < n; ++i)
            phase_[i] = gen.uniform(0.0, 2.0 * std::numbers::pi);
        if (stats == AmplitudeStatistics::ComplexGaussian) {
            for (std::size_t i = 0; i < n; ++i) {
                const double u = gen.normal(), v = gen.normal();
                modulus_[i] = std::sqrt(0.5 * (u * u + v * v));
            }
        }
    }

    static FieldRealization minkowski(std::shared_ptr<const ModeSet> set) {
        return FieldRealization(std::move(set), 0, 0);
    }

    const ModeSet& mode_set() const { return *set_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t beta() const { return beta_; }
    std::span<const double> phases() const { return phase_; }
    std::span<const double> moduli() const { return modulus_; }

    // gamma_beta(x, t): dimensionless metric perturbation.
    double gamma(Vec3 x, double t) const {
        const double c = set_->wave_speed;
        double s = 0.0;
        const auto& modes = set_->modes;
        for (std::size_t i = 0; i < modes.size(); ++i) {
            const Mode& m = modes[i];
            s += m.coef * modulus_[i] * std::cos(dot(m.k, x) - m.knorm * c * t + phase_[i]);
        }
        return s;
    }

    // As gamma(), with a per-mode damping factor (e.g. a probe form factor).
    double gamma_weighted(Vec3 x, double t, std::span<const double> mode_weight) const {
        const double c = set_->wave_speed;
        double s = 0.0;
        const auto& modes = set_->modes;
        for (std::size_t i = 0; i < modes.size(); ++i) {
            const Mode& m = modes[i];
            s += mode_weight[i] * m.coef * modulus_[i] *
                 std::cos(dot(m.k, x) - m.knorm * c * t + phase_[i]);
        }
        return s;
    }

private:
    std::shared_ptr<const ModeSet> set_;
    std::uint64_t seed_;
    std::uint64_t beta_;
    std::vector<double> phase_;
    std::vector<double> modulus_;
};

// Deterministic ensemble factory. With resample_geometry the mode directions
// and |k| draws are refreshed per realization (removes quenched discretization
// bias from ensemble statistics); otherwise all realizations share one set.
class FieldEnsemble {
public:
    FieldEnsemble(ModeSetParams geometry, const PhysicalConstants& pc, std::size_t n_realizations,
                  std::uint64_t master_seed, bool resample_geometry = true,
                  AmplitudeStatistics stats = AmplitudeStatistics::FixedModulus)
        : geometry_(geometry), pc_(pc), n_(n_realizations), master_(master_seed),
          resample_(resample_geometry), stats_(stats) {
        if (!resample_) {
            geometry_.geometry_seed = rng::derive_seed(master_, kGeometryStream, 0);
            shared_ = std::make_shared<const ModeSet>(build_mode_set(geometry_, pc_));
        }
    }

    std::size_t size() const { return n_; }
    const PhysicalConstants& constants() const { return pc_; }
    const ModeSetParams& geometry() const { return geometry_; }
    std::shared_ptr<const ModeSet> shared_set() const { return shared_; }

    FieldRealization realization(std::size_t i) const {
        if (i >= n_) throw DomainError("FieldEnsemble: realization index out of range");
        std::shared_ptr<const ModeSet> set = shared_;
        if (resample_) {
            ModeSetParams p = geometry_;
            p.geometry_seed = rng::derive_seed(master_, kGeometryStream, i + 1);
            set = std::make_shared<const ModeSet>(build_mode_set(p, pc_));
        }
        return FieldRealization(set, rng::derive_seed(master_, kPhaseStream, i + 1), i + 1,
                                stats_);
    }

private:
    static constexpr std::uint64_t kGeometryStream = 17;
    static constexpr std::uint64_t kPhaseStream = 29;

    ModeSetParams geometry_;
    PhysicalConstants pc_;
    std::size_t n_;
    std::uint64_t master_;
    bool resample_;
    AmplitudeStatistics stats_;
    std::shared_ptr<const ModeSet> shared_;
};

// --- white-in-time stochastic potential --------------------------------------
//
// Gaussian potential increments on a spatial lattice whose discretized
// covariance implements G hbar / |x - x'| . delta(t - t'): correlated across
// cells with the Coulomb kernel (cell-averaged below one spacing), white
// across steps with variance proportional to 1/dt.
class WhiteNoisePotential {
public:
    struct Grid {
        std::size_t nx = 1, ny = 1, nz = 1;
        double dx = 1.0;
        std::size_t cells() const { return nx * ny * nz; }
    };

    WhiteNoisePotential(Grid grid, double dt, const PhysicalConstants& pc, std::uint64_t seed)
        : grid_(grid), dt_(dt), seed_(seed) {
        if (!(dt > 0.0)) throw DomainError("WhiteNoisePotential: dt must be > 0");
        const std::size_t n = grid_.cells();
        if (n == 0 || n > 4096)
            throw ResourceError("WhiteNoisePotential: cell count out of supported range");
        centers_.reserve(n);
        for (std::size_t ix = 0; ix < grid_.nx; ++ix)
            for (std::size_t iy = 0; iy < grid_.ny; ++iy)
                for (std::size_t iz = 0; iz < grid_.nz; ++iz)
                    centers_.push_back(Vec3{grid_.dx * static_cast<double>(ix),
                                            grid_.dx * static_cast<double>(iy),
                                            grid_.dx * static_cast<double>(iz)});
        const double ghbar = pc.G * pc.hbar;
        // Same-cell variance: kernel averaged over an equal-volume sphere,
        // <1/|x-x'|> = (6/5) / r_eq with r_eq = (3/(4 pi))^{1/3} dx.
        const double r_eq = std::cbrt(3.0 / (4.0 * std::numbers::pi)) * grid_.dx;
        Eigen::MatrixXd cov(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double r = (centers_[i] - centers_[j]).norm();
                cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    r < grid_.dx ? ghbar * 1.2 / r_eq : ghbar / r;
            }
        Eigen::LLT<Eigen::MatrixXd> llt(cov);
        if (llt.info() != Eigen::Success)
            throw NumericalError("WhiteNoisePotential: covariance not positive definite");
        chol_ = llt.matrixL();
    }

    const Grid& grid() const { return grid_; }
    double dt() const { return dt_; }
    Vec3 center(std::size_t flat) const { return centers_.at(flat); }

    std::size_t flat_index(std::size_t ix, std::size_t iy, std::size_t iz) const {
        if (ix >= grid_.nx || iy >= grid_.ny || iz >= grid_.nz)
            throw DomainError("WhiteNoisePotential: cell index out of grid");
        return (ix * grid_.ny + iy) * grid_.nz + iz;
    }

    // Potential increment for one cell at one time step; a pure function of
    // (seed, cell, step).
    double sample(std::size_t flat, std::size_t step) const {
        if (flat >= centers_.size()) throw DomainError("WhiteNoisePotential: cell out of grid");
        if (step != cached_step_ || snapshot_.empty()) {
            const std::size_t n = centers_.size();
            Eigen::VectorXd z(n);
            rng::SplitMix64 gen(rng::derive_seed(seed_, 0xD10, step));
            for (std::size_t i = 0; i < n; ++i) z(static_cast<Eigen::Index>(i)) = gen.normal();
            Eigen::VectorXd v = chol_ * z / std::sqrt(dt_);
            snapshot_.assign(v.data(), v.data() + n);
            cached_step_ = step;
        }
        return snapshot_[flat];
    }

private:
    Grid grid_;
    double dt_;
    std::uint64_t seed_;
    std::vector<Vec3> centers_;
    Eigen::MatrixXd chol_;
    mutable std::vector<double> snapshot_;
    mutable std::size_t cached_step_ = static_cast<std::size_t>(-1);
};

// --- separable power-family correlations (generalized bound solutions) -------

struct PowerFamilySpec {
    double j = 0.0;  // spatial exponent, P(x,x) = R^{2j}
    double m = 0.0;  // overall T exponent of g(t,t') = T^m t^{n1} t'^{n2}
    double n1 = 0.0;
    double n2 = 0.0;
    double K_const = 1.0;

    void validate() const {
        if (!(n1 > -1.0) || !(n2 > -1.0))
            throw DomainError("PowerFamilySpec: need n1, n2 > -1 for finite time integrals");
        if (!(K_const > 0.0)) throw DomainError("PowerFamilySpec: K_const must be > 0");
    }
};

// Delta s^2 = (K^2 c^2 / 4) R^{2j} T^{m+n1+n2+2} / ((n1+1)(n2+1)).
inline double family_sample_variance(const PowerFamilySpec& s, double R, double T, double c) {
    s.validate();
    if (!(R > 0.0) || !(T > 0.0)) throw DomainError("family_sample_variance: need R, T > 0");
    return 0.25 * s.K_const * s.K_const * c * c * std::pow(R, 2.0 * s.j) *
           std::pow(T, s.m + s.n1 + s.n2 + 2.0) / ((s.n1 + 1.0) * (s.n2 + 1.0));
}

} // namespace gravdec::noise

#pragma once

// Translational two-level model of a perfect absorber.
//
// Ground state |g> = a|in> + b|out>, excited state |f> = b*|in> - a*|out>,
// with H = omega_f |f><f| and the ground energy pinned to zero.  Vectors are
// stored in the energy basis {|g>, |f>}; inverting the definitions gives
//
//     |in>  = a*|g> + b|f>
//     |out> = b*|g> - a|f>

#include <algorithm>
#include <cmath>
#include <complex>

#include "ewm/errors.hpp"

namespace ewm {

using complex = std::complex<double>;

inline constexpr double kAbsorberNormTolerance = 1e-12;

struct AbsorberParams {
    complex alpha;
    complex beta;
    double omega_f;

    // Validates |alpha|^2 + |beta|^2 = 1 and omega_f > 0.
    static AbsorberParams make(complex alpha, complex beta, double omega_f)
    {
        if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > kAbsorberNormTolerance)
            throw InvalidArgument("absorber: |alpha|^2 + |beta|^2 must equal 1");
        if (!(omega_f > 0.0) || !std::isfinite(omega_f))
            throw InvalidArgument("absorber: omega_f must be positive");
        return AbsorberParams{alpha, beta, omega_f};
    }

    // beta = sqrt(1 - |alpha|^2) * exp(i beta_phase).
    static AbsorberParams from_alpha(complex alpha, double omega_f, double beta_phase = 0.0)
    {
        const double a2 = std::norm(alpha);
        if (a2 > 1.0 + kAbsorberNormTolerance)
            throw InvalidArgument("absorber: |alpha| must not exceed 1");
        const double b = std::sqrt(std::max(0.0, 1.0 - a2));
        return make(alpha, std::polar(b, beta_phase), omega_f);
    }
};

enum class Level { Ground, Excited };

struct AbsorberVec {
    complex g_amp;
    complex f_amp;

    complex operator[](Level level) const { return level == Level::Ground ? g_amp : f_amp; }

    friend AbsorberVec operator*(complex c, const AbsorberVec& v) { return {c * v.g_amp, c * v.f_amp}; }
    friend AbsorberVec operator+(const AbsorberVec& a, const AbsorberVec& b)
    {
        return {a.g_amp + b.g_amp, a.f_amp + b.f_amp};
    }
    bool operator==(const AbsorberVec&) const = default;
};

// <lhs|rhs>
inline complex inner(const AbsorberVec& lhs, const AbsorberVec& rhs)
{
    return std::conj(lhs.g_amp) * rhs.g_amp + std::conj(lhs.f_amp) * rhs.f_amp;
}

inline double norm_sq(const AbsorberVec& v) { return std::norm(v.g_amp) + std::norm(v.f_amp); }

inline AbsorberVec ground(const AbsorberParams&) { return {1.0, 0.0}; }
inline AbsorberVec excited(const AbsorberParams&) { return {0.0, 1.0}; }
inline AbsorberVec in_state(const AbsorberParams& p) { return {std::conj(p.alpha), p.beta}; }
inline AbsorberVec out_state(const AbsorberParams& p) { return {std::conj(p.beta), -p.alpha}; }

inline double level_energy(Level level, const AbsorberParams& p)
{
    return level == Level::Ground ? 0.0 : p.omega_f;
}

// <v|H|v> for a normalized v.
inline double mean_energy(const AbsorberVec& v, const AbsorberParams& p)
{
    if (std::abs(norm_sq(v) - 1.0) > 1e-9)
        throw NotNormalized("mean_energy: absorber vector is not normalized");
    return p.omega_f * std::norm(v.f_amp);
}

// Position-basis coordinates (<in|v>, <out|v>) of an energy-basis vector.
struct PositionCoords {
    complex in_amp;
    complex out_amp;
};

inline PositionCoords to_position(const AbsorberVec& v, const AbsorberParams& p)
{
    return {inner(in_state(p), v), inner(out_state(p), v)};
}

inline AbsorberVec from_position(const PositionCoords& c, const AbsorberParams& p)
{
    return c.in_amp * in_state(p) + c.out_amp * out_state(p);
}

} // namespace ewm

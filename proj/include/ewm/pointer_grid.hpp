#pragma once

// Discretized single-photon energy wavefunctions.
//
// A PointerWavefunction stores complex amplitude densities psi_k on a uniform
// frequency grid omega_k = omega_min + k * delta_omega (hbar = 1, so energies
// and frequencies share units).  All statistics are rectangle-rule sums with
// the delta_omega weight:
//
//     norm_sq = sum_k |psi_k|^2 dw
//     mean    = sum_k omega_k |psi_k|^2 dw / norm_sq
//
// Energy shifts are restricted to whole grid steps, which keeps them exact.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "ewm/errors.hpp"

namespace ewm {

using complex = std::complex<double>;

// Fraction of the squared norm allowed to fall off the grid in a shift.
inline constexpr double kTruncationTolerance = 1e-12;
// Pointer support required on each side of a Gaussian centre, in sigmas.
inline constexpr double kPaddingSigmas = 8.0;

inline constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

class FrequencyGrid {
public:
    FrequencyGrid(double omega_min, double delta_omega, std::size_t n_points)
        : omega_min_(omega_min), delta_omega_(delta_omega), n_points_(n_points)
    {
        if (!std::isfinite(omega_min))
            throw InvalidArgument("FrequencyGrid: omega_min must be finite");
        if (!(delta_omega > 0.0) || !std::isfinite(delta_omega))
            throw InvalidArgument("FrequencyGrid: delta_omega must be positive");
        if (n_points < 2)
            throw InvalidArgument("FrequencyGrid: need at least two points");
    }

    double omega_min() const { return omega_min_; }
    double delta_omega() const { return delta_omega_; }
    std::size_t size() const { return n_points_; }

    double omega(std::size_t k) const { return omega_min_ + static_cast<double>(k) * delta_omega_; }
    double omega_max() const { return omega(n_points_ - 1); }

    // Number of whole grid steps equal to `shift`; throws if `shift` is not
    // a multiple of delta_omega to within 1e-12 * delta_omega.
    long quanta_for(double shift) const
    {
        const double steps = std::round(shift / delta_omega_);
        if (std::abs(shift - steps * delta_omega_) > 1e-12 * delta_omega_)
            throw AlignmentError("energy shift " + std::to_string(shift)
                                 + " is not a multiple of the grid spacing "
                                 + std::to_string(delta_omega_));
        return static_cast<long>(steps);
    }

    bool operator==(const FrequencyGrid&) const = default;

private:
    double omega_min_;
    double delta_omega_;
    std::size_t n_points_;
};

class PointerWavefunction {
public:
    explicit PointerWavefunction(FrequencyGrid grid)
        : grid_(grid), amplitudes_(grid.size(), complex{})
    {
    }

    PointerWavefunction(FrequencyGrid grid, std::vector<complex> amplitudes)
        : grid_(grid), amplitudes_(std::move(amplitudes))
    {
        if (amplitudes_.size() != grid_.size())
            throw InvalidArgument("PointerWavefunction: amplitude count does not match grid");
    }

    const FrequencyGrid& grid() const { return grid_; }
    std::size_t size() const { return amplitudes_.size(); }

    std::span<const complex> amplitudes() const { return amplitudes_; }
    std::span<complex> amplitudes() { return amplitudes_; }

    complex operator[](std::size_t k) const { return amplitudes_[k]; }
    complex& operator[](std::size_t k) { return amplitudes_[k]; }

    PointerWavefunction& operator*=(complex c)
    {
        for (auto& a : amplitudes_)
            a *= c;
        return *this;
    }

    PointerWavefunction& operator+=(const PointerWavefunction& other)
    {
        require_same_grid(other);
        for (std::size_t k = 0; k < amplitudes_.size(); ++k)
            amplitudes_[k] += other.amplitudes_[k];
        return *this;
    }

    PointerWavefunction& operator-=(const PointerWavefunction& other)
    {
        require_same_grid(other);
        for (std::size_t k = 0; k < amplitudes_.size(); ++k)
            amplitudes_[k] -= other.amplitudes_[k];
        return *this;
    }

    friend PointerWavefunction operator*(complex c, PointerWavefunction psi) { return psi *= c; }
    friend PointerWavefunction operator+(PointerWavefunction a, const PointerWavefunction& b) { return a += b; }
    friend PointerWavefunction operator-(PointerWavefunction a, const PointerWavefunction& b) { return a -= b; }

    void require_same_grid(const PointerWavefunction& other) const
    {
        if (!(grid_ == other.grid_))
            throw GridMismatch("pointer wavefunctions live on different frequency grids");
    }

private:
    FrequencyGrid grid_;
    std::vector<complex> amplitudes_;
};

inline double norm_sq(const PointerWavefunction& psi)
{
    double sum = 0.0;
    for (const auto& a : psi.amplitudes())
        sum += std::norm(a);
    return sum * psi.grid().delta_omega();
}

// Conjugate-linear in the first argument.
inline complex overlap(const PointerWavefunction& lhs, const PointerWavefunction& rhs)
{
    lhs.require_same_grid(rhs);
    complex sum{};
    const auto a = lhs.amplitudes();
    const auto b = rhs.amplitudes();
    for (std::size_t k = 0; k < a.size(); ++k)
        sum += std::conj(a[k]) * b[k];
    return sum * lhs.grid().delta_omega();
}

inline double mean_frequency(const PointerWavefunction& psi)
{
    const auto& grid = psi.grid();
    double weight = 0.0;
    double first = 0.0;
    for (std::size_t k = 0; k < psi.size(); ++k) {
        const double p = std::norm(psi[k]);
        weight += p;
        first += grid.omega(k) * p;
    }
    if (weight == 0.0)
        throw ZeroNorm("mean_frequency of a zero wavefunction");
    return first / weight;
}

inline double variance(const PointerWavefunction& psi)
{
    const double mean = mean_frequency(psi);
    const auto& grid = psi.grid();
    double weight = 0.0;
    double second = 0.0;
    for (std::size_t k = 0; k < psi.size(); ++k) {
        const double p = std::norm(psi[k]);
        const double d = grid.omega(k) - mean;
        weight += p;
        second += d * d * p;
    }
    return second / weight;
}

inline PointerWavefunction normalized(PointerWavefunction psi)
{
    const double n = norm_sq(psi);
    if (n == 0.0)
        throw ZeroNorm("cannot normalize a zero wavefunction");
    psi *= 1.0 / std::sqrt(n);
    return psi;
}

// Real Gaussian whose density |phi|^2 has the given mean and standard
// deviation.  Normalized on the grid, not in the continuum.
inline PointerWavefunction make_gaussian(const FrequencyGrid& grid, double center, double sigma)
{
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw InvalidArgument("make_gaussian: sigma must be positive");
    if (!std::isfinite(center))
        throw InvalidArgument("make_gaussian: center must be finite");
    const double slack = 1e-9 * sigma;
    if (center - kPaddingSigmas * sigma < grid.omega_min() - slack
        || center + kPaddingSigmas * sigma > grid.omega_max() + slack)
        throw GridTooNarrow("make_gaussian: grid must span center +/- 8 sigma");

    PointerWavefunction psi(grid);
    const double inv_four_var = 1.0 / (4.0 * sigma * sigma);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double d = grid.omega(k) - center;
        psi[k] = std::exp(-d * d * inv_four_var);
    }
    return normalized(std::move(psi));
}

// out(omega) = in(omega + quanta * dw): the distribution moves down in energy
// by quanta grid steps.  Negative quanta move it up.  Amplitude pushed past
// either end is dropped; more than 1e-12 of the squared norm is an error.
inline PointerWavefunction shift_down(const PointerWavefunction& psi, long quanta)
{
    if (quanta == 0)
        return psi;
    const auto n = static_cast<long>(psi.size());
    PointerWavefunction out(psi.grid());

    double total = 0.0;
    double lost = 0.0;
    for (long k = 0; k < n; ++k) {
        const double p = std::norm(psi[static_cast<std::size_t>(k)]);
        total += p;
        const long dest = k - quanta;
        if (dest < 0 || dest >= n)
            lost += p;
        else
            out[static_cast<std::size_t>(dest)] = psi[static_cast<std::size_t>(k)];
    }
    if (lost > kTruncationTolerance * total)
        throw TruncationError("shift by " + std::to_string(quanta)
                              + " grid steps pushes a fraction " + std::to_string(lost / total)
                              + " of the pointer off the grid");
    return out;
}

// Shift by an energy rather than a step count; the energy must be grid aligned.
inline PointerWavefunction shift_down_by(const PointerWavefunction& psi, double energy)
{
    return shift_down(psi, psi.grid().quanta_for(energy));
}

} // namespace ewm

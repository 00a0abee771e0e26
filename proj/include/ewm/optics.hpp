#pragma once

// Optical elements acting on a JointState: the two balanced beam splitters of
// a Mach-Zehnder interferometer and the non-absorption map of a perfect
// absorber sitting on one path.

#include <cmath>
#include <numbers>
#include <string>

#include "ewm/absorber.hpp"
#include "ewm/errors.hpp"
#include "ewm/joint_state.hpp"
#include "ewm/pointer_grid.hpp"

namespace ewm {

namespace detail {

inline void require_only_paths(const JointState& state, std::initializer_list<PathLabel> allowed,
                               const char* element)
{
    for (const auto& [key, psi] : state.branches()) {
        bool ok = false;
        for (auto p : allowed)
            ok = ok || key.path == p;
        if (!ok)
            throw WrongStage(std::string(element) + ": unexpected branch on path "
                             + std::string(to_string(key.path)));
    }
}

} // namespace detail

// Input -> (ArmI + ArmII)/sqrt(2), per absorber level and frequency.
inline JointState first_beam_splitter(const JointState& state)
{
    detail::require_only_paths(state, {PathLabel::Input}, "first_beam_splitter");
    const double r = kInvSqrt2;
    JointState out(state.grid());
    out.set_absorbed_prob(state.absorbed_prob());
    for (const auto& [key, psi] : state.branches()) {
        const auto half = r * psi;
        out.set(PathLabel::ArmI, key.level, half);
        out.set(PathLabel::ArmII, key.level, half);
    }
    return out;
}

// ArmI  -> (Bright + Dark)/sqrt(2)
// ArmII -> (Bright - Dark)/sqrt(2)
inline JointState second_beam_splitter(const JointState& state)
{
    detail::require_only_paths(state, {PathLabel::ArmI, PathLabel::ArmII}, "second_beam_splitter");
    const double r = kInvSqrt2;
    JointState out(state.grid());
    out.set_absorbed_prob(state.absorbed_prob());
    for (auto level : kAllLevels) {
        const auto* arm1 = state.find(PathLabel::ArmI, level);
        const auto* arm2 = state.find(PathLabel::ArmII, level);
        if (!arm1 && !arm2)
            continue;
        const auto a = arm1 ? *arm1 : PointerWavefunction(state.grid());
        const auto b = arm2 ? *arm2 : PointerWavefunction(state.grid());
        out.set(PathLabel::Bright, level, r * (a + b));
        out.set(PathLabel::Dark, level, r * (a - b));
    }
    return out;
}

// Energy-conserving non-absorption map on `arm`.
//
// The absorber either absorbs the photon (its |in> component) or lets it
// pass while the pair ends up projected on |out>.  Each absorber transition
// e_i -> e_j is accompanied by an opposite photon shift so the pair's total
// energy E = omega + omega_i is conserved:
//
//     X(E)  = sum_i <out|e_i> psi_i(E - omega_i)      surviving amplitude
//     Y(E)  = sum_i <in|e_i>  psi_i(E - omega_i)      absorbed amplitude
//     (arm, e_j)(omega) = <e_j|out> X(omega + omega_j)
//
// and absorbed_prob grows by norm_sq(Y).  For a ground-level input psi this
// gives |b|^2 psi(omega) on g and -ab psi(omega + omega_f) on f.  Action on an
// input that already carries excited-level amplitude is an extension of the
// ground-level case and should be treated as experimental.
inline JointState nonabsorption_interaction(const JointState& state, PathLabel arm, const AbsorberParams& params)
{
    if (arm != PathLabel::Input && arm != PathLabel::ArmI && arm != PathLabel::ArmII)
        throw InvalidArgument("nonabsorption_interaction: absorber must sit on Input, ArmI or ArmII");

    const auto* psi_g = state.find(arm, Level::Ground);
    const auto* psi_f = state.find(arm, Level::Excited);
    if (!psi_g && !psi_f)
        return state;

    const long q = state.grid().quanta_for(params.omega_f);
    const AbsorberVec in = in_state(params);
    const AbsorberVec out = out_state(params);

    // Total-energy frame: a ground branch sits at E = omega, an excited
    // branch at E = omega + omega_f, i.e. psi_f(E - omega_f) is psi_f moved up.
    PointerWavefunction survive(state.grid());
    PointerWavefunction absorb(state.grid());
    if (psi_g) {
        survive += std::conj(out.g_amp) * *psi_g;
        absorb += std::conj(in.g_amp) * *psi_g;
    }
    if (psi_f) {
        const auto raised = shift_down(*psi_f, -q);
        survive += std::conj(out.f_amp) * raised;
        absorb += std::conj(in.f_amp) * raised;
    }

    JointState result = state;
    result.erase(arm);
    result.set(arm, Level::Ground, out.g_amp * survive);
    result.set(arm, Level::Excited, out.f_amp * shift_down(survive, q));
    result.add_absorbed_prob(norm_sq(absorb));
    return result;
}

// The arm without an absorber.
inline JointState free_pass(const JointState& state, PathLabel /*arm*/) { return state; }

} // namespace ewm

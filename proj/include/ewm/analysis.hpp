#pragma once

// Post-selection, conditional pointer statistics and weak values.

#include <array>
#include <cmath>
#include <complex>
#include <optional>

#include "ewm/absorber.hpp"
#include "ewm/errors.hpp"
#include "ewm/joint_state.hpp"
#include "ewm/pointer_grid.hpp"

namespace ewm {

// Linear operator on the discrete (path x level) factor, slot order as in
// DiscreteVec.
class Observable {
public:
    static constexpr std::size_t kDim = DiscreteVec::kDim;
    using Matrix = std::array<std::array<complex, kDim>, kDim>;

    explicit Observable(const Matrix& matrix, bool allow_non_hermitian = false) : matrix_(matrix)
    {
        if (!allow_non_hermitian && !is_hermitian(1e-12))
            throw InvalidArgument("Observable: matrix is not Hermitian");
    }

    const Matrix& matrix() const { return matrix_; }

    bool is_hermitian(double tol) const
    {
        for (std::size_t i = 0; i < kDim; ++i)
            for (std::size_t j = 0; j < kDim; ++j)
                if (std::abs(matrix_[i][j] - std::conj(matrix_[j][i])) > tol)
                    return false;
        return true;
    }

    DiscreteVec apply(const DiscreteVec& v) const
    {
        DiscreteVec out;
        for (std::size_t i = 0; i < kDim; ++i)
            for (std::size_t j = 0; j < kDim; ++j)
                out[i] += matrix_[i][j] * v[j];
        return out;
    }

    Observable operator-() const
    {
        Matrix m = matrix_;
        for (auto& row : m)
            for (auto& x : row)
                x = -x;
        return Observable(m, true);
    }

private:
    Matrix matrix_{};
};

// omega_f |path><path| (x) |f><f|: the absorber Hamiltonian restricted to the
// photon being on `path`.
inline Observable absorber_energy_on(PathLabel path, double omega_f)
{
    Observable::Matrix m{};
    const auto s = DiscreteVec::slot(path, Level::Excited);
    m[s][s] = omega_f;
    return Observable(m);
}

// <post|obs|pre> / <post|pre>
inline complex weak_value(const DiscreteVec& pre, const DiscreteVec& post, const Observable& obs)
{
    const complex denom = inner(post, pre);
    if (std::abs(denom) <= 1e-12 * std::sqrt(pre.norm_sq() * post.norm_sq()))
        throw UndefinedWeakValue("weak value undefined: pre- and post-selection are orthogonal");
    return inner(post, obs.apply(pre)) / denom;
}

struct PostSelection {
    AbsorberVec absorber_bra;
    PathLabel path;

    static PostSelection make(const AbsorberVec& bra, PathLabel path)
    {
        if (std::abs(norm_sq(bra) - 1.0) > 1e-12)
            throw NotNormalized("PostSelection: absorber state must be normalized");
        return {bra, path};
    }
};

struct PostSelectResult {
    // Per launched photon: the absorbed probability is part of the budget.
    double probability = 0.0;
    // Conditioned on the photon not having been absorbed.
    double conditional_probability = 0.0;
    // Normalized conditional pointer; empty for a zero-probability outcome.
    std::optional<PointerWavefunction> pointer;
};

// chi(omega) = sum_level conj(bra_level) * branch(path, level)(omega)
inline PostSelectResult post_select(const JointState& state, const PostSelection& sel)
{
    PointerWavefunction chi(state.grid());
    bool any = false;
    for (auto level : kAllLevels) {
        if (const auto* psi = state.find(sel.path, level)) {
            chi += std::conj(sel.absorber_bra[level]) * *psi;
            any = true;
        }
    }
    PostSelectResult result;
    const double surviving = total_norm_sq(state);
    const double p = any ? norm_sq(chi) : 0.0;
    if (p == 0.0)
        return result;
    result.probability = p / (surviving + state.absorbed_prob());
    result.conditional_probability = p / surviving;
    result.pointer = normalized(std::move(chi));
    return result;
}

inline double conditional_shift(const JointState& state, const PostSelection& sel, double reference_mean)
{
    const auto r = post_select(state, sel);
    if (!r.pointer)
        throw ZeroProbability("conditional_shift: post-selected outcome has zero probability");
    return mean_frequency(*r.pointer) - reference_mean;
}

inline double measurement_strength(double sigma, double omega_f)
{
    if (!(sigma > 0.0))
        throw InvalidArgument("measurement_strength: sigma must be positive");
    return omega_f / sigma;
}

struct WeakValueResult {
    complex weak_value;
    double postselect_prob;
    double exact_shift;
    double predicted_shift;
    double discrepancy;
};

// Pre-selection for a single path: the absorber conditioned on the photon
// surviving, |out>.
inline DiscreteVec direct_preselection(const AbsorberParams& p)
{
    return DiscreteVec{}.add(PathLabel::Input, out_state(p));
}

inline DiscreteVec direct_postselection(const AbsorberParams& p)
{
    return DiscreteVec{}.add(PathLabel::Input, out_state(p));
}

// Pre-selection inside the interferometer, absorber on arm I:
// b|out>|I> + a|in>|II> + b|out>|II>.
inline DiscreteVec mz_preselection(const AbsorberParams& p)
{
    return DiscreteVec{}
        .add(PathLabel::ArmI, out_state(p), p.beta)
        .add(PathLabel::ArmII, in_state(p), p.alpha)
        .add(PathLabel::ArmII, out_state(p), p.beta);
}

// |in>|Dark> propagated back through the second beam splitter: |in>(|I> - |II>).
inline DiscreteVec mz_postselection(const AbsorberParams& p)
{
    return DiscreteVec{}.add(PathLabel::ArmI, in_state(p)).add(PathLabel::ArmII, in_state(p), -1.0);
}

} // namespace ewm

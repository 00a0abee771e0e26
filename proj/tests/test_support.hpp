#pragma once

#include <cmath>
#include <complex>
#include <initializer_list>
#include <numbers>
#include <random>

#include "ewm/absorber.hpp"
#include "ewm/joint_state.hpp"
#include "ewm/pointer_grid.hpp"

namespace test_support {

// Unit-norm state with a random Gaussian pointer and random complex weight in
// every (path, level) slot of the given paths.  Pointers stay 8 sigma inside
// a [-12, 12] grid even after a shift of one unit.
inline ewm::JointState random_state(std::mt19937_64& rng, const ewm::FrequencyGrid& grid,
                                    std::initializer_list<ewm::PathLabel> paths)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> width(0.5, 1.2);
    ewm::JointState s(grid);
    for (auto p : paths)
        for (auto l : ewm::kAllLevels)
            s.set(p, l, ewm::complex(u(rng), u(rng)) * ewm::make_gaussian(grid, u(rng), width(rng)));
    const double scale = 1.0 / std::sqrt(ewm::total_norm_sq(s));
    ewm::JointState out(grid);
    for (const auto& [k, psi] : s.branches())
        out.set(k.path, k.level, scale * psi);
    return out;
}

inline ewm::AbsorberParams random_params(std::mt19937_64& rng, double omega_f)
{
    std::uniform_real_distribution<double> mag(0.0, 1.0);
    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    return ewm::AbsorberParams::from_alpha(std::polar(mag(rng), phase(rng)), omega_f, phase(rng));
}

} // namespace test_support

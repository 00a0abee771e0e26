#pragma once

// Built-in acceptance checks run by `ewm selftest`.  Expected values are the
// closed-form predictions; the test suite carries the independent quadrature
// oracles.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "ewm/analysis.hpp"
#include "ewm/optics.hpp"
#include "ewm/report_io.hpp"
#include "ewm/scenarios.hpp"

namespace ewm {

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

namespace selftest_detail {

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Random surviving-photon state on arbitrary paths and levels, with
// Gaussian pointers well inside the grid.
inline JointState random_state(std::mt19937_64& rng, const FrequencyGrid& grid, std::initializer_list<PathLabel> paths)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> width(0.5, 1.2);
    JointState s(grid);
    for (auto p : paths)
        for (auto l : kAllLevels) {
            auto psi = make_gaussian(grid, u(rng), width(rng));
            s.set(p, l, complex(u(rng), u(rng)) * psi);
        }
    const double n = total_norm_sq(s);
    JointState out(grid);
    for (const auto& [k, psi] : s.branches())
        out.set(k.path, k.level, (1.0 / std::sqrt(n)) * psi);
    return out;
}

inline AbsorberParams random_params(std::mt19937_64& rng, double omega_f)
{
    std::uniform_real_distribution<double> mag(0.0, 1.0);
    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    return AbsorberParams::from_alpha(std::polar(mag(rng), phase(rng)), omega_f, phase(rng));
}

} // namespace selftest_detail

inline std::vector<CheckResult> run_selftest()
{
    using namespace selftest_detail;
    std::vector<CheckResult> results;
    auto record = [&](std::string name, bool ok, std::string detail) {
        results.push_back({std::move(name), ok, std::move(detail)});
    };

    // 1. dark-port probability
    {
        bool ok = true;
        double worst = 0.0;
        for (double a : {0.3, 0.5, 0.7, 1.0}) {
            ScenarioConfig c;
            c.alpha = a;
            const auto r = run_mz(c);
            worst = std::max({worst, std::abs(*r.p_dark - a * a / 4), std::abs(r.p_absorbed - a * a / 2),
                              std::abs(r.probability_budget() - 1.0),
                              std::abs(*r.p_dark + *r.p_bright + r.p_absorbed - 1.0)});
            ok = ok && std::abs(*r.p_dark - a * a / 4) <= 1e-10 && std::abs(r.p_absorbed - a * a / 2) <= 1e-12
                 && std::abs(r.probability_budget() - 1.0) <= 1e-10
                 && std::abs(*r.p_dark + *r.p_bright + r.p_absorbed - 1.0) <= 1e-10;
        }
        record("dark-port probability", ok, "max deviation " + format_double(worst));
    }

    // 2. dark-port weak value
    {
        std::mt19937_64 rng(20190501);
        std::uniform_real_distribution<double> wf(0.001, 2.0);
        std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
        std::uniform_real_distribution<double> mag(0.05, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            const auto p = random_params(rng, wf(rng));
            if (std::abs(p.alpha) < 1e-3)
                continue;
            const complex c1 = std::polar(mag(rng), phase(rng));
            const complex c2 = std::polar(mag(rng), phase(rng));
            const auto w = weak_value(c1 * mz_preselection(p), c2 * mz_postselection(p),
                                      -absorber_energy_on(PathLabel::ArmI, p.omega_f));
            worst = std::max(worst, std::abs(w - complex(-p.omega_f * std::norm(p.beta))));
        }
        record("dark-port weak value", worst <= 1e-12, "max |error| " + format_double(worst));
    }

    // 3. direct weak value and shift
    {
        const auto p = AbsorberParams::from_alpha(std::sqrt(0.5), 0.01);
        const auto w = weak_value(direct_preselection(p), direct_postselection(p),
                                  -absorber_energy_on(PathLabel::Input, p.omega_f));
        ScenarioConfig c;
        c.alpha = std::sqrt(0.5);
        const auto r = run_direct(c);
        const double want = -c.omega_f * 0.5;
        const double shift_err = rel_err(r.comparison->exact_shift, want);
        record("direct weak value", std::abs(w - want) <= 1e-12 && shift_err <= 0.01,
               "shift relative error " + format_double(shift_err));
    }

    // 4. interaction-free energy transfer
    {
        bool ok = true;
        double worst = 0.0;
        for (double a : {0.3, 0.5, 0.7}) {
            ScenarioConfig c;
            c.alpha = a;
            const auto r = run_mz(c);
            const double e = rel_err(*r.conditional_absorber_energy, c.omega_f * (1 - a * a));
            worst = std::max(worst, e);
            ok = ok && e <= 0.01;
        }
        ScenarioConfig c;
        c.alpha = 1.0;
        ok = ok && run_mz(c).conditional_absorber_energy == 0.0;
        record("interaction-free energy transfer", ok, "max relative error " + format_double(worst));
    }

    // 5. convergence order
    {
        ScenarioConfig c;
        c.alpha = 0.5;
        const std::vector<double> ratios{0.2, 0.1, 0.05, 0.02, 0.01};
        const auto d = convergence_sweep(c, Scenario::Direct, ratios);
        const auto m = convergence_sweep(c, Scenario::MachZehnder, ratios);
        const bool ok = d.slope && m.slope && *d.slope >= 2.0 && *m.slope >= 2.0;
        record("convergence order", ok,
               "slopes direct " + format_double(d.slope) + ", mz " + format_double(m.slope));
    }

    // 6. regime transition
    {
        ScenarioConfig weak;
        weak.alpha = kInvSqrt2;
        weak.omega_f = 0.01;
        ScenarioConfig strong = weak;
        strong.omega_f = 10.0;
        strong.half_span = 24.0;
        strong.grid_points = 8192;
        const double pw = *run_direct(weak).purity;
        const double ps = *run_direct(strong).purity;
        record("regime transition", pw >= 0.999 && ps <= 0.501,
               "purity weak " + format_double(pw) + ", strong " + format_double(ps));
    }

    // 7. conservation properties
    {
        std::mt19937_64 rng(7);
        const FrequencyGrid grid(-12.0, 0.01, 2401);
        std::uniform_int_distribution<int> steps(1, 100);
        double worst_bs = 0.0, worst_int = 0.0, worst_energy = 0.0;
        for (int i = 0; i < 200; ++i) {
            const auto p = random_params(rng, steps(rng) * grid.delta_omega());
            const auto arms = random_state(rng, grid, {PathLabel::ArmI, PathLabel::ArmII});
            worst_bs = std::max(worst_bs, std::abs(total_norm_sq(second_beam_splitter(arms)) - 1.0));
            const auto after = nonabsorption_interaction(arms, PathLabel::ArmI, p);
            worst_int = std::max(worst_int, std::abs(total_norm_sq(after) + after.absorbed_prob() - 1.0));

            const auto g_only = product_state(make_gaussian(grid, 0.0, 1.0), PathLabel::ArmI, {1.0, 0.0});
            const auto shifted = nonabsorption_interaction(g_only, PathLabel::ArmI, p);
            if (std::abs(p.alpha) > 1e-6 && std::abs(p.beta) > 1e-6) {
                const double gain = mean_frequency(*g_only.find(PathLabel::ArmI, Level::Ground))
                                    - mean_frequency(*shifted.find(PathLabel::ArmI, Level::Excited));
                worst_energy = std::max(worst_energy, std::abs(gain - p.omega_f));
            }
        }
        record("conservation properties", worst_bs <= 1e-12 && worst_int <= 1e-12 && worst_energy <= 1e-12,
               "beam splitter " + format_double(worst_bs) + ", interaction " + format_double(worst_int)
                   + ", energy " + format_double(worst_energy));
    }

    // 8. tuned interferometer null
    {
        ScenarioConfig c;
        c.absorber_present = false;
        const double pd = *run_mz(c).p_dark;
        record("tuned-MZ null", pd <= 1e-12, "p_dark " + format_double(pd));
    }

    // 9. determinism (in-process; the test suite also compares CLI output files)
    {
        ScenarioConfig c;
        const bool ok = dump(to_json(run_mz(c))) == dump(to_json(run_mz(c)))
                        && alpha_sweep_csv(alpha_sweep(c, {0.0, 0.5, 1.0}, 2))
                               == alpha_sweep_csv(alpha_sweep(c, {0.0, 0.5, 1.0}, 1));
        record("determinism", ok, ok ? "identical serializations" : "serializations differ");
    }
    return results;
}

} // namespace ewm

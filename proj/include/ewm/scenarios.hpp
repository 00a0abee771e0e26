#pragma once

// End-to-end pipelines.
//
//   direct: photon incident on the absorber, post-selected on the absorber
//           being found at |out>.
//   mz:     absorber on arm I of a balanced Mach-Zehnder interferometer,
//           post-selected on the photon leaving the dark port with the
//           absorber found at |in>.
//
// In both cases the exact conditional pointer shift is compared with the real
// part of the weak value of minus the absorber energy (on arm I for mz).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ewm/absorber.hpp"
#include "ewm/analysis.hpp"
#include "ewm/errors.hpp"
#include "ewm/joint_state.hpp"
#include "ewm/optics.hpp"
#include "ewm/pointer_grid.hpp"

namespace ewm {

enum class Scenario { Direct, MachZehnder };

inline std::string_view to_string(Scenario s) { return s == Scenario::Direct ? "direct" : "mz"; }

inline constexpr std::size_t kMaxGridPoints = std::size_t{1} << 24;

struct ScenarioConfig {
    complex alpha{0.5, 0.0};
    double beta_phase = 0.0;
    double omega_f = 0.01;
    double sigma = 1.0;
    double center = 0.0;
    // Requested resolution; the spacing is refitted so omega_f is a whole
    // number of steps, keeping the span.
    std::size_t grid_points = 4096;
    // Grid covers center +/- half_span.
    double half_span = 12.0;
    // false replaces the absorber by free propagation.
    bool absorber_present = true;

    AbsorberParams absorber() const { return AbsorberParams::from_alpha(alpha, omega_f, beta_phase); }
};

// Uniform grid centred on config.center with delta_omega = omega_f / q.
inline FrequencyGrid make_scenario_grid(const ScenarioConfig& c)
{
    if (!(c.sigma > 0.0) || !std::isfinite(c.sigma))
        throw InvalidArgument("scenario: sigma must be positive");
    if (!(c.omega_f > 0.0) || !std::isfinite(c.omega_f))
        throw InvalidArgument("scenario: omega_f must be positive");
    if (!(c.half_span > 0.0) || !std::isfinite(c.half_span))
        throw InvalidArgument("scenario: grid span must be positive");
    if (c.grid_points < 2)
        throw InvalidArgument("scenario: need at least two grid points");

    const double nominal = 2.0 * c.half_span / static_cast<double>(c.grid_points - 1);
    const double steps = std::max(1.0, std::round(c.omega_f / nominal));
    const double delta = c.omega_f / steps;
    const double n = std::round(2.0 * c.half_span / delta) + 1.0;
    if (n > static_cast<double>(kMaxGridPoints))
        throw GuardrailError("scenario: omega_f is too small for the grid span (needs "
                             + std::to_string(static_cast<long long>(n)) + " points)");
    const auto points = static_cast<std::size_t>(n);
    const FrequencyGrid grid(c.center - 0.5 * static_cast<double>(points - 1) * delta, delta, points);
    grid.quanta_for(c.omega_f);
    return grid;
}

// The pointer must keep 8 sigma of support after moving down by omega_f.
inline void check_padding(const FrequencyGrid& grid, const ScenarioConfig& c)
{
    const double low = c.center - grid.omega_min();
    const double high = grid.omega_max() - c.center;
    const double slack = 1e-9 * c.sigma;
    if (low + slack < kPaddingSigmas * c.sigma + c.omega_f || high + slack < kPaddingSigmas * c.sigma)
        throw TruncationError("scenario: grid span cannot hold the pointer shifted by omega_f "
                              "(need 8 sigma + omega_f below the centre and 8 sigma above)");
}

struct OutcomeProbability {
    std::string name;
    double probability;
};

struct ScenarioReport {
    Scenario scenario;
    AbsorberParams params;
    double sigma;
    double center;
    double ratio;
    FrequencyGrid grid;
    bool absorber_present;

    double p_absorbed;
    // Port probabilities, mz only.
    std::optional<double> p_dark{};
    std::optional<double> p_bright{};
    // Complete orthogonal set of (path, absorber position) outcomes.
    std::vector<OutcomeProbability> outcomes{};

    double postselect_prob;
    std::optional<complex> weak_value{};
    // Present when both the weak value and the conditional pointer exist.
    std::optional<WeakValueResult> comparison{};

    // Absorber conditioned on the photon's path (survival for direct, dark
    // port for mz), before any absorber measurement.
    std::optional<AbsorberDensity> conditional_absorber{};
    std::optional<double> conditional_absorber_energy{};
    // <expected|rho|expected> with expected = |out> (direct) or |in> (mz).
    std::optional<double> conditional_fidelity{};

    // Purity of the absorber reduced state of the surviving photon.
    std::optional<double> purity{};

    DiscreteVec preselection;
    DiscreteVec postselection;

    double probability_budget() const
    {
        double s = p_absorbed;
        for (const auto& o : outcomes)
            s += o.probability;
        return s;
    }
};

namespace detail {

inline JointState restrict_to(const JointState& state, PathLabel path)
{
    JointState out(state.grid());
    for (const auto& [key, psi] : state.branches())
        if (key.path == path)
            out.set(key.path, key.level, psi);
    return out;
}

struct Prepared {
    FrequencyGrid grid;
    PointerWavefunction pointer;
    AbsorberParams params;
};

inline Prepared prepare(const ScenarioConfig& c)
{
    const auto params = c.absorber();
    const auto grid = make_scenario_grid(c);
    check_padding(grid, c);
    return {grid, make_gaussian(grid, c.center, c.sigma), params};
}

inline void fill_conditional(ScenarioReport& r, const JointState& conditioned, const AbsorberVec& expected)
{
    if (total_norm_sq(conditioned) == 0.0)
        return;
    const auto rho = reduced_absorber_density(conditioned);
    r.conditional_absorber = rho;
    r.conditional_absorber_energy = r.params.omega_f * rho(Level::Excited, Level::Excited).real();
    r.conditional_fidelity = rho.expectation(expected).real();
}

inline void fill_weak(ScenarioReport& r, const Observable& obs, const PostSelectResult& sel, double reference_mean)
{
    try {
        r.weak_value = weak_value(r.preselection, r.postselection, obs);
    } catch (const UndefinedWeakValue&) {
        return;
    }
    if (!sel.pointer)
        return;
    const double exact = mean_frequency(*sel.pointer) - reference_mean;
    const double predicted = r.weak_value->real();
    r.comparison = WeakValueResult{*r.weak_value, sel.probability, exact, predicted, exact - predicted};
}

inline JointState evolve_direct(const Prepared& prep, bool absorber_present)
{
    auto state = product_state(prep.pointer, PathLabel::Input, ground(prep.params));
    if (absorber_present)
        return nonabsorption_interaction(state, PathLabel::Input, prep.params);
    return free_pass(state, PathLabel::Input);
}

inline JointState evolve_mz(const Prepared& prep, bool absorber_present)
{
    auto state = first_beam_splitter(product_state(prep.pointer, PathLabel::Input, ground(prep.params)));
    if (absorber_present)
        state = nonabsorption_interaction(state, PathLabel::ArmI, prep.params);
    else
        state = free_pass(state, PathLabel::ArmI);
    return second_beam_splitter(state);
}

inline ScenarioReport blank_report(Scenario s, const Prepared& prep, const ScenarioConfig& c,
                                   const JointState& state)
{
    const bool direct = s == Scenario::Direct;
    return ScenarioReport{
        .scenario = s,
        .params = prep.params,
        .sigma = c.sigma,
        .center = c.center,
        .ratio = measurement_strength(c.sigma, c.omega_f),
        .grid = prep.grid,
        .absorber_present = c.absorber_present,
        .p_absorbed = state.absorbed_prob(),
        .postselect_prob = 0.0,
        .preselection = direct ? direct_preselection(prep.params) : mz_preselection(prep.params),
        .postselection = direct ? direct_postselection(prep.params) : mz_postselection(prep.params),
    };
}

} // namespace detail

// Final joint state of the direct pipeline.
inline JointState run_direct_state(const ScenarioConfig& c)
{
    return detail::evolve_direct(detail::prepare(c), c.absorber_present);
}

// Final joint state of the interferometer pipeline (after the second splitter).
inline JointState run_mz_state(const ScenarioConfig& c)
{
    return detail::evolve_mz(detail::prepare(c), c.absorber_present);
}

inline ScenarioReport run_direct(const ScenarioConfig& c)
{
    const auto prep = detail::prepare(c);
    const auto state = detail::evolve_direct(prep, c.absorber_present);
    const auto& p = prep.params;
    auto r = detail::blank_report(Scenario::Direct, prep, c, state);

    const auto sel_out = post_select(state, PostSelection::make(out_state(p), PathLabel::Input));
    const auto sel_in = post_select(state, PostSelection::make(in_state(p), PathLabel::Input));
    r.outcomes = {{"out", sel_out.probability}, {"in", sel_in.probability}};
    r.postselect_prob = sel_out.probability;

    if (c.absorber_present)
        detail::fill_weak(r, -absorber_energy_on(PathLabel::Input, p.omega_f), sel_out,
                          mean_frequency(prep.pointer));
    detail::fill_conditional(r, state, out_state(p));
    if (total_norm_sq(state) > 0.0)
        r.purity = purity(reduced_absorber_density(state));
    return r;
}

inline ScenarioReport run_mz(const ScenarioConfig& c)
{
    const auto prep = detail::prepare(c);
    const auto state = detail::evolve_mz(prep, c.absorber_present);
    const auto& p = prep.params;
    auto r = detail::blank_report(Scenario::MachZehnder, prep, c, state);

    const double budget = total_norm_sq(state) + state.absorbed_prob();
    const auto dark = detail::restrict_to(state, PathLabel::Dark);
    const auto bright = detail::restrict_to(state, PathLabel::Bright);
    r.p_dark = total_norm_sq(dark) / budget;
    r.p_bright = total_norm_sq(bright) / budget;

    const auto in = in_state(p);
    const auto out = out_state(p);
    const auto sel_dark_in = post_select(state, PostSelection::make(in, PathLabel::Dark));
    r.outcomes = {
        {"bright_in", post_select(state, PostSelection::make(in, PathLabel::Bright)).probability},
        {"bright_out", post_select(state, PostSelection::make(out, PathLabel::Bright)).probability},
        {"dark_in", sel_dark_in.probability},
        {"dark_out", post_select(state, PostSelection::make(out, PathLabel::Dark)).probability},
    };
    r.postselect_prob = sel_dark_in.probability;

    if (c.absorber_present)
        detail::fill_weak(r, -absorber_energy_on(PathLabel::ArmI, p.omega_f), sel_dark_in,
                          mean_frequency(prep.pointer));
    detail::fill_conditional(r, dark, in);
    if (total_norm_sq(state) > 0.0)
        r.purity = purity(reduced_absorber_density(state));
    return r;
}

inline ScenarioReport run_scenario(Scenario s, const ScenarioConfig& c)
{
    return s == Scenario::Direct ? run_direct(c) : run_mz(c);
}

namespace detail {

// Evaluates fn(items[i]) on up to `jobs` threads; results keep input order
// and the first failing item's exception (by index) is rethrown.
template <typename T, typename Fn>
auto parallel_map(const std::vector<T>& items, unsigned jobs, Fn fn)
{
    using R = decltype(fn(items.front()));
    std::vector<std::optional<R>> results(items.size());
    std::vector<std::exception_ptr> errors(items.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < items.size(); i = next++) {
            try {
                results[i].emplace(fn(items[i]));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(items.size())));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n; ++t)
            pool.emplace_back(worker);
    }
    std::vector<R> out;
    out.reserve(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (errors[i])
            std::rethrow_exception(errors[i]);
        out.push_back(std::move(*results[i]));
    }
    return out;
}

} // namespace detail

struct ConvergenceRow {
    double ratio;
    double exact_shift;
    double predicted_shift;
    double abs_discrepancy;
};

struct ConvergenceTable {
    Scenario scenario;
    std::vector<ConvergenceRow> rows;
    // Least-squares slope of log|discrepancy| against log(ratio).
    std::optional<double> slope;
    std::string slope_note;
};

inline std::optional<double> loglog_slope(const std::vector<ConvergenceRow>& rows, std::string& note)
{
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows)
        if (r.abs_discrepancy > 0.0)
            pts.emplace_back(std::log(r.ratio), std::log(r.abs_discrepancy));
    if (pts.size() < 2) {
        note = "slope undefined: fewer than two rows with nonzero discrepancy";
        return std::nullopt;
    }
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (sxx == 0.0) {
        note = "slope undefined: all ratios are equal";
        return std::nullopt;
    }
    return sxy / sxx;
}

// One run per ratio omega_f / sigma in (0, 1), keeping sigma fixed.
inline ConvergenceTable convergence_sweep(const ScenarioConfig& config, Scenario scenario,
                                          const std::vector<double>& ratios, unsigned jobs = 1)
{
    if (ratios.empty())
        throw InvalidArgument("convergence_sweep: no ratios given");
    for (double x : ratios)
        if (!(x > 0.0 && x < 1.0))
            throw InvalidArgument("convergence_sweep: ratios must lie in (0, 1)");

    ConvergenceTable table{scenario, {}, {}, {}};
    table.rows = detail::parallel_map(ratios, jobs, [&](double ratio) {
        ScenarioConfig c = config;
        c.omega_f = ratio * c.sigma;
        const auto rep = run_scenario(scenario, c);
        if (!rep.comparison)
            throw ZeroProbability("convergence_sweep: post-selected outcome never occurs for this alpha");
        return ConvergenceRow{ratio, rep.comparison->exact_shift, rep.comparison->predicted_shift,
                              std::abs(rep.comparison->discrepancy)};
    });
    table.slope = loglog_slope(table.rows, table.slope_note);
    return table;
}

// One interferometer run per |alpha| in [0, 1]; the phase of config.alpha is kept.
inline std::vector<ScenarioReport> alpha_sweep(const ScenarioConfig& config, const std::vector<double>& alphas,
                                               unsigned jobs = 1)
{
    for (double a : alphas)
        if (!(a >= 0.0 && a <= 1.0))
            throw InvalidArgument("alpha_sweep: |alpha| values must lie in [0, 1]");
    const double phase = std::arg(config.alpha);
    return detail::parallel_map(alphas, jobs, [&](double a) {
        ScenarioConfig c = config;
        c.alpha = std::polar(a, phase);
        return run_mz(c);
    });
}

} // namespace ewm

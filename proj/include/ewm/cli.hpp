#pragma once

// Command-line front end.
//
//   ewm run-direct   [options]     single-path scenario report
//   ewm run-mz       [options]     interferometer scenario report
//   ewm sweep-alpha  --alphas ...  one interferometer run per |alpha|
//   ewm sweep-ratio  --ratios ...  convergence of the pointer shift
//   ewm selftest                   built-in acceptance checks
//
// Frequencies (--omega-f, --center, --span) are given in units of sigma;
// --sigma sets the absolute scale.  Every option may also come from a flat
// key=value file passed with --config.
//
// Exit codes: 0 success, 1 selftest failure, 2 usage error, 3 I/O failure,
// 4 numerical guardrail (grid too narrow, misaligned shift, truncation).

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ewm/errors.hpp"
#include "ewm/report_io.hpp"
#include "ewm/scenarios.hpp"
#include "ewm/selftest.hpp"

namespace ewm::cli {

enum ExitCode : int { kOk = 0, kSelftestFailed = 1, kUsage = 2, kIoFailure = 3, kGuardrail = 4 };

enum class Format { Json, Csv };

struct CliInvocation {
    std::string subcommand;
    ScenarioConfig config;
    std::vector<double> alphas{0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> ratios{0.2, 0.1, 0.05, 0.02, 0.01};
    Scenario sweep_scenario = Scenario::MachZehnder;
    Format format = Format::Json;
    std::string output;
    std::string dump_state;
    bool version_header = false;
    unsigned jobs = 1;
};

struct ParseResult {
    std::optional<CliInvocation> invocation;
    int exit_code = kOk;
    std::string out_text;
    std::string err_text;
};

inline ParseResult parse_args(int argc, const char* const* argv)
{
    CLI::App app{"Energy-based weak measurement simulator", "ewm"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key=value file");

    double alpha = 0.5;
    double alpha_phase = 0.0;
    double beta_phase = 0.0;
    double omega_f = 0.01;
    double sigma = 1.0;
    double center = 0.0;
    double span = 12.0;
    std::size_t points = 4096;
    std::string format;
    std::string scenario = "mz";
    CliInvocation inv;

    app.add_option("--alpha", alpha, "|alpha|, amplitude of the absorber ground state inside the path")
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--alpha-phase", alpha_phase, "Phase of alpha (radians)");
    app.add_option("--beta-phase", beta_phase, "Phase of beta (radians)");
    app.add_option("--omega-f", omega_f, "Absorber level splitting, in units of sigma")
        ->check(CLI::PositiveNumber);
    app.add_option("--sigma", sigma, "Pointer energy spread (std of |phi|^2)")->check(CLI::PositiveNumber);
    app.add_option("--center", center, "Pointer mean energy, in units of sigma");
    app.add_option("--span", span, "Grid half-width around the centre, in units of sigma")
        ->check(CLI::PositiveNumber);
    app.add_option("--points", points, "Requested number of grid points")
        ->check(CLI::Range(std::size_t{2}, kMaxGridPoints));
    auto* alphas_opt = app.add_option("--alphas", inv.alphas, "sweep-alpha: comma-separated |alpha| values")
                           ->delimiter(',')
                           ->check(CLI::Range(0.0, 1.0));
    auto* ratios_opt = app.add_option("--ratios", inv.ratios, "sweep-ratio: comma-separated omega_f/sigma values")
                           ->delimiter(',')
                           ->check(CLI::Range(0.0, 1.0));
    auto* scenario_opt = app.add_option("--scenario", scenario, "sweep-ratio: direct or mz")
                             ->check(CLI::IsMember({"direct", "mz"}));
    auto* no_absorber = app.add_flag("--no-absorber", "Replace the absorber by free propagation");
    auto* dump_opt = app.add_option("--dump-state", inv.dump_state, "run-*: write the final joint state as JSON");
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("-o,--output", inv.output, "Output file (default stdout)");
    app.add_flag("--version-header", inv.version_header, "Include the program version in the output");
    app.add_option("--jobs", inv.jobs, "Worker threads for sweeps")->check(CLI::Range(1u, 256u));

    for (const char* name : {"run-direct", "run-mz", "sweep-alpha", "sweep-ratio", "selftest"})
        app.add_subcommand(name)->fallthrough();
    app.get_subcommand("run-direct")->description("Photon incident directly on the absorber");
    app.get_subcommand("run-mz")->description("Absorber on arm I of a Mach-Zehnder interferometer");
    app.get_subcommand("sweep-alpha")->description("Interferometer runs over |alpha| (CSV by default)");
    app.get_subcommand("sweep-ratio")->description("Pointer-shift convergence over omega_f/sigma (CSV by default)");
    app.get_subcommand("selftest")->description("Run the built-in acceptance checks");

    ParseResult result;
    std::ostringstream out, err;
    auto usage_error = [&](const std::string& msg) {
        err << "error: " << msg << "\n\n" << app.help();
        result.exit_code = kUsage;
        result.err_text = err.str();
        return result;
    };

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        result.exit_code = app.exit(e, out, err);
        result.out_text = out.str();
        result.err_text = err.str();
        return result;
    } catch (const CLI::ParseError& e) {
        return usage_error(e.what());
    }

    inv.subcommand = app.get_subcommands().front()->get_name();
    const bool is_run = inv.subcommand == "run-direct" || inv.subcommand == "run-mz";
    if (alphas_opt->count() && inv.subcommand != "sweep-alpha")
        return usage_error("--alphas only applies to sweep-alpha");
    if ((ratios_opt->count() || scenario_opt->count()) && inv.subcommand != "sweep-ratio")
        return usage_error("--ratios and --scenario only apply to sweep-ratio");
    if ((dump_opt->count() || no_absorber->count()) && !is_run)
        return usage_error("--dump-state and --no-absorber only apply to run-direct and run-mz");
    for (double r : inv.ratios)
        if (!(r > 0.0 && r < 1.0))
            return usage_error("--ratios values must lie strictly between 0 and 1");
    if (inv.alphas.empty() || inv.ratios.empty())
        return usage_error("sweep needs at least one value");

    inv.config.alpha = std::polar(alpha, alpha_phase);
    inv.config.beta_phase = beta_phase;
    inv.config.sigma = sigma;
    inv.config.omega_f = omega_f * sigma;
    inv.config.center = center * sigma;
    inv.config.half_span = span * sigma;
    inv.config.grid_points = points;
    inv.config.absorber_present = no_absorber->count() == 0;
    inv.sweep_scenario = scenario == "direct" ? Scenario::Direct : Scenario::MachZehnder;
    if (format.empty())
        inv.format = is_run ? Format::Json : Format::Csv;
    else
        inv.format = format == "csv" ? Format::Csv : Format::Json;

    result.invocation = std::move(inv);
    return result;
}

inline ParseResult parse_args(const std::vector<std::string>& args)
{
    std::vector<const char*> argv{"ewm"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    return parse_args(static_cast<int>(argv.size()), argv.data());
}

namespace detail {

inline bool write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        return false;
    f << text;
    f.flush();
    return static_cast<bool>(f);
}

inline std::string render(const CliInvocation& inv)
{
    const bool csv = inv.format == Format::Csv;
    const bool vh = inv.version_header;
    if (inv.subcommand == "run-direct" || inv.subcommand == "run-mz") {
        const auto s = inv.subcommand == "run-direct" ? Scenario::Direct : Scenario::MachZehnder;
        const auto report = run_scenario(s, inv.config);
        return csv ? to_csv(report, vh) : dump(to_json(report, vh));
    }
    if (inv.subcommand == "sweep-alpha") {
        const auto rows = alpha_sweep(inv.config, inv.alphas, inv.jobs);
        return csv ? alpha_sweep_csv(rows, vh) : dump(alpha_sweep_json(rows, vh));
    }
    const auto table = convergence_sweep(inv.config, inv.sweep_scenario, inv.ratios, inv.jobs);
    return csv ? convergence_csv(table, vh) : dump(to_json(table, vh));
}

} // namespace detail

inline int execute(const CliInvocation& inv, std::ostream& out, std::ostream& err)
{
    if (inv.subcommand == "selftest") {
        int failures = 0;
        for (const auto& r : run_selftest()) {
            out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
            failures += r.passed ? 0 : 1;
        }
        return failures == 0 ? kOk : kSelftestFailed;
    }

    std::string text;
    try {
        text = detail::render(inv);
        if (!inv.dump_state.empty()) {
            const auto state =
                inv.subcommand == "run-direct" ? run_direct_state(inv.config) : run_mz_state(inv.config);
            if (!detail::write_file(inv.dump_state, dump(to_json(state)))) {
                err << "error: cannot write " << inv.dump_state << "\n";
                return kIoFailure;
            }
        }
    } catch (const GuardrailError& e) {
        err << "numerical guardrail: " << e.what() << "\n";
        return kGuardrail;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    if (inv.output.empty()) {
        out << text;
        return out ? kOk : kIoFailure;
    }
    if (!detail::write_file(inv.output, text)) {
        err << "error: cannot write " << inv.output << "\n";
        return kIoFailure;
    }
    return kOk;
}

} // namespace ewm::cli

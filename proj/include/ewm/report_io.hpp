#pragma once

// JSON and CSV encodings of scenario reports and sweep tables.
//
// Numbers are written with the shortest decimal form that round-trips to the
// same double; undefined quantities are JSON null and CSV "nan".  Nothing
// time- or host-dependent is written, so identical inputs give identical
// bytes.

#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ewm/joint_state.hpp"
#include "ewm/scenarios.hpp"

namespace ewm {

inline constexpr int kReportSchema = 1;
inline constexpr const char* kVersion = "1.0.0";

inline std::string format_double(double x)
{
    if (std::isnan(x))
        return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline std::string format_double(const std::optional<double>& x) { return x ? format_double(*x) : "nan"; }

namespace detail {

inline nlohmann::json complex_json(complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

template <typename T>
nlohmann::json optional_json(const std::optional<T>& x)
{
    return x ? nlohmann::json(*x) : nlohmann::json(nullptr);
}

inline nlohmann::json discrete_json(const DiscreteVec& v)
{
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t i = 0; i < DiscreteVec::kDim; ++i)
        out.push_back(complex_json(v[i]));
    return out;
}

inline nlohmann::json slot_names()
{
    nlohmann::json out = nlohmann::json::array();
    for (auto p : kAllPaths)
        for (auto l : kAllLevels)
            out.push_back(std::string(to_string(p)) + "." + std::string(to_string(l)));
    return out;
}

} // namespace detail

inline nlohmann::json to_json(const ScenarioReport& r, bool version_header = false)
{
    using nlohmann::json;
    json doc;
    doc["schema"] = kReportSchema;
    if (version_header)
        doc["version"] = kVersion;
    doc["scenario"] = to_string(r.scenario);
    doc["alpha"] = detail::complex_json(r.params.alpha);
    doc["beta"] = detail::complex_json(r.params.beta);
    doc["omega_f"] = r.params.omega_f;
    doc["sigma"] = r.sigma;
    doc["center"] = r.center;
    doc["ratio"] = r.ratio;
    doc["absorber_present"] = r.absorber_present;
    doc["grid"] = {{"omega_min", r.grid.omega_min()},
                   {"delta_omega", r.grid.delta_omega()},
                   {"n_points", r.grid.size()}};

    doc["p_absorbed"] = r.p_absorbed;
    if (r.scenario == Scenario::MachZehnder) {
        doc["p_dark"] = detail::optional_json(r.p_dark);
        doc["p_bright"] = detail::optional_json(r.p_bright);
    }
    json outcomes = json::object();
    for (const auto& o : r.outcomes)
        outcomes[o.name] = o.probability;
    doc["outcomes"] = std::move(outcomes);
    doc["probability_budget"] = r.probability_budget();
    doc["postselect_prob"] = r.postselect_prob;

    doc["weak_value"] = r.weak_value ? detail::complex_json(*r.weak_value) : json(nullptr);
    doc["exact_shift"] = r.comparison ? json(r.comparison->exact_shift) : json(nullptr);
    doc["predicted_shift"] = r.comparison ? json(r.comparison->predicted_shift) : json(nullptr);
    doc["discrepancy"] = r.comparison ? json(r.comparison->discrepancy) : json(nullptr);

    if (r.conditional_absorber) {
        json rho = json::array();
        for (const auto& row : r.conditional_absorber->m)
            rho.push_back({detail::complex_json(row[0]), detail::complex_json(row[1])});
        doc["conditional_absorber"] = {{"density", std::move(rho)},
                                       {"mean_energy", *r.conditional_absorber_energy},
                                       {"fidelity", *r.conditional_fidelity}};
    } else {
        doc["conditional_absorber"] = nullptr;
    }
    if (r.scenario == Scenario::MachZehnder)
        doc["energy_transfer"] = detail::optional_json(r.conditional_absorber_energy);
    doc["purity"] = detail::optional_json(r.purity);

    doc["two_step"] = {{"slots", detail::slot_names()},
                       {"preselection", detail::discrete_json(r.preselection)},
                       {"postselection", detail::discrete_json(r.postselection)}};
    return doc;
}

inline std::string dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

inline std::string csv_version_line(bool version_header)
{
    return version_header ? std::string("# ewm ") + kVersion + "\n" : std::string();
}

inline const char* kReportCsvHeader =
    "scenario,alpha,p_dark,p_bright,p_absorbed,postselect_prob,exact_shift,weak_value_re,weak_value_im,"
    "energy_transfer,purity,ratio";

inline std::string to_csv(const ScenarioReport& r, bool version_header = false)
{
    std::string s = csv_version_line(version_header);
    s += kReportCsvHeader;
    s += "\n";
    s += std::string(to_string(r.scenario)) + "," + format_double(std::abs(r.params.alpha)) + ","
         + format_double(r.p_dark) + "," + format_double(r.p_bright) + "," + format_double(r.p_absorbed) + ","
         + format_double(r.postselect_prob) + ","
         + format_double(r.comparison ? std::optional(r.comparison->exact_shift) : std::nullopt) + ","
         + format_double(r.weak_value ? std::optional(r.weak_value->real()) : std::nullopt) + ","
         + format_double(r.weak_value ? std::optional(r.weak_value->imag()) : std::nullopt) + ","
         + format_double(r.conditional_absorber_energy) + "," + format_double(r.purity) + ","
         + format_double(r.ratio) + "\n";
    return s;
}

inline const char* kAlphaSweepCsvHeader =
    "alpha,p_dark,p_bright,p_absorbed,exact_shift,weak_value_re,energy_transfer,ratio";

inline std::string alpha_sweep_csv(const std::vector<ScenarioReport>& rows, bool version_header = false)
{
    std::string s = csv_version_line(version_header);
    s += kAlphaSweepCsvHeader;
    s += "\n";
    for (const auto& r : rows) {
        s += format_double(std::abs(r.params.alpha)) + "," + format_double(r.p_dark) + ","
             + format_double(r.p_bright) + "," + format_double(r.p_absorbed) + ","
             + format_double(r.comparison ? std::optional(r.comparison->exact_shift) : std::nullopt) + ","
             + format_double(r.weak_value ? std::optional(r.weak_value->real()) : std::nullopt) + ","
             + format_double(r.conditional_absorber_energy) + "," + format_double(r.ratio) + "\n";
    }
    return s;
}

inline nlohmann::json alpha_sweep_json(const std::vector<ScenarioReport>& rows, bool version_header = false)
{
    nlohmann::json doc;
    doc["schema"] = kReportSchema;
    if (version_header)
        doc["version"] = kVersion;
    doc["sweep"] = "alpha";
    nlohmann::json reports = nlohmann::json::array();
    for (const auto& r : rows)
        reports.push_back(to_json(r));
    doc["reports"] = std::move(reports);
    return doc;
}

inline const char* kConvergenceCsvHeader = "ratio,exact_shift,weak_value_re,abs_discrepancy";

inline std::string convergence_csv(const ConvergenceTable& t, bool version_header = false)
{
    std::string s = csv_version_line(version_header);
    s += kConvergenceCsvHeader;
    s += "\n";
    for (const auto& row : t.rows)
        s += format_double(row.ratio) + "," + format_double(row.exact_shift) + ","
             + format_double(row.predicted_shift) + "," + format_double(row.abs_discrepancy) + "\n";
    return s;
}

inline nlohmann::json to_json(const ConvergenceTable& t, bool version_header = false)
{
    nlohmann::json doc;
    doc["schema"] = kReportSchema;
    if (version_header)
        doc["version"] = kVersion;
    doc["sweep"] = "ratio";
    doc["scenario"] = to_string(t.scenario);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows)
        rows.push_back({{"ratio", row.ratio},
                        {"exact_shift", row.exact_shift},
                        {"weak_value_re", row.predicted_shift},
                        {"abs_discrepancy", row.abs_discrepancy}});
    doc["rows"] = std::move(rows);
    doc["slope"] = detail::optional_json(t.slope);
    if (!t.slope)
        doc["slope_note"] = t.slope_note;
    return doc;
}

} // namespace ewm

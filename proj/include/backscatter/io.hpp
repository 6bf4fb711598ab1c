/*
 * io.hpp: CSV and JSON output for reports, profiles, tables and run
 * manifests. Non-finite numbers are written as JSON null and as "nan" in CSV.
 */

#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bloch.hpp"
#include "config.hpp"
#include "dispersion.hpp"
#include "error.hpp"
#include "phasematch.hpp"
#include "propagation.hpp"
#include "scenario.hpp"
#include "sweep.hpp"

namespace backscatter {

inline constexpr const char* library_version = "1.0.0";

inline json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json complex_json(cplx z) { return {{"re", number(z.real())}, {"im", number(z.imag())}}; }

inline json to_json(const PhaseMatchReport& r) {
    return {{"delta_k", number(r.delta_k)},
            {"kappa_forward", number(r.kappa_forward)},
            {"kappa_backward", number(r.kappa_backward)},
            {"envelope_forward", number(r.envelope_forward)},
            {"envelope_backward", number(r.envelope_backward)},
            {"delta_star", number(r.delta_star)},
            {"N_star", number(r.N_star)},
            {"chi_target", number(r.chi_target)},
            {"feasible", r.feasible},
            {"reason", r.reason},
            {"k4", number(r.k4)},
            {"vg_star", number(r.vg_star)},
            {"eit_window", number(r.eit_window)},
            {"intensity_floor_rabi_sq", number(r.intensity_floor_rabi_sq)}};
}

inline json to_json(const DensityMatrix& d) {
    json rows = json::array();
    for (int x = 0; x < 4; ++x) {
        json row = json::array();
        for (int y = 0; y < 4; ++y) row.push_back(complex_json(d.rho(x, y)));
        rows.push_back(row);
    }
    json pops = json::object();
    for (Level l : all_levels) pops[std::string(1, level_name(l))] = number(d.population(l));
    return {{"rho", rows},
            {"populations", pops},
            {"rho_ab", complex_json(d(Level::a, Level::b))},
            {"rho_cb", complex_json(d(Level::c, Level::b))},
            {"rho_db", complex_json(d(Level::d, Level::b))},
            {"rho_dc", complex_json(d(Level::d, Level::c))},
            {"trace", complex_json(d.trace())},
            {"hermiticity_error", number(d.hermiticity_error())}};
}

inline json to_json(const std::vector<ValidityCheck>& checks) {
    json out = json::array();
    for (const auto& c : checks)
        out.push_back({{"name", c.name},
                       {"condition", c.condition},
                       {"ratio", number(c.ratio)},
                       {"threshold", c.threshold},
                       {"status", c.pass ? "pass" : "warn"}});
    return out;
}

inline json summary_json(const FieldProfiles& p) {
    json outputs = json::array(), inputs = json::array();
    for (int j = 0; j < 4; ++j) {
        inputs.push_back(complex_json(p.direction[j] > 0 ? p.envelope[j].front() : p.envelope[j].back()));
        outputs.push_back(complex_json(p.output(j)));
    }
    return {{"nz", p.z.size()},
            {"length_m", p.z.back()},
            {"direction", p.direction},
            {"inputs", inputs},
            {"outputs", outputs},
            {"validity", to_json(p.validity)},
            {"warnings", p.warnings}};
}

inline json to_json(const ScenarioReport& r) {
    const auto& p = *r.preset;
    return {{"name", p.name},
            {"variant", std::string(variant_name(p.variant))},
            {"provenance", p.provenance},
            {"assumptions",
             {{"doppler_to_radiative_ratio", p.doppler_ratio},
              {"dispersion_factor", p.dispersion_factor()},
              {"radiative_rate_rad_s", p.gamma_r},
              {"stokes_rabi_rad_s", std::abs(r.setup.fields.rabi(field::stokes))},
              {"cell_length_m", p.length}}},
            {"lambda_ab_m", p.lambda_ab},
            {"lambda_signal_m", p.lambda_signal},
            {"chi_target", r.chi_target},
            {"density_m3", r.density},
            {"density_cm3", r.density * 1e-6},
            {"quoted_density_cm3", p.expected_density * 1e-6},
            {"density_ratio", r.density_ratio},
            {"match_class", std::string(match_class_name(p.match))},
            {"tolerance", p.tolerance},
            {"within_tolerance", r.within_tolerance},
            {"plan", to_json(r.plan)},
            {"intensity_floor",
             {{"rabi_sq", r.floor.rabi_sq},
              {"W_per_cm2", r.floor.intensity * 1e-4},
              {"stokes_W_per_cm2", r.stokes_intensity * 1e-4}}},
            {"notes", p.notes}};
}

inline std::string format_number(double x) {
    if (!std::isfinite(x)) return "nan";
    std::ostringstream s;
    s << std::setprecision(17) << x;
    return s.str();
}

inline void write_csv(std::ostream& os, const Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
        os << '\n';
    }
}

inline json to_json(const Table& t) {
    json rows = json::array();
    for (const auto& row : t.rows) {
        json r = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = number(row[i]);
        rows.push_back(r);
    }
    return {{"columns", t.columns}, {"rows", rows}};
}

inline Table dispersion_table(const std::vector<DispersionSample>& samples) {
    Table t{{"nu_rad_s", "k_rad_m", "chi_re", "chi_im", "vg_m_s"}, {}};
    for (const auto& s : samples) t.rows.push_back({s.nu, s.k, s.chi_re, s.chi_im, s.vg});
    return t;
}

inline Table envelope_table(const std::vector<double>& kappa, double length, EnvelopeForm form) {
    Table t{{"kappa_rad_m", "envelope_abs", "envelope_phase"}, {}};
    for (double k : kappa) {
        cplx e = envelope(k, length, form);
        t.rows.push_back({k, std::abs(e), std::arg(e)});
    }
    return t;
}

inline Table profile_table(const FieldProfiles& p) {
    Table t{{"z_m"}, {}};
    for (int j = 1; j <= 4; ++j) {
        t.columns.push_back("omega" + std::to_string(j) + "_re");
        t.columns.push_back("omega" + std::to_string(j) + "_im");
    }
    for (std::size_t i = 0; i < p.z.size(); ++i) {
        std::vector<double> row = {p.z[i]};
        for (int j = 0; j < 4; ++j) {
            row.push_back(p.envelope[j][i].real());
            row.push_back(p.envelope[j][i].imag());
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path);
    if (!os) throw Error(ErrorKind::Config, "cannot write " + path.string());
    os << text;
}

inline void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

inline void write_table(const std::filesystem::path& path, const Table& t) {
    std::ostringstream s;
    write_csv(s, t);
    write_text(path, s.str());
}

}  // namespace backscatter

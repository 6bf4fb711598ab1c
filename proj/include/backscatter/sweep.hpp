/*
 * sweep.hpp: one-parameter sweeps over a JSON config.
 *
 * A parameter is named by a dotted path into the config ("medium.density",
 * "fields.1.rabi"); a path that lands on a {value, unit} pair sets its value
 * in that unit. Two names are virtual: "detuning" sets the pump detuning in
 * rad/s, and "kappa_L" (envelope-scan only) sets κL directly.
 */

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "config.hpp"
#include "dispersion.hpp"
#include "error.hpp"
#include "phasematch.hpp"
#include "propagation.hpp"

namespace backscatter {

enum class Pipeline { DispersionScan, EnvelopeScan, PlannerScan, Propagate };

inline std::string_view pipeline_name(Pipeline p) {
    switch (p) {
        case Pipeline::DispersionScan: return "dispersion-scan";
        case Pipeline::EnvelopeScan: return "envelope-scan";
        case Pipeline::PlannerScan: return "planner-scan";
        case Pipeline::Propagate: return "propagate";
    }
    return "unknown";
}

inline Pipeline parse_pipeline(std::string_view s) {
    for (Pipeline p : {Pipeline::DispersionScan, Pipeline::EnvelopeScan, Pipeline::PlannerScan, Pipeline::Propagate})
        if (pipeline_name(p) == s) return p;
    throw Error(ErrorKind::InvalidParameter, "unknown pipeline '" + std::string(s) +
                                                 "' (expected dispersion-scan, envelope-scan, planner-scan or propagate)");
}

struct SweepSpec {
    std::string path;
    double start = 0.0;
    double stop = 1.0;
    int count = 2;
    bool log = false;
    std::vector<std::string> outputs;  // empty means every column

    void validate() const {
        if (count < 2) throw Error(ErrorKind::InvalidParameter, "sweep count must be at least 2");
        if (start == stop) throw Error(ErrorKind::InvalidParameter, "sweep start and stop must differ");
        if (log && !(start > 0.0 && stop > 0.0))
            throw Error(ErrorKind::InvalidParameter, "logarithmic sweeps need positive endpoints");
    }

    std::vector<double> values() const {
        validate();
        std::vector<double> v(count);
        for (int i = 0; i < count; ++i) {
            double t = static_cast<double>(i) / (count - 1);
            v[i] = log ? std::exp(std::log(start) + t * (std::log(stop) - std::log(start))) : start + t * (stop - start);
        }
        v.back() = stop;
        return v;
    }
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct SweepOptions {
    int grid = 256;
    EnvelopeForm form = EnvelopeForm::Exact;
    unsigned threads = 0;  // 0: hardware concurrency
};

namespace detail {

inline void collect_paths(const json& j, const std::string& prefix, std::vector<std::string>& out) {
    if (j.is_object() && j.contains("value") && j["value"].is_number()) {
        out.push_back(prefix);
        return;
    }
    if (j.is_number()) {
        out.push_back(prefix);
        return;
    }
    if (j.is_object())
        for (auto& [k, v] : j.items()) collect_paths(v, prefix.empty() ? k : prefix + "." + k, out);
    else if (j.is_array())
        for (std::size_t i = 0; i < j.size(); ++i) collect_paths(j[i], prefix + "." + std::to_string(i), out);
}

inline std::string valid_keys(const json& cfg) {
    std::vector<std::string> paths = {"detuning", "kappa_L"};
    collect_paths(cfg, "", paths);
    std::string s;
    for (const auto& p : paths) s += (s.empty() ? "" : ", ") + p;
    return s;
}

}  // namespace detail

/// Copy of cfg with the parameter at `path` set to `value`.
inline json apply_parameter(json cfg, const std::string& path, double value) {
    if (path == "detuning") {
        auto& fields = cfg.at("fields");
        auto& f = fields.at(0);
        f.erase("frequency");
        f["detuning"] = si_quantity(value, "rad/s");
        if (fields.size() > 3) {  // let the signal frequency re-close on the new pump
            fields[3].erase("frequency");
            fields[3].erase("detuning");
        }
        return cfg;
    }
    std::string pointer;
    for (std::size_t pos = 0; pos <= path.size();) {
        std::size_t dot = path.find('.', pos);
        if (dot == std::string::npos) dot = path.size();
        pointer += "/" + path.substr(pos, dot - pos);
        pos = dot + 1;
    }
    json::json_pointer ptr(pointer);
    if (path.empty() || !cfg.contains(ptr))
        throw Error(ErrorKind::Config, "unresolvable parameter path '" + path + "'; valid keys: " + detail::valid_keys(cfg));
    json& node = cfg[ptr];
    if (node.is_object() && node.contains("value"))
        node["value"] = value;
    else if (node.is_number())
        node = value;
    else
        throw Error(ErrorKind::Config, "parameter path '" + path + "' is not numeric; valid keys: " + detail::valid_keys(cfg));
    return cfg;
}

inline std::vector<std::string> pipeline_columns(Pipeline p) {
    switch (p) {
        case Pipeline::DispersionScan: return {"nu_rad_s", "k_rad_m", "chi_re", "chi_im", "vg_m_s"};
        case Pipeline::EnvelopeScan: return {"kappa_rad_m", "envelope_abs", "envelope_phase"};
        case Pipeline::PlannerScan:
            return {"delta_star", "delta_k", "kappa_forward", "kappa_backward", "envelope_forward",
                    "envelope_backward", "vg_star", "N_star", "feasible"};
        case Pipeline::Propagate: return {"signal_abs", "signal_phase", "probe_abs_out", "warnings"};
    }
    return {};
}

/// Evaluates one sweep point.
inline std::vector<double> evaluate_point(const json& base, const SweepSpec& spec, Pipeline p, double value,
                                          const SweepOptions& opt) {
    bool virtual_kappa = spec.path == "kappa_L";
    if (virtual_kappa && p != Pipeline::EnvelopeScan)
        throw Error(ErrorKind::Config, "kappa_L can only be swept with the envelope-scan pipeline");
    json cfg = virtual_kappa ? base : apply_parameter(base, spec.path, value);
    Config c = build_scheme(cfg);
    const auto& s = c.scheme;
    const auto& f = c.fields;
    const auto& m = c.medium;
    double delta = f.frequency(field::pump) - s.field_transition_frequency(field::pump);
    switch (p) {
        case Pipeline::DispersionScan: {
            auto d = dispersion_sample(s, f, m, delta);
            return {d.nu, d.k, d.chi_re, d.chi_im, d.vg};
        }
        case Pipeline::EnvelopeScan: {
            double kappa = virtual_kappa ? value / m.length
                                         : mismatch(s.variant, wavevectors_at(s, f, m, delta), f[field::signal].direction);
            cplx e = envelope(kappa, m.length, opt.form);
            return {kappa, std::abs(e), std::arg(e)};
        }
        case Pipeline::PlannerScan: {
            auto r = plan_backscatter(s, f, m, {.form = opt.form});
            return {r.delta_star,       r.delta_k,           r.kappa_forward, r.kappa_backward, r.envelope_forward,
                    r.envelope_backward, r.vg_star,          r.N_star,        r.feasible ? 1.0 : 0.0};
        }
        case Pipeline::Propagate: {
            auto prof = propagate_fields(s, f, m, opt.grid);
            cplx out = prof.output(field::signal);
            return {std::abs(out), std::arg(out), std::abs(prof.output(field::probe)),
                    static_cast<double>(prof.warnings.size())};
        }
    }
    return {};
}

/// Runs every sweep point on a worker pool; rows come back in sweep order.
inline Table run_sweep(const json& base, const SweepSpec& spec, Pipeline p, const SweepOptions& opt = {}) {
    auto values = spec.values();
    if (spec.path != "kappa_L") apply_parameter(base, spec.path, values.front());

    Table t;
    t.columns = {spec.path};
    auto cols = pipeline_columns(p);
    std::vector<int> keep;
    if (spec.outputs.empty()) {
        for (int i = 0; i < static_cast<int>(cols.size()); ++i) keep.push_back(i);
    } else {
        for (const auto& name : spec.outputs) {
            auto it = std::find(cols.begin(), cols.end(), name);
            if (it == cols.end()) {
                std::string valid;
                for (const auto& c : cols) valid += (valid.empty() ? "" : ", ") + c;
                throw Error(ErrorKind::Config, "unknown output '" + name + "' for " + std::string(pipeline_name(p)) +
                                                   "; valid outputs: " + valid);
            }
            keep.push_back(static_cast<int>(it - cols.begin()));
        }
    }
    for (int i : keep) t.columns.push_back(cols[i]);

    const int n = static_cast<int>(values.size());
    std::vector<std::vector<double>> results(n);
    std::vector<std::exception_ptr> failures(n);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < n; i = next++) {
            try {
                results[i] = evaluate_point(base, spec, p, values[i], opt);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    unsigned workers = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(n));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    for (int i = 0; i < n; ++i)
        if (failures[i]) std::rethrow_exception(failures[i]);
    for (int i = 0; i < n; ++i) {
        std::vector<double> row = {values[i]};
        for (int k : keep) row.push_back(results[i][k]);
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace backscatter

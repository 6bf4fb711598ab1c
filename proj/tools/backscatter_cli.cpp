// Command-line front end for the backscatter library.
//
// Exit codes: 0 success, 2 validation or configuration error, 3 infeasible
// plan, 4 numerical failure. Every run leaves a manifest.json in --out.

#include <CLI11.hpp>

#include <Eigen/Core>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "backscatter.hpp"

namespace fs = std::filesystem;
using namespace backscatter;

namespace {

enum Exit { ok = 0, validation = 2, infeasible = 3, numerical = 4 };

struct Globals {
    std::string config_path;
    std::string out = "out";
    std::string format = "csv";
    int grid = 256;
    bool full_argument = false;
};

struct Run {
    Globals g;
    std::string command;
    std::vector<std::string> argv;
    json config = nullptr;
    json extra = json::object();
    std::vector<std::string> outputs;

    EnvelopeForm form() const { return g.full_argument ? EnvelopeForm::FullArgument : EnvelopeForm::Exact; }

    const json& require_config() {
        if (g.config_path.empty())
            throw Error(ErrorKind::Config, "--config <path> is required for '" + command + "'");
        if (config.is_null()) {
            std::ifstream is(g.config_path);
            if (!is) throw Error(ErrorKind::Config, "cannot open config " + g.config_path);
            try {
                config = json::parse(is);
            } catch (const json::parse_error& e) {
                throw Error(ErrorKind::Config, "malformed JSON in " + g.config_path + ": " + e.what());
            }
        }
        return config;
    }

    fs::path path(const std::string& stem, const std::string& ext) {
        fs::path p = fs::path(g.out) / (stem + "." + ext);
        outputs.push_back(p.filename().string());
        return p;
    }

    void emit(const std::string& stem, const Table& t) {
        if (g.format == "json")
            write_json(path(stem, "json"), to_json(t));
        else
            write_table(path(stem, "csv"), t);
    }

    void manifest(int code, const std::string& message) {
        json m = {{"tool", "backscatter"},
                  {"version", library_version},
                  {"command", command},
                  {"argv", argv},
                  {"config_path", g.config_path},
                  {"config", config},
                  {"grid", g.grid},
                  {"format", g.format},
                  {"full_argument_envelope", g.full_argument},
                  {"outputs", outputs},
                  {"exit_code", code},
                  {"message", message},
                  {"build",
                   {{"compiler", __VERSION__},
                    {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                  std::to_string(EIGEN_MINOR_VERSION)}}}};
        m.update(extra);
        write_json(fs::path(g.out) / "manifest.json", m);
    }
};

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(6);
    s << x;
    return s.str();
}

int steady_state_cmd(Run& run) {
    Config c = build_scheme(run.require_config());
    DensityMatrix d = steady_state(c.scheme, c.fields);
    auto rates = complex_rates(c.scheme, c.fields);
    json out = to_json(d);
    out["validity"] = to_json(validity_report(c.fields));
    if (std::abs(c.fields.rabi(field::stokes)) > 0.0) {
        auto w = weak_probe_coherence(c.fields.rabi(field::pump), c.fields.rabi(field::stokes), rates.ab, rates.cb,
                                      c.scheme.variant);
        out["weak_probe"] = {{"rho_ab", complex_json(w.ab)}, {"rho_cb", complex_json(w.cb)}};
    }
    if (run.g.format == "json") {
        write_json(run.path("steady_state", "json"), out);
    } else {
        Table t{{"row", "col", "re", "im"}, {}};
        for (int x = 0; x < 4; ++x)
            for (int y = 0; y < 4; ++y) t.rows.push_back({double(x), double(y), d.rho(x, y).real(), d.rho(x, y).imag()});
        write_table(run.path("steady_state", "csv"), t);
    }
    std::cout << "rho_ab = " << fmt(d(Level::a, Level::b).real()) << " + " << fmt(d(Level::a, Level::b).imag())
              << "i, rho_cb = " << fmt(d(Level::c, Level::b).real()) << " + " << fmt(d(Level::c, Level::b).imag())
              << "i\n";
    return ok;
}

int dispersion_cmd(Run& run, int points, double lo, double hi) {
    Config c = build_scheme(run.require_config());
    double window = planner_window(c.fields, c.medium);
    if (std::isnan(lo)) lo = -window;
    if (std::isnan(hi)) hi = window;
    auto samples = dispersion_scan(c.scheme, c.fields, c.medium, lo, hi, points);
    run.emit("dispersion", dispersion_table(samples));
    run.extra["scan"] = {{"delta_min", lo}, {"delta_max", hi}, {"points", points}};
    std::cout << "dispersion scan: " << points << " points over [" << fmt(lo) << ", " << fmt(hi) << "] rad/s\n";
    return ok;
}

int plan_cmd(Run& run, int scan_points) {
    Config c = build_scheme(run.require_config());
    PlannerOptions opt;
    opt.scan_points = scan_points;
    opt.form = run.form();
    auto r = plan_backscatter(c.scheme, c.fields, c.medium, opt);
    write_json(run.path("plan", "json"), to_json(r));
    std::cout << (r.feasible ? "feasible" : "infeasible") << ": " << r.reason << "\n";
    if (std::isfinite(r.delta_star))
        std::cout << "  delta* = " << fmt(r.delta_star) << " rad/s, kappa_b = " << fmt(r.kappa_backward)
                  << " rad/m, |env_f| = " << fmt(r.envelope_forward) << "\n";
    return r.feasible ? ok : infeasible;
}

int propagate_cmd(Run& run, bool depletion, const std::string& source) {
    Config c = build_scheme(run.require_config());
    PropagationOptions opt;
    opt.pump_depletion = depletion;
    if (source == "dc")
        opt.source = SignalSource::PrintedDc;
    else if (source != "own")
        throw Error(ErrorKind::InvalidParameter, "--source must be 'own' or 'dc'");
    auto p = propagate_fields(c.scheme, c.fields, c.medium, run.g.grid, opt);
    run.emit("profiles", profile_table(p));
    write_json(run.path("propagation", "json"), summary_json(p));
    for (const auto& w : p.warnings) std::cerr << "warning: " << w << "\n";
    cplx s = p.output(field::signal);
    std::cout << "signal output |Omega4| = " << fmt(std::abs(s)) << " rad/s ("
              << (p.direction[field::signal] > 0 ? "z = L" : "z = 0") << ")\n";
    return ok;
}

int scenario_cmd(Run& run, const std::string& name) {
    auto r = run_scenario(name);
    run.config = to_config(r.setup);
    run.extra["scenario"] = name;
    write_json(run.path("scenario_" + name, "json"), to_json(r));
    const auto& p = *r.preset;
    std::cout << p.name << " (" << variant_name(p.variant) << ")\n"
              << "  assumption: Delta_D/gamma_r = " << p.doppler_ratio << ", dispersion factor "
              << p.dispersion_factor() << "\n"
              << "  chi target = " << fmt(r.chi_target) << "\n"
              << "  N = " << fmt(r.density * 1e-6) << " cm^-3 vs quoted " << fmt(p.expected_density * 1e-6)
              << " cm^-3 (" << match_class_name(p.match) << ", " << (r.within_tolerance ? "within" : "outside")
              << " tolerance)\n"
              << "  planner: " << r.plan.reason << ", delta* = " << fmt(r.plan.delta_star) << " rad/s\n"
              << "  intensity floor = " << fmt(r.floor.intensity * 1e-4) << " W/cm^2\n";
    for (const auto& n : p.notes) std::cout << "  note: " << n << "\n";
    return ok;
}

int sweep_cmd(Run& run, SweepSpec spec, const std::string& pipeline, unsigned threads) {
    const json& cfg = run.require_config();
    SweepOptions opt;
    opt.grid = run.g.grid;
    opt.form = run.form();
    opt.threads = threads;
    auto table = run_sweep(cfg, spec, parse_pipeline(pipeline), opt);
    run.emit("sweep", table);
    run.extra["sweep"] = {{"param", spec.path},  {"start", spec.start}, {"stop", spec.stop},
                          {"count", spec.count}, {"log", spec.log},     {"pipeline", pipeline},
                          {"outputs", spec.outputs}};
    std::cout << "sweep: " << table.rows.size() << " rows, pipeline " << pipeline << "\n";
    return ok;
}

int figure_cmd(Run& run, const std::string& which, int points) {
    if (run.g.config_path.empty())
        throw Error(ErrorKind::Config, "figure data needs a run context: pass --config <path>");
    Config c = build_scheme(run.require_config());
    const auto& s = c.scheme;
    const auto& f = c.fields;
    const auto& m = c.medium;
    double window = planner_window(f, m);
    Table t;
    if (which == "dispersion_curve") {
        t.columns = {"nu_rad_s", "k_rad_m"};
        for (const auto& d : dispersion_scan(s, f, m, -window, window, points)) t.rows.push_back({d.nu, d.k});
    } else if (which == "envelope_curve") {
        t.columns = {"kappa_rad_m", "envelope_abs"};
        for (int i = 0; i < points; ++i) {
            double kl = -8.0 * constants::pi + 16.0 * constants::pi * i / (points - 1);
            t.rows.push_back({kl / m.length, std::abs(envelope(kl / m.length, m.length, run.form()))});
        }
    } else if (which == "backward_contrast") {
        t.columns = {"delta_rad_s", "contrast"};
        for (int i = 0; i < points; ++i) {
            double delta = -window + window * i / (points - 1);
            auto k = wavevectors_at(s, f, m, delta);
            double back = std::abs(envelope(mismatch(s.variant, k, -1), m.length, run.form()));
            double fwd = std::abs(envelope(mismatch(s.variant, k, +1), m.length, run.form()));
            t.rows.push_back({delta, fwd > 0.0 ? back / fwd : std::numeric_limits<double>::infinity()});
        }
    } else {
        throw Error(ErrorKind::InvalidParameter,
                    "unknown figure '" + which + "' (expected dispersion_curve, envelope_curve or backward_contrast)");
    }
    write_table(run.path("figure_" + which, "csv"), t);
    std::cout << "figure " << which << ": " << t.rows.size() << " rows\n";
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    Run run;
    for (int i = 0; i < argc; ++i) run.argv.emplace_back(argv[i]);

    CLI::App app{"Coherent backscattering planner and Maxwell–Bloch simulator"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--config", run.g.config_path, "JSON configuration file");
    app.add_option("--out", run.g.out, "Output directory")->capture_default_str();
    app.add_option("--format", run.g.format, "Table format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--grid", run.g.grid, "Propagation grid size nz")->check(CLI::Range(64, 1 << 24))->capture_default_str();
    app.add_flag("--paper-literal-envelope", run.g.full_argument, "Use sin(κL)/(κL) instead of the exact envelope");

    auto* ss = app.add_subcommand("steady-state", "Steady-state density matrix for the configured fields");

    int points = 401;
    double lo = std::nan(""), hi = std::nan("");
    auto* ds = app.add_subcommand("dispersion-scan", "Susceptibility, wavevector and group velocity vs pump detuning");
    ds->add_option("--points", points, "Number of detunings")->check(CLI::Range(2, 10000000));
    ds->add_option("--delta-min", lo, "Lowest detuning, rad/s (default: −EIT window)");
    ds->add_option("--delta-max", hi, "Highest detuning, rad/s (default: +EIT window)");

    int scan_points = 2048;
    auto* pl = app.add_subcommand("plan", "Find the pump detuning for backward phase matching");
    pl->add_option("--scan-points", scan_points, "Bracketing scan resolution")->check(CLI::Range(2, 10000000));

    bool depletion = false;
    std::string source = "own";
    auto* pr = app.add_subcommand("propagate", "Integrate the field envelopes along the cell");
    pr->add_flag("--pump-depletion", depletion, "March fields 1 and 2 instead of holding them fixed");
    pr->add_option("--source", source, "Coherence driving field 4: own (its transition) or dc");

    std::string scenario;
    auto* sc = app.add_subcommand("scenario", "Run a named preset end to end");
    sc->add_option("name", scenario, "NO_rotational, NO2_rotational, NO_vibrational, NO2_vibrational or Rb")->required();

    SweepSpec spec;
    std::string pipeline = "planner-scan";
    unsigned threads = 0;
    auto* sw = app.add_subcommand("sweep", "Sweep one parameter through a pipeline");
    sw->add_option("--param", spec.path, "Dotted config path, or detuning / kappa_L")->required();
    sw->add_option("--start", spec.start)->required();
    sw->add_option("--stop", spec.stop)->required();
    sw->add_option("--count", spec.count)->required();
    sw->add_flag("--log", spec.log, "Logarithmic spacing");
    sw->add_option("--pipeline", pipeline, "dispersion-scan, envelope-scan, planner-scan or propagate")->capture_default_str();
    sw->add_option("--outputs", spec.outputs, "Columns to keep")->delimiter(',');
    sw->add_option("--threads", threads, "Worker threads (0: all cores)");

    std::string figure;
    int figure_points = 801;
    auto* fg = app.add_subcommand("figure", "Write plot data");
    fg->add_option("which", figure, "dispersion_curve, envelope_curve or backward_contrast")->required();
    fg->add_option("--points", figure_points)->check(CLI::Range(2, 10000000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? ok : validation;
    }

    int code = ok;
    std::string message = "ok";
    try {
        if (ss->parsed()) run.command = "steady-state", code = steady_state_cmd(run);
        else if (ds->parsed()) run.command = "dispersion-scan", code = dispersion_cmd(run, points, lo, hi);
        else if (pl->parsed()) run.command = "plan", code = plan_cmd(run, scan_points);
        else if (pr->parsed()) run.command = "propagate", code = propagate_cmd(run, depletion, source);
        else if (sc->parsed()) run.command = "scenario", code = scenario_cmd(run, scenario);
        else if (sw->parsed()) run.command = "sweep", code = sweep_cmd(run, spec, pipeline, threads);
        else if (fg->parsed()) run.command = "figure", code = figure_cmd(run, figure, figure_points);
        if (code == infeasible) message = "infeasible plan";
    } catch (const Error& e) {
        code = e.is_validation() ? validation : numerical;
        message = e.what();
        std::cerr << "error: " << e.what() << "\n";
    } catch (const json::exception& e) {
        code = validation;
        message = e.what();
        std::cerr << "error: configuration: " << e.what() << "\n";
    } catch (const std::exception& e) {
        code = numerical;
        message = e.what();
        std::cerr << "error: " << e.what() << "\n";
    }
    try {
        run.manifest(code, message);
    } catch (const std::exception& e) {
        std::cerr << "error: could not write manifest: " << e.what() << "\n";
        if (code == ok) code = validation;
    }
    return code;
}

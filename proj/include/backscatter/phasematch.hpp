/*
 * phasematch.hpp: coherence-grating wavevector, direction-resolved phase
 * mismatch, the sinc envelope of the generated field, and the planner that
 * finds the pump detuning for backward phase matching.
 *
 * Fields 2–4 are taken at their vacuum wavevectors; only the pump sees the
 * medium's dispersion.
 */

#pragma once

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "bloch.hpp"
#include "dispersion.hpp"
#include "error.hpp"
#include "medium.hpp"
#include "units.hpp"

namespace backscatter {

inline double coherence_wavevector(double k1, double k2) { return k1 - k2; }

/// Spatial frequency of the c–b grating: k₁ − k₂ for the Λ pumps, k₁ + k₂
/// when field 2 climbs from a to c.
inline double grating_wavevector(Variant v, double k1, double k2) {
    return k1 + closure_signs(v).stokes * k2;
}

/// κ = (k₁ ± k₂ ± k₃) − direction·|k₄|; zero means phase matched.
inline double mismatch(Variant v, const std::array<double, 4>& k, int direction) {
    if (direction != 1 && direction != -1)
        throw Error(ErrorKind::InvalidParameter, "signal direction must be +1 or -1");
    auto s = closure_signs(v);
    return k[0] + s.stokes * k[1] + s.probe * k[2] - direction * std::abs(k[3]);
}

enum class EnvelopeForm {
    Exact,         // e^{iκL/2} sinc(κL/2) = (1/L)∫₀ᴸ e^{iκz} dz
    FullArgument,  // sin(κL)/(κL)
};

inline double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

inline cplx envelope(double kappa, double length, EnvelopeForm form = EnvelopeForm::Exact) {
    detail::require_positive(length, "cell length");
    if (form == EnvelopeForm::FullArgument) return sinc(kappa * length);
    double half = 0.5 * kappa * length;
    return std::polar(sinc(half), half);
}

struct SignalOptions {
    Variant variant = Variant::DoubleLambda;
    EnvelopeForm form = EnvelopeForm::Exact;
    double pump_power = std::numeric_limits<double>::infinity();  // |Ω₁|² + |Ω₂|²
    double threshold = 0.1;
};

struct SignalEstimate {
    cplx omega4;
    bool power_broadening_warning = false;
};

/// Ω₄ = iη₄L·envelope(κ, L)·ρ_sig, with ρ_sig the steady signal coherence
/// driven by a z-uniform grating and undepleted probe.
inline SignalEstimate signal_closed_form(cplx grating, cplx probe, double eta4, cplx gamma_signal, double kappa,
                                         double length, const SignalOptions& opt = {}) {
    cplx source = signal_polarization(grating, probe, 0.0, gamma_signal, opt.variant);
    SignalEstimate out;
    out.omega4 = I * eta4 * length * envelope(kappa, length, opt.form) * source;
    out.power_broadening_warning = std::norm(probe) > opt.threshold * opt.pump_power;
    return out;
}

/// χ_ab = 2(n₁ − 1) = −4λ_ab/λ_db needed for backward matching (written in
/// the convention where the resonance condition below is stated).
inline double required_chi(double lambda_ab, double lambda_db) {
    detail::require_positive(lambda_ab, "λ_ab");
    detail::require_positive(lambda_db, "λ_db");
    return -4.0 * lambda_ab / lambda_db;
}

struct DensityEstimate {
    double exact;         // with |Ω₂|²/(γ_r|δ|)
    double window_limit;  // with √(Δ_D/γ_r)
};

inline double density_prefactor(double lambda_ab, double k4) {
    return 32.0 * constants::pi * k4 / (3.0 * lambda_ab * lambda_ab);
}

inline DensityEstimate required_density(double lambda_ab, double k4, cplx stokes, double gamma_r, double delta,
                                        double doppler_width) {
    detail::require_positive(lambda_ab, "λ_ab");
    detail::require_positive(k4, "k₄");
    detail::require_positive(gamma_r, "radiative decay rate");
    detail::require_non_negative(doppler_width, "Doppler width");
    if (delta == 0.0) throw Error(ErrorKind::Singularity, "required density diverges at δ = 0");
    double pre = density_prefactor(lambda_ab, k4);
    return {pre * std::norm(stokes) / (gamma_r * std::abs(delta)), pre * std::sqrt(doppler_width / gamma_r)};
}

/// Left side of the resonance condition 3λ²Nγ_rδ/(16π|Ω₂|²) = −2k₄.
inline double resonance_condition(double lambda_ab, double density, double gamma_r, double delta, cplx stokes) {
    double omega2 = std::norm(stokes);
    if (omega2 == 0.0) throw Error(ErrorKind::Singularity, "resonance condition needs Ω₂ ≠ 0");
    return 3.0 * lambda_ab * lambda_ab * density * gamma_r * delta / (16.0 * constants::pi * omega2);
}

/// Conversion between a Rabi frequency and the intensity of the field that
/// drives it: E = ħ|Ω|/℘, I = 2ε₀c·E² for a field E·e^{−iνt} + c.c.
inline double intensity_from_rabi(double rabi_sq, double dipole) {
    using namespace constants;
    return 2.0 * epsilon0 * c * hbar * hbar * rabi_sq / (dipole * dipole);
}

inline double rabi_sq_from_intensity(double intensity, double dipole) {
    using namespace constants;
    return intensity * dipole * dipole / (2.0 * epsilon0 * c * hbar * hbar);
}

struct IntensityFloor {
    double rabi_sq;    // rad²/s²
    double intensity;  // W/m²
};

/// |Ω|² ≫ γ_bcΔ_D read as |Ω|² ≥ margin·γ_bcΔ_D.
inline IntensityFloor intensity_floor(double gamma_bc, double doppler_width, double dipole, double margin = 10.0) {
    detail::require_non_negative(gamma_bc, "γ_bc");
    detail::require_non_negative(doppler_width, "Doppler width");
    detail::require_positive(dipole, "dipole moment");
    double rabi_sq = margin * gamma_bc * doppler_width;
    return {rabi_sq, intensity_from_rabi(rabi_sq, dipole)};
}

/// Vacuum wavevectors for fields 2–4 and the dispersive pump, at detuning δ.
inline std::array<double, 4> wavevectors_at(const LevelScheme& s, const FieldSet& f, const MediumParams& m,
                                            double delta) {
    FieldSet g = with_pump_detuning(s, f, delta);
    return {pump_wavevector(s, f, m, delta), g.frequency(1) / constants::c, g.frequency(2) / constants::c,
            g.frequency(3) / constants::c};
}

struct PhaseMatchReport {
    double delta_k = std::numeric_limits<double>::quiet_NaN();
    double kappa_forward = std::numeric_limits<double>::quiet_NaN();
    double kappa_backward = std::numeric_limits<double>::quiet_NaN();
    double envelope_forward = std::numeric_limits<double>::quiet_NaN();
    double envelope_backward = std::numeric_limits<double>::quiet_NaN();
    double delta_star = std::numeric_limits<double>::quiet_NaN();
    double N_star = std::numeric_limits<double>::quiet_NaN();
    double chi_target = std::numeric_limits<double>::quiet_NaN();
    bool feasible = false;
    std::string reason;

    double k4 = std::numeric_limits<double>::quiet_NaN();
    double vg_star = std::numeric_limits<double>::quiet_NaN();
    double eit_window = std::numeric_limits<double>::quiet_NaN();
    double intensity_floor_rabi_sq = std::numeric_limits<double>::quiet_NaN();
};

struct PlannerOptions {
    int scan_points = 2048;
    double intensity_margin = 10.0;
    EnvelopeForm form = EnvelopeForm::Exact;
};

/// Backward mismatch κ_b(δ) for the planner's root search.
inline double backward_mismatch(const LevelScheme& s, const FieldSet& f, const MediumParams& m, double delta) {
    return mismatch(s.variant, wavevectors_at(s, f, m, delta), -1);
}

namespace detail {

/// Smallest-|δ| root of g on [0, edge] scanned outward from 0.
template <class F>
std::optional<double> first_root(F&& g, double edge, int points) {
    double a = 0.0, ga = g(0.0);
    if (ga == 0.0) return 0.0;
    for (int i = 1; i <= points; ++i) {
        double b = edge * i / points;
        double gb = g(b);
        if (gb == 0.0) return b;
        if ((ga < 0.0) != (gb < 0.0)) {
            std::uintmax_t iters = 200;
            auto tol = boost::math::tools::eps_tolerance<double>(50);
            auto [lo, hi] = boost::math::tools::toms748_solve(g, a, b, ga, gb, tol, iters);
            return 0.5 * (lo + hi);
        }
        a = b;
        ga = gb;
    }
    return std::nullopt;
}

}  // namespace detail

inline double planner_window(const FieldSet& f, const MediumParams& m) {
    return eit_window(f.rabi(field::stokes), m.radiative_rate, std::max(m.doppler_width, m.radiative_rate));
}

namespace detail {

/// Root of g(δ) closest to δ = 0 within ±window.
template <class F>
std::optional<double> nearest_root(F&& g, double window, int points) {
    auto neg = first_root([&](double x) { return g(-x); }, window, points);
    auto pos = first_root(g, window, points);
    std::optional<double> root;
    if (neg) root = -*neg;
    if (pos && (!root || *pos < std::abs(*root))) root = *pos;
    return root;
}

}  // namespace detail

/// Pump detuning inside the EIT window at which the mismatch in the given
/// signal direction equals `target`.
inline std::optional<double> detuning_for_mismatch(const LevelScheme& s, const FieldSet& f, const MediumParams& m,
                                                   int direction, double target, int points = 2048) {
    auto g = [&](double delta) { return mismatch(s.variant, wavevectors_at(s, f, m, delta), direction) - target; };
    return detail::nearest_root(g, planner_window(f, m), points);
}

/// Detuning at which the grating wavevector k₁ ∓ k₂ changes sign.
inline std::optional<double> grating_reversal_detuning(const LevelScheme& s, const FieldSet& f, const MediumParams& m,
                                                       int points = 2048) {
    auto g = [&](double delta) {
        auto k = wavevectors_at(s, f, m, delta);
        return grating_wavevector(s.variant, k[0], k[1]);
    };
    return detail::nearest_root(g, planner_window(f, m), points);
}

/// Solves k₁(δ) ± k₂ ± k₃ = −k₄ for the pump detuning inside the EIT window.
inline PhaseMatchReport plan_backscatter(const LevelScheme& s, const FieldSet& f, const MediumParams& m,
                                         const PlannerOptions& opt = {}) {
    s.validate();
    f.validate();
    m.validate();
    PhaseMatchReport r;
    cplx stokes = f.rabi(field::stokes);
    if (std::abs(stokes) == 0.0)
        throw Error(ErrorKind::InvalidParameter, "planning requires a non-zero Stokes field Ω₂");

    r.eit_window = planner_window(f, m);
    double omega_ab = s.field_transition_frequency(field::pump);
    double lambda_ab = wavelength_from_angular(omega_ab);
    double nu4 = f.frequency(field::signal);
    r.k4 = nu4 / constants::c;
    r.chi_target = required_chi(lambda_ab, wavelength_from_angular(nu4));
    r.N_star = density_prefactor(lambda_ab, r.k4) *
               std::sqrt(std::max(m.doppler_width, m.radiative_rate) / m.radiative_rate);

    double gamma_bc = s.coherence_decay(Level::c, Level::b);
    auto floor = intensity_floor(gamma_bc, m.doppler_width, s.dipole[field::stokes], opt.intensity_margin);
    r.intensity_floor_rabi_sq = floor.rabi_sq;

    auto root = detuning_for_mismatch(s, f, m, -1, 0.0, opt.scan_points);
    if (!root) {
        r.reason = "detuning exceeds EIT window";
        return r;
    }

    r.delta_star = *root;
    auto k = wavevectors_at(s, f, m, r.delta_star);
    r.k4 = k[3];
    r.delta_k = grating_wavevector(s.variant, k[0], k[1]);
    r.kappa_forward = mismatch(s.variant, k, +1);
    r.kappa_backward = mismatch(s.variant, k, -1);
    r.envelope_forward = std::abs(envelope(r.kappa_forward, m.length, opt.form));
    r.envelope_backward = std::abs(envelope(r.kappa_backward, m.length, opt.form));
    r.vg_star = group_velocity(s, f, m, r.delta_star);

    if (std::norm(stokes) < floor.rabi_sq) {
        r.reason = "coupling intensity below EIT floor";
        return r;
    }
    r.feasible = true;
    r.reason = "backward phase matching inside EIT window";
    return r;
}

}  // namespace backscatter

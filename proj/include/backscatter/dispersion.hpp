/*
 * dispersion.hpp: probe susceptibility, dispersive wavevector and group
 * velocity of the EIT medium, plus the Doppler-broadened closed form and
 * its transparency window.
 *
 * Susceptibility convention: χ = (2c/ν)·η·ρ/Ω, refractive index n = 1 + χ/2,
 * so the wavevector is k = (ν/c)(1 + Re χ/2) and the field amplitude decays
 * at α = (ν/c)·Im χ/2. This is the convention in which ∂Ω/∂z = iηρ
 * reproduces plane-wave propagation exactly.
 */

#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "bloch.hpp"
#include "error.hpp"
#include "medium.hpp"
#include "units.hpp"

namespace backscatter {

struct DispersionSample {
    double nu = 0.0;      // rad/s
    double k = 0.0;       // rad/m
    double chi_re = 0.0;
    double chi_im = 0.0;
    double vg = 0.0;      // m/s
};

/// ρ_ab/Ω₁ at pump detuning δ = ν₁ − ω_ab, with the Stokes field held fixed.
/// Both Γ_ab and Γ_cb lose exactly δ from their imaginary parts as ν₁ moves,
/// so the shift is applied to the configured rates rather than re-derived
/// from ν₁ ≈ 10¹⁵ rad/s, which would round δ to about 1 rad/s.
inline cplx probe_response(const LevelScheme& s, const FieldSet& f, double delta) {
    auto rates = complex_rates(s, f);
    double shift = delta - (f.frequency(field::pump) - s.field_transition_frequency(field::pump));
    return probe_response(f.rabi(field::stokes), rates.ab - I * shift, rates.cb - I * shift);
}

/// N℘²/(ε₀ħ): the factor that turns ρ/Ω into χ, independent of ν.
inline double susceptibility_scale(double density, double dipole) {
    return density * dipole * dipole / (constants::epsilon0 * constants::hbar);
}

/// Pump-transition susceptibility at detuning δ from the weak-probe solution.
inline cplx susceptibility(const LevelScheme& s, const FieldSet& f, const MediumParams& m, double delta) {
    if (std::abs(f.rabi(field::stokes)) == 0.0)
        throw Error(ErrorKind::InvalidParameter, "susceptibility requires a non-zero Stokes field Ω₂");
    return susceptibility_scale(m.density, s.dipole[field::pump]) * probe_response(s, f, delta);
}

/// Susceptibility of a bare two-level transition (ρ = iΩ/Γ).
inline cplx two_level_susceptibility(double density, double dipole, cplx gamma) {
    if (std::abs(gamma) == 0.0) throw Error(ErrorKind::Singularity, "two-level rate Γ vanishes");
    return susceptibility_scale(density, dipole) * (I / gamma);
}

struct Wavevector {
    double k;      // rad/m
    double alpha;  // field absorption, 1/m
};

inline Wavevector wavevector(double nu, cplx chi) {
    detail::require_positive(nu, "frequency");
    double k0 = nu / constants::c;
    return {k0 * (1.0 + 0.5 * chi.real()), k0 * 0.5 * chi.imag()};
}

/// k − ν/c, the part of the pump wavevector contributed by the medium.
inline double dispersive_excess(const LevelScheme& s, const FieldSet& f, const MediumParams& m, double delta) {
    double nu = s.field_transition_frequency(field::pump) + delta;
    return 0.5 * (nu / constants::c) * susceptibility(s, f, m, delta).real();
}

/// Pump wavevector at detuning δ.
inline double pump_wavevector(const LevelScheme& s, const FieldSet& f, const MediumParams& m, double delta) {
    double nu = s.field_transition_frequency(field::pump) + delta;
    return nu / constants::c + dispersive_excess(s, f, m, delta);
}

/// V_g = (∂k/∂ν)⁻¹ by a centred difference of the medium excess; the vacuum
/// part 1/c is added exactly.
inline double group_velocity(const LevelScheme& s, const FieldSet& f, const MediumParams& m, double delta) {
    double h = std::max(1e-6 * std::abs(f.rabi(field::stokes)), 1.0);
    double slope = (dispersive_excess(s, f, m, delta + h) - dispersive_excess(s, f, m, delta - h)) / (2.0 * h);
    double inverse = 1.0 / constants::c + slope;
    if (!std::isfinite(inverse) || inverse == 0.0)
        throw Error(ErrorKind::Dispersion, "dispersion slope is not finite at δ = " + std::to_string(delta));
    return 1.0 / inverse;
}

inline DispersionSample dispersion_sample(const LevelScheme& s, const FieldSet& f, const MediumParams& m,
                                          double delta) {
    double nu = s.field_transition_frequency(field::pump) + delta;
    cplx chi = susceptibility(s, f, m, delta);
    return {nu, wavevector(nu, chi).k, chi.real(), chi.imag(), group_velocity(s, f, m, delta)};
}

inline std::vector<DispersionSample> dispersion_scan(const LevelScheme& s, const FieldSet& f, const MediumParams& m,
                                                     double delta_min, double delta_max, int points) {
    if (points < 2) throw Error(ErrorKind::InvalidParameter, "dispersion scan needs at least two points");
    std::vector<DispersionSample> out;
    out.reserve(points);
    for (int i = 0; i < points; ++i) {
        double delta = delta_min + (delta_max - delta_min) * i / (points - 1);
        out.push_back(dispersion_sample(s, f, m, delta));
    }
    return out;
}

/// χ_ab(δ) ≃ (3λ³N/8π²)(γ_rδ/|Ω₂|² + iγ_rΔ_Dδ²/|Ω₂|⁴) for a Doppler-broadened EIT line.
inline cplx doppler_susceptibility(double delta, double lambda_ab, double density, double gamma_r,
                                   double doppler_width, cplx stokes) {
    double omega2 = std::norm(stokes);
    if (omega2 == 0.0) throw Error(ErrorKind::Singularity, "Doppler susceptibility needs Ω₂ ≠ 0");
    double prefactor = 3.0 * lambda_ab * lambda_ab * lambda_ab * density / (8.0 * constants::pi * constants::pi);
    return prefactor * cplx(gamma_r * delta / omega2, gamma_r * doppler_width * delta * delta / (omega2 * omega2));
}

/// Largest detuning with negligible absorption: |Ω₂|²/√(γ_rΔ_D).
inline double eit_window(cplx stokes, double gamma_r, double doppler_width) {
    detail::require_positive(gamma_r, "radiative decay rate");
    detail::require_positive(doppler_width, "Doppler width");
    return std::norm(stokes) / std::sqrt(gamma_r * doppler_width);
}

}  // namespace backscatter

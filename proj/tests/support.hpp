// Shared fixtures for the test suites: seeded generators and a few
// ready-made schemes in convenient units.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "backscatter.hpp"

namespace support {

using namespace backscatter;

struct Rng {
    std::mt19937_64 engine;
    explicit Rng(std::uint64_t seed) : engine(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    double phase() { return uniform(-constants::pi, constants::pi); }
    cplx polar(double magnitude) { return std::polar(magnitude, phase()); }
};

inline double rel(cplx got, cplx want) { return std::abs(got - want) / std::abs(want); }

/// Optical transitions with rates in a numerically friendly range.
inline LevelScheme optical_scheme(Variant v, double gamma_a = 1e7, double gamma_c = 2e3, double gamma_d = 2e3) {
    double e_a = angular_from_wavelength(500e-9);
    double e_c = 0.0, e_d = 0.0;
    switch (v) {
        case Variant::DoubleLambda:
            e_c = angular_from_wavenumber(3.0);
            e_d = angular_from_wavenumber(10.0);
            break;
        case Variant::LadderLambda:
            e_c = angular_from_wavenumber(1500.0);
            e_d = angular_from_wavenumber(760.0);
            break;
        case Variant::VLambda:
            e_c = e_a + angular_from_wavelength(600e-9);
            e_d = e_c - angular_from_wavelength(20e-6);
            break;
    }
    LevelScheme s = make_scheme(v, e_a, e_c, e_d);
    s.set_decay(Level::a, gamma_a);
    s.set_decay(Level::c, gamma_c);
    s.set_decay(Level::d, gamma_d);
    double strong = dipole_from_radiative_rate(gamma_a, e_a);
    s.dipole = {strong, strong, 0.1 * constants::debye, 0.1 * constants::debye};
    return s;
}

inline MediumParams medium(double density, double doppler, double gamma_r, double length) {
    MediumParams m;
    m.density = density;
    m.doppler_width = doppler;
    m.radiative_rate = gamma_r;
    m.length = length;
    return m;
}

struct Case {
    LevelScheme s;
    FieldSet f;
    MediumParams m;
};

/// Double-Λ scheme for backward matching: a 500 nm pump pair, a nearly
/// degenerate c (so ω_cb ≪ ν₃ + ν₄) and a far-infrared signal. The signal
/// dipole is tiny so that self-absorption of field 4 stays negligible.
inline Case backscatter_case(double density, double stokes, double c_per_cm = 0.01, double d_per_cm = 10.0,
                             double k4_length = 100.0 * constants::pi) {
    Case x;
    x.s = make_scheme(Variant::DoubleLambda, angular_from_wavelength(500e-9), angular_from_wavenumber(c_per_cm),
                      angular_from_wavenumber(d_per_cm));
    x.s.set_decay(Level::a, 1e7);
    x.s.set_decay(Level::c, 2e3);
    x.s.set_decay(Level::d, 1e5);
    double strong = dipole_from_radiative_rate(1e7, x.s.energy_of(Level::a));
    x.s.dipole = {strong, strong, 0.1 * constants::debye, 1e-4 * constants::debye};
    x.f = resonant_fields(x.s, 1e-3 * stokes, stokes, 1e-2 * stokes, 0.0);
    x.f[field::signal].direction = -1;
    double k4 = x.s.field_transition_frequency(field::signal) / constants::c;
    x.m = medium(density, 1e9, 1e7, k4_length / k4);  // Δ_D = 100γ_r
    return x;
}

/// V-Λ scheme with the pump off: field 3 (d–b) then sees plain two-level
/// absorption, α = η₃Re(1/Γ_db). The cell is `absorption_lengths` long.
inline Case beer_case(double absorption_lengths, double density = 1e18) {
    Case x;
    x.s = optical_scheme(Variant::VLambda, 1e7, 2e3, 1e7);
    cplx gamma_db = complex_rates(x.s, resonant_fields(x.s, 0.0, 1.0, 0.0, 0.0)).db;
    x.f = resonant_fields(x.s, 0.0, 1e6, 1e-3 * std::abs(gamma_db), 0.0);
    double eta3 = coupling_constant(x.f.frequency(field::probe), density, x.s.dipole[field::probe]);
    double alpha = eta3 * (1.0 / gamma_db).real();
    x.m = medium(density, 1e7, 1e7, absorption_lengths / alpha);
    return x;
}

/// Least-squares slope of log(err) against log(n).
inline double loglog_slope(const std::vector<double>& n, const std::vector<double>& err) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
        double x = std::log(n[i]), y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace support

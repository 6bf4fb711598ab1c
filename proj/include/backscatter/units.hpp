/*
 * units.hpp: physical constants and unit conversions.
 *
 * Internally everything is SI with angular frequencies in rad/s. Config
 * files give quantities as {value, unit} pairs; `to_si` converts them for a
 * requested dimension and rejects units of the wrong kind.
 */

#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "error.hpp"

namespace backscatter {

namespace constants {
inline constexpr double c = 299792458.0;              // m/s
inline constexpr double epsilon0 = 8.8541878128e-12;  // F/m
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double debye = 3.33564095e-30;       // C m
inline constexpr double ea0 = 8.4783536255e-30;       // C m (atomic unit of dipole)
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
}  // namespace constants

inline double angular_from_wavelength(double wavelength_m) {
    return constants::two_pi * constants::c / wavelength_m;
}

inline double wavelength_from_angular(double omega) {
    return constants::two_pi * constants::c / omega;
}

/// Spectroscopic wavenumber in cm^-1 to rad/s: 2πc·(value·100).
inline double angular_from_wavenumber(double per_cm) {
    return constants::two_pi * constants::c * (per_cm * 100.0);
}

inline double wavenumber_from_angular(double omega) {
    return omega / (constants::two_pi * constants::c * 100.0);
}

inline double vacuum_wavevector(double omega) { return omega / constants::c; }

/// Squared transition dipole implied by a radiative decay rate
/// (spontaneous emission, γ = ω³℘²/(3πε₀ħc³)).
inline double dipole_from_radiative_rate(double gamma_r, double omega) {
    using namespace constants;
    return std::sqrt(3.0 * pi * epsilon0 * hbar * c * c * c * gamma_r / (omega * omega * omega));
}

enum class Dimension {
    AngularFrequency,  // transition / field frequency: wavelengths, wavenumbers, Hz, rad/s
    Rate,              // decay, dephasing, Rabi amplitudes: Hz-family or rad/s
    Length,
    Density,
    Dipole,
    Dimensionless,
};

inline std::string_view dimension_name(Dimension d) {
    switch (d) {
        case Dimension::AngularFrequency: return "angular frequency";
        case Dimension::Rate: return "rate";
        case Dimension::Length: return "length";
        case Dimension::Density: return "number density";
        case Dimension::Dipole: return "dipole moment";
        case Dimension::Dimensionless: return "dimensionless";
    }
    return "unknown";
}

namespace detail {

inline double frequency_scale(std::string_view unit) {
    if (unit == "Hz") return constants::two_pi;
    if (unit == "kHz") return constants::two_pi * 1e3;
    if (unit == "MHz") return constants::two_pi * 1e6;
    if (unit == "GHz") return constants::two_pi * 1e9;
    if (unit == "THz") return constants::two_pi * 1e12;
    if (unit == "rad/s" || unit == "s^-1" || unit == "1/s") return 1.0;
    return 0.0;
}

inline double length_scale(std::string_view unit) {
    if (unit == "m") return 1.0;
    if (unit == "cm") return 1e-2;
    if (unit == "mm") return 1e-3;
    if (unit == "um" || unit == "μm" || unit == "micron") return 1e-6;
    if (unit == "nm") return 1e-9;
    return 0.0;
}

}  // namespace detail

inline double to_si(double value, std::string_view unit, Dimension dim) {
    auto bad = [&]() -> double {
        throw Error(ErrorKind::Config, "unit '" + std::string(unit) + "' is not a valid " +
                                           std::string(dimension_name(dim)) + " unit");
    };
    switch (dim) {
        case Dimension::AngularFrequency: {
            if (double s = detail::frequency_scale(unit); s > 0.0) return value * s;
            if (unit == "cm^-1" || unit == "cm-1" || unit == "1/cm") return angular_from_wavenumber(value);
            if (double s = detail::length_scale(unit); s > 0.0) {
                detail::require_positive(value, "wavelength");
                return angular_from_wavelength(value * s);
            }
            return bad();
        }
        case Dimension::Rate: {
            if (double s = detail::frequency_scale(unit); s > 0.0) return value * s;
            return bad();
        }
        case Dimension::Length: {
            if (double s = detail::length_scale(unit); s > 0.0) return value * s;
            return bad();
        }
        case Dimension::Density: {
            if (unit == "m^-3" || unit == "1/m^3") return value;
            if (unit == "cm^-3" || unit == "1/cm^3") return value * 1e6;
            return bad();
        }
        case Dimension::Dipole: {
            if (unit == "C*m" || unit == "C m" || unit == "Cm") return value;
            if (unit == "D" || unit == "debye") return value * constants::debye;
            if (unit == "ea0" || unit == "au") return value * constants::ea0;
            return bad();
        }
        case Dimension::Dimensionless:
            if (unit.empty() || unit == "1") return value;
            return bad();
    }
    return bad();
}

}  // namespace backscatter

/*
 * medium.hpp: level schemes, optical fields, medium parameters and the
 * field–medium coupling constants.
 *
 * Four levels a, b, c, d; b is the ground state and the energy origin.
 * Fields 1 (pump) and 2 (Stokes) always drive a–b and the a/c transition
 * and imprint the c–b coherence grating; fields 3 (probe) and 4 (signal)
 * close the loop. The variant fixes which pairs fields 3 and 4 couple:
 *
 *   DoubleLambda  1:a–b 2:a–c 3:d–c 4:d–b   ν₄ = ν₁ − ν₂ + ν₃
 *   LadderLambda  1:a–b 2:a–c 3:c–d 4:d–b   ν₄ = ν₁ − ν₂ − ν₃
 *   VLambda       1:a–b 2:c–a 3:d–b 4:c–d   ν₄ = ν₁ + ν₂ − ν₃
 *
 * The same signs give the wavevector closure k₄ = k₁ ± k₂ ± k₃.
 */

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>

#include "error.hpp"
#include "units.hpp"

namespace backscatter {

using cplx = std::complex<double>;

enum class Level : int { a = 0, b = 1, c = 2, d = 3 };

inline constexpr int index(Level l) { return static_cast<int>(l); }

inline constexpr std::array<Level, 4> all_levels{Level::a, Level::b, Level::c, Level::d};

inline char level_name(Level l) { return "abcd"[index(l)]; }

enum class Variant { DoubleLambda, LadderLambda, VLambda };

inline std::string_view variant_name(Variant v) {
    switch (v) {
        case Variant::DoubleLambda: return "double_lambda";
        case Variant::LadderLambda: return "ladder_lambda";
        case Variant::VLambda: return "v_lambda";
    }
    return "unknown";
}

inline Variant parse_variant(std::string_view s) {
    if (s == "double_lambda" || s == "DoubleLambda") return Variant::DoubleLambda;
    if (s == "ladder_lambda" || s == "LadderLambda") return Variant::LadderLambda;
    if (s == "v_lambda" || s == "VLambda") return Variant::VLambda;
    throw Error(ErrorKind::Config, "unknown scheme variant '" + std::string(s) +
                                       "' (expected double_lambda, ladder_lambda or v_lambda)");
}

/// Field slots, numbered as fields 1..4 in the physics.
namespace field {
inline constexpr int pump = 0;
inline constexpr int stokes = 1;
inline constexpr int probe = 2;
inline constexpr int signal = 3;
}  // namespace field

struct Transition {
    Level upper;
    Level lower;
};

inline constexpr std::array<Transition, 4> coupled_transitions(Variant v) {
    using L = Level;
    switch (v) {
        case Variant::DoubleLambda:
            return {{{L::a, L::b}, {L::a, L::c}, {L::d, L::c}, {L::d, L::b}}};
        case Variant::LadderLambda:
            return {{{L::a, L::b}, {L::a, L::c}, {L::c, L::d}, {L::d, L::b}}};
        case Variant::VLambda:
            return {{{L::a, L::b}, {L::c, L::a}, {L::d, L::b}, {L::c, L::d}}};
    }
    return {};
}

/// Signs (s₂, s₃) of the closure x₄ = x₁ + s₂x₂ + s₃x₃ for frequencies and wavevectors.
struct ClosureSigns {
    int stokes;
    int probe;
};

inline constexpr ClosureSigns closure_signs(Variant v) {
    switch (v) {
        case Variant::DoubleLambda: return {-1, +1};
        case Variant::LadderLambda: return {-1, -1};
        case Variant::VLambda: return {+1, -1};
    }
    return {0, 0};
}

inline double closure_frequency(Variant v, double nu1, double nu2, double nu3) {
    auto s = closure_signs(v);
    return nu1 + s.stokes * nu2 + s.probe * nu3;
}

struct LevelScheme {
    Variant variant = Variant::DoubleLambda;
    std::array<double, 4> energy{};      // rad/s above level b
    std::array<double, 4> dipole{};      // ℘_j of field j's transition, C·m
    std::array<double, 4> decay{};       // population decay Γ_x, rad/s
    std::array<std::array<double, 4>, 4> pure_dephasing{};  // symmetric, rad/s
    std::array<std::array<double, 4>, 4> branching{};       // [from][to], rows sum to 1
    bool repopulation = true;

    double energy_of(Level l) const { return energy[index(l)]; }

    /// Signed ω_xy = E_x − E_y.
    double transition_frequency(Level x, Level y) const { return energy_of(x) - energy_of(y); }

    double field_transition_frequency(int j) const {
        auto t = coupled_transitions(variant)[j];
        return transition_frequency(t.upper, t.lower);
    }

    double decay_of(Level l) const { return decay[index(l)]; }

    /// Total decay rate of the x–y coherence: (Γ_x + Γ_y)/2 plus pure dephasing.
    double coherence_decay(Level x, Level y) const {
        return 0.5 * (decay_of(x) + decay_of(y)) + pure_dephasing[index(x)][index(y)];
    }

    /// Sets the total x–y coherence decay; must not undercut (Γ_x + Γ_y)/2.
    void set_coherence_decay(Level x, Level y, double total) {
        double extra = total - 0.5 * (decay_of(x) + decay_of(y));
        pure_dephasing[index(x)][index(y)] = extra;
        pure_dephasing[index(y)][index(x)] = extra;
    }

    void set_decay(Level l, double rate) { decay[index(l)] = rate; }

    void validate() const;
};

/// A scheme with the given level energies, all decay to b, unit-free defaults
/// for dipoles (1e−29 C·m) and no relaxation.
inline LevelScheme make_scheme(Variant v, double energy_a, double energy_c, double energy_d) {
    LevelScheme s;
    s.variant = v;
    s.energy = {energy_a, 0.0, energy_c, energy_d};
    s.dipole.fill(1e-29);
    for (auto& row : s.branching) row = {0.0, 1.0, 0.0, 0.0};
    return s;
}

inline void LevelScheme::validate() const {
    if (energy[index(Level::b)] != 0.0)
        throw Error(ErrorKind::Inconsistency, "level energies must be offsets from level b");
    auto transitions = coupled_transitions(variant);
    for (int j = 0; j < 4; ++j) {
        auto t = transitions[j];
        if (!(transition_frequency(t.upper, t.lower) > 0.0))
            throw Error(ErrorKind::Inconsistency,
                        std::string("field ") + std::to_string(j + 1) + " transition " +
                            level_name(t.upper) + "–" + level_name(t.lower) +
                            " must have E_" + level_name(t.upper) + " > E_" + level_name(t.lower) +
                            " for variant " + std::string(variant_name(variant)));
        if (!(dipole[j] > 0.0))
            throw Error(ErrorKind::InvalidParameter,
                        "dipole moment of field " + std::to_string(j + 1) + " must be positive");
    }
    for (Level x : all_levels) {
        detail::require_non_negative(decay_of(x), "decay rate");
        double total = 0.0;
        for (Level y : all_levels) {
            double b = branching[index(x)][index(y)];
            if (b < 0.0) throw Error(ErrorKind::InvalidParameter, "branching ratios must be non-negative");
            total += b;
            if (x != y && pure_dephasing[index(x)][index(y)] < -1e-12 * (1.0 + coherence_decay(x, y)))
                throw Error(ErrorKind::InvalidParameter,
                            std::string("coherence decay γ_") + level_name(x) + level_name(y) +
                                " is below (Γ_" + level_name(x) + " + Γ_" + level_name(y) + ")/2");
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw Error(ErrorKind::InvalidParameter,
                        std::string("branching from level ") + level_name(x) + " must sum to 1");
    }
}

struct Field {
    double frequency = 0.0;  // ν_j, rad/s
    cplx rabi{};             // Ω_j, rad/s
    int direction = +1;      // +1 along z, −1 against
    double wavevector = 0.0; // k_j, rad/m; filled by the dispersion module
};

struct FieldSet {
    std::array<Field, 4> field{};

    Field& operator[](int j) { return field[j]; }
    const Field& operator[](int j) const { return field[j]; }

    double frequency(int j) const { return field[j].frequency; }
    cplx rabi(int j) const { return field[j].rabi; }

    void validate() const {
        for (int j = 0; j < 4; ++j) {
            if (!(field[j].frequency > 0.0))
                throw Error(ErrorKind::InvalidParameter,
                            "frequency of field " + std::to_string(j + 1) + " must be positive");
            if (field[j].direction != 1 && field[j].direction != -1)
                throw Error(ErrorKind::InvalidParameter, "field direction must be +1 or -1");
        }
    }
};

struct MediumParams {
    double density = 0.0;         // N, m^-3
    double doppler_width = 0.0;   // Δ_D, rad/s
    double radiative_rate = 1.0;  // γ_r, rad/s
    double length = 1e-2;         // L, m

    void validate() const {
        detail::require_non_negative(density, "density");
        detail::require_non_negative(doppler_width, "Doppler width");
        detail::require_positive(radiative_rate, "radiative decay rate");
        detail::require_positive(length, "cell length");
    }
};

/// Frame (rotating-wave) frequency of each level; fields 1–3 fix them and
/// field 4 must close the loop.
inline std::array<double, 4> frame_frequencies(Variant v, const FieldSet& f) {
    std::array<double, 4> theta{};
    auto tr = coupled_transitions(v);
    std::array<bool, 4> known{false, true, false, false};
    for (int pass = 0; pass < 3; ++pass) {
        for (int j = 0; j < 3; ++j) {
            int u = index(tr[j].upper), l = index(tr[j].lower);
            if (known[l] && !known[u]) {
                theta[u] = theta[l] + f.frequency(j);
                known[u] = true;
            } else if (known[u] && !known[l]) {
                theta[l] = theta[u] - f.frequency(j);
                known[l] = true;
            }
        }
    }
    return theta;
}

/// E_x − θ_x for each level, accumulated from the field detunings
/// Δ_j = ν_j − ω_j rather than by subtracting absolute frequencies, so a
/// resonant field contributes an exact zero.
inline std::array<double, 4> level_detunings(const LevelScheme& s, const FieldSet& f) {
    std::array<double, 4> out{};
    auto tr = coupled_transitions(s.variant);
    std::array<bool, 4> known{false, true, false, false};
    for (int pass = 0; pass < 3; ++pass) {
        for (int j = 0; j < 3; ++j) {
            int u = index(tr[j].upper), l = index(tr[j].lower);
            double detuning = f.frequency(j) - s.field_transition_frequency(j);
            if (known[l] && !known[u]) {
                out[u] = out[l] - detuning;
                known[u] = true;
            } else if (known[u] && !known[l]) {
                out[l] = out[u] + detuning;
                known[l] = true;
            }
        }
    }
    return out;
}

inline void check_frequency_closure(Variant v, const FieldSet& f, double rel_tol = 1e-9) {
    double expected = closure_frequency(v, f.frequency(0), f.frequency(1), f.frequency(2));
    double got = f.frequency(3);
    if (std::abs(got - expected) > rel_tol * std::abs(expected)) {
        auto s = closure_signs(v);
        throw Error(ErrorKind::Inconsistency,
                    std::string("frequency closure ν₄ = ν₁ ") + (s.stokes < 0 ? "− " : "+ ") + "ν₂ " +
                        (s.probe < 0 ? "− " : "+ ") + "ν₃ violated for " + std::string(variant_name(v)) +
                        ": ν₄ = " + std::to_string(got) + " rad/s, closure gives " +
                        std::to_string(expected) + " rad/s");
    }
}

/// Fields 1–3 resonant with their transitions, field 4 from the closure.
inline FieldSet resonant_fields(const LevelScheme& s, cplx pump, cplx stokes, cplx probe, cplx signal) {
    FieldSet f;
    for (int j = 0; j < 3; ++j) f[j].frequency = s.field_transition_frequency(j);
    f[field::signal].frequency = closure_frequency(s.variant, f.frequency(0), f.frequency(1), f.frequency(2));
    f[field::pump].rabi = pump;
    f[field::stokes].rabi = stokes;
    f[field::probe].rabi = probe;
    f[field::signal].rabi = signal;
    return f;
}

/// Copy of `f` with the pump detuned by δ = ν₁ − ω_ab; ν₄ follows the closure.
inline FieldSet with_pump_detuning(const LevelScheme& s, FieldSet f, double delta) {
    f[field::pump].frequency = s.field_transition_frequency(field::pump) + delta;
    f[field::signal].frequency =
        closure_frequency(s.variant, f.frequency(0), f.frequency(1), f.frequency(2));
    return f;
}

/// η_j = ν_j N ℘_j² / (2ε₀ħc), the coupling in ∂Ω_j/∂z = iη_j ρ_j.
inline double coupling_constant(double nu, double density, double dipole) {
    detail::require_positive(nu, "frequency");
    detail::require_non_negative(density, "density");
    detail::require_positive(dipole, "dipole moment");
    using namespace constants;
    return nu * density * dipole * dipole / (2.0 * epsilon0 * hbar * c);
}

inline double coupling_constant(const LevelScheme& s, const FieldSet& f, const MediumParams& m, int j) {
    return coupling_constant(f.frequency(j), m.density, s.dipole[j]);
}

}  // namespace backscatter

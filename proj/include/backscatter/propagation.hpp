/*
 * propagation.hpp: z-marching of the four field envelopes through a medium
 * whose density matrix follows the local fields adiabatically, and the
 * quadrature form of the generated-signal integral.
 *
 * Each field is written Ω_j(z) = Ω̃_j(z)·e^{iq_j z} with the vacuum carrier
 * q_j = ±ν_j/c. A forward field obeys ∂Ω̃_j/∂z = iη_jρ_j e^{−iq_j z}; the
 * backward signal obeys ∂Ω̃₄/∂z = −iη₄ρ₄ e^{−iq₄z} and is swept from L to 0.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "bloch.hpp"
#include "dispersion.hpp"
#include "error.hpp"
#include "medium.hpp"
#include "phasematch.hpp"

namespace backscatter {

/// Which coherence radiates into field 4.
enum class SignalSource {
    OwnTransition,  // the element on field 4's own transition (ρ_db; ρ_cd for VLambda)
    PrintedDc,      // ρ_dc regardless of variant
};

struct ValidityCheck {
    std::string name;
    std::string condition;
    double ratio = 0.0;
    double threshold = 0.1;
    bool pass = true;
};

namespace detail {
inline double safe_ratio(double num, double den) {
    if (num == 0.0) return 0.0;
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return num / den;
}
}  // namespace detail

/// Regime checks for the perturbative treatment; a ratio above the
/// threshold produces a warning, never an error.
inline std::vector<ValidityCheck> validity_report(const FieldSet& f, double threshold = 0.1) {
    double o1 = std::abs(f.rabi(0)), o2 = std::abs(f.rabi(1)), o3 = std::abs(f.rabi(2)), o4 = std::abs(f.rabi(3));
    std::vector<ValidityCheck> out = {
        {"pump hierarchy", "|Ω₁| ≪ |Ω₂|", detail::safe_ratio(o1, o2), threshold},
        {"power broadening", "|Ω₃|² ≪ |Ω₁|² + |Ω₂|²", detail::safe_ratio(o3 * o3, o1 * o1 + o2 * o2), threshold},
        {"signal weakness", "|Ω₄| ≪ |Ω₃|", detail::safe_ratio(o4, o3), threshold},
    };
    for (auto& c : out) c.pass = c.ratio <= c.threshold;
    return out;
}

inline std::string describe(const ValidityCheck& c) {
    return c.name + ": " + c.condition + " violated (ratio " + std::to_string(c.ratio) + " > " +
           std::to_string(c.threshold) + ")";
}

struct PropagationOptions {
    bool pump_depletion = false;
    SignalSource source = SignalSource::OwnTransition;
    double validity_threshold = 0.1;
};

struct FieldProfiles {
    std::vector<double> z;
    std::array<std::vector<cplx>, 4> envelope;
    std::array<int, 4> direction{1, 1, 1, 1};
    std::vector<cplx> grating;  // local ρ_cb(z), carrier included
    std::vector<ValidityCheck> validity;
    std::vector<std::string> warnings;

    /// Envelope where field j leaves the cell.
    cplx output(int j) const { return direction[j] > 0 ? envelope[j].back() : envelope[j].front(); }
};

namespace detail {

struct MarchContext {
    const LevelScheme& scheme;
    const PropagationOptions& opt;
    Matrix4c diagonal;
    Relaxation relax;
    std::array<Transition, 4> transitions;
    std::array<double, 4> eta{};
    std::array<double, 4> carrier{};  // q_j
    std::array<double, 4> k_fixed{};  // wavevector of a prescribed (undepleted) field
    std::array<cplx, 4> boundary{};
    std::array<bool, 4> prescribed{};

    cplx prescribed_envelope(int j, double z) const {
        return boundary[j] * std::exp(I * (k_fixed[j] - carrier[j]) * z);
    }

    DensityMatrix medium(const std::array<cplx, 4>& env, double z) const {
        Matrix4c h = diagonal;
        for (int j = 0; j < 4; ++j) {
            cplx omega = env[j] * std::exp(I * carrier[j] * z);
            int u = index(transitions[j].upper), l = index(transitions[j].lower);
            h(u, l) = -omega;
            h(l, u) = -std::conj(omega);
        }
        DensityMatrix d = steady_state(h, relax);
        if (!d.rho.allFinite())
            throw Error(ErrorKind::Integrator, "non-finite medium response at z = " + std::to_string(z) + " m");
        return d;
    }

    cplx radiating(const DensityMatrix& d, int j) const {
        if (j == field::signal && opt.source == SignalSource::PrintedDc) return d(Level::d, Level::c);
        return field_coherence(d, scheme.variant, j);
    }

    /// dΩ̃_j/dz for every marched field; prescribed fields get their analytic slope.
    std::array<cplx, 4> slope(std::array<cplx, 4> env, double z, const std::array<int, 4>& dir,
                              const std::array<bool, 4>& active, DensityMatrix* state = nullptr) const {
        for (int j = 0; j < 4; ++j)
            if (prescribed[j]) env[j] = prescribed_envelope(j, z);
        DensityMatrix d = medium(env, z);
        if (state) *state = d;
        std::array<cplx, 4> out{};
        for (int j = 0; j < 4; ++j) {
            if (!active[j]) continue;
            if (prescribed[j])
                out[j] = I * (k_fixed[j] - carrier[j]) * env[j];
            else
                out[j] = static_cast<double>(dir[j]) * I * eta[j] * radiating(d, j) * std::exp(-I * carrier[j] * z);
        }
        return out;
    }
};

inline std::array<cplx, 4> axpy(const std::array<cplx, 4>& y, double h, const std::array<cplx, 4>& k) {
    std::array<cplx, 4> out;
    for (int j = 0; j < 4; ++j) out[j] = y[j] + h * k[j];
    return out;
}

/// Pump wavevector including the medium, falling back to the bare two-level
/// response when there is no Stokes field.
inline double dressed_pump_wavevector(const LevelScheme& s, const FieldSet& f, const MediumParams& m) {
    double nu = f.frequency(field::pump);
    if (std::abs(f.rabi(field::stokes)) == 0.0) {
        auto rates = complex_rates(s, f);
        return wavevector(nu, two_level_susceptibility(m.density, s.dipole[field::pump], rates.ab)).k;
    }
    double delta = nu - s.field_transition_frequency(field::pump);
    return wavevector(nu, susceptibility(s, f, m, delta)).k;
}

}  // namespace detail

/// Integrates the field equations on nz uniform nodes over [0, L] with RK4.
inline FieldProfiles propagate_fields(const LevelScheme& s, const FieldSet& f, const MediumParams& m, int nz,
                                      const PropagationOptions& opt = {}) {
    s.validate();
    f.validate();
    m.validate();
    check_frequency_closure(s.variant, f);
    if (nz < 64) throw Error(ErrorKind::InvalidParameter, "propagation grid needs at least 64 nodes");
    for (int j = 0; j < 3; ++j)
        if (f[j].direction != 1)
            throw Error(ErrorKind::InvalidParameter, "fields 1–3 must co-propagate along +z");

    detail::MarchContext ctx{s, opt, Matrix4c::Zero(), relaxation(s), coupled_transitions(s.variant)};
    auto det = level_detunings(s, f);
    for (Level x : all_levels) ctx.diagonal(index(x), index(x)) = det[index(x)];
    std::array<int, 4> dir{1, 1, 1, f[field::signal].direction};
    for (int j = 0; j < 4; ++j) {
        ctx.eta[j] = coupling_constant(s, f, m, j);
        ctx.carrier[j] = dir[j] * f.frequency(j) / constants::c;
        ctx.boundary[j] = f.rabi(j);
    }
    if (!opt.pump_depletion) {
        ctx.prescribed[field::pump] = ctx.prescribed[field::stokes] = true;
        ctx.k_fixed[field::pump] = detail::dressed_pump_wavevector(s, f, m);
        ctx.k_fixed[field::stokes] = f.frequency(field::stokes) / constants::c;
    }

    FieldProfiles p;
    p.direction = dir;
    p.validity = validity_report(f, opt.validity_threshold);
    const double h = m.length / (nz - 1);
    p.z.resize(nz);
    for (int i = 0; i < nz; ++i) p.z[i] = i * h;
    p.z.back() = m.length;
    for (auto& e : p.envelope) e.assign(nz, cplx{});
    p.grating.assign(nz, cplx{});

    const bool backward = dir[field::signal] < 0;
    std::array<bool, 4> active{true, true, true, !backward};
    std::array<cplx, 4> y = ctx.boundary;
    if (backward) y[field::signal] = 0.0;
    std::vector<std::array<cplx, 4>> nodes(nz), slopes(nz);

    auto settle = [&](std::array<cplx, 4>& v, double z) {
        for (int j = 0; j < 2; ++j)
            if (ctx.prescribed[j]) v[j] = ctx.prescribed_envelope(j, z);
    };

    // Forward sweep: fields 1–3, plus field 4 when it co-propagates.
    for (int i = 0; i < nz; ++i) {
        double z = p.z[i];
        settle(y, z);
        DensityMatrix d;
        auto k1 = ctx.slope(y, z, dir, active, &d);
        nodes[i] = y;
        slopes[i] = k1;
        p.grating[i] = d(Level::c, Level::b);
        if (i + 1 == nz) break;
        auto k2 = ctx.slope(detail::axpy(y, 0.5 * h, k1), z + 0.5 * h, dir, active);
        auto k3 = ctx.slope(detail::axpy(y, 0.5 * h, k2), z + 0.5 * h, dir, active);
        auto k4 = ctx.slope(detail::axpy(y, h, k3), z + h, dir, active);
        for (int j = 0; j < 4; ++j)
            if (active[j]) y[j] += (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        for (int j = 0; j < 4; ++j)
            if (!std::isfinite(y[j].real()) || !std::isfinite(y[j].imag()))
                throw Error(ErrorKind::Integrator, "field " + std::to_string(j + 1) + " diverged at z = " +
                                                       std::to_string(z + h) + " m; refine the grid");
    }
    for (int i = 0; i < nz; ++i)
        for (int j = 0; j < 4; ++j) p.envelope[j][i] = nodes[i][j];

    if (backward) {
        // Reverse sweep for Ω̃₄ from z = L with Ω̃₄(L) = 0; fields 1–3 come from
        // the stored forward solution, cubic-Hermite interpolated at midpoints.
        std::array<bool, 4> only_signal{false, false, false, true};
        auto fields_at = [&](int i, bool midpoint, cplx signal) {
            std::array<cplx, 4> v = nodes[i];
            if (midpoint) {
                for (int j = 0; j < 3; ++j)
                    v[j] = 0.5 * (nodes[i][j] + nodes[i + 1][j]) + (h / 8.0) * (slopes[i][j] - slopes[i + 1][j]);
            }
            v[field::signal] = signal;
            return v;
        };
        cplx w = 0.0;
        p.envelope[field::signal][nz - 1] = w;
        for (int i = nz - 2; i >= 0; --i) {
            double zt = p.z[i + 1], zm = p.z[i] + 0.5 * h;
            auto k1 = ctx.slope(fields_at(i + 1, false, w), zt, dir, only_signal)[field::signal];
            auto k2 = ctx.slope(fields_at(i, true, w - 0.5 * h * k1), zm, dir, only_signal)[field::signal];
            auto k3 = ctx.slope(fields_at(i, true, w - 0.5 * h * k2), zm, dir, only_signal)[field::signal];
            auto k4 = ctx.slope(fields_at(i, false, w - h * k3), p.z[i], dir, only_signal)[field::signal];
            w -= (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
                throw Error(ErrorKind::Integrator,
                            "backward signal diverged at z = " + std::to_string(p.z[i]) + " m; refine the grid");
            p.envelope[field::signal][i] = w;
        }
    }

    double max_signal = 0.0;
    for (cplx v : p.envelope[field::signal]) max_signal = std::max(max_signal, std::abs(v));
    auto& weak = p.validity[2];
    weak.ratio = std::max(weak.ratio, detail::safe_ratio(max_signal, std::abs(f.rabi(field::probe))));
    weak.pass = weak.ratio <= weak.threshold;
    for (const auto& c : p.validity)
        if (!c.pass) p.warnings.push_back(describe(c));

    if (!opt.pump_depletion) {
        std::array<double, 4> k{ctx.k_fixed[0], ctx.k_fixed[1], f.frequency(2) / constants::c,
                                f.frequency(3) / constants::c};
        double kappa = mismatch(s.variant, k, dir[field::signal]);
        if (std::abs(kappa) * h > 0.5)
            p.warnings.push_back("grid under-resolves the phase mismatch (|κ|Δz = " +
                                 std::to_string(std::abs(kappa) * h) + " > 0.5)");
    }
    return p;
}

namespace detail {

/// ∫₀ᵃ sᵐ e^{iκs} ds for m = 0, 1, 2 by power series; needs |κa| ≲ 1.
inline std::array<cplx, 3> oscillatory_moments(double kappa, double a) {
    std::array<cplx, 3> out{};
    cplx term = 1.0;  // (iκa)ⁿ/n!
    for (int n = 0; n < 40; ++n) {
        for (int m = 0; m < 3; ++m) out[m] += term * std::pow(a, m + 1) / static_cast<double>(n + m + 1);
        term *= I * kappa * a / static_cast<double>(n + 1);
        if (std::abs(term) < 1e-18) break;
    }
    return out;
}

}  // namespace detail

/// Ω₄ = iη₄∫₀ᴸ e^{iκ(z + z₀)} ρ_sig(z) dz, with ρ_sig built from the grating
/// envelope and a fixed probe. The grating is interpolated piecewise
/// quadratically and each panel is integrated against the exact phase.
inline cplx quadrature_signal(const std::vector<cplx>& grating, double kappa, double length, double eta4, cplx probe,
                              cplx gamma_signal, Variant v = Variant::DoubleLambda, double z_origin = 0.0) {
    detail::require_positive(length, "cell length");
    const int n = static_cast<int>(grating.size());
    if (n < 64) throw Error(ErrorKind::Refinement, "signal quadrature needs at least 64 nodes, got " + std::to_string(n));
    const double h = length / (n - 1);
    if (std::abs(kappa) * h > 0.5)
        throw Error(ErrorKind::Refinement, "too few nodes for the phase mismatch: |κ|Δz = " +
                                               std::to_string(std::abs(kappa) * h) + " > 0.5; use at least " +
                                               std::to_string(static_cast<long>(std::ceil(2.0 * std::abs(kappa) * length)) + 1) +
                                               " nodes");

    std::vector<cplx> g(n);
    for (int i = 0; i < n; ++i) g[i] = signal_polarization(grating[i], probe, 0.0, gamma_signal, v);

    auto panel = [&](int i0, const std::array<cplx, 3>& mom, const std::array<cplx, 3>& lower) {
        cplx g0 = g[i0], g1 = g[i0 + 1], g2 = g[i0 + 2];
        cplx c0 = g0, c1 = (-3.0 * g0 + 4.0 * g1 - g2) / (2.0 * h), c2 = (g0 - 2.0 * g1 + g2) / (2.0 * h * h);
        cplx integral = c0 * (mom[0] - lower[0]) + c1 * (mom[1] - lower[1]) + c2 * (mom[2] - lower[2]);
        return std::exp(I * kappa * (i0 * h)) * integral;
    };

    const auto two = detail::oscillatory_moments(kappa, 2.0 * h);
    const std::array<cplx, 3> none{};
    cplx sum = 0.0;
    int i = 0;
    for (; i + 2 < n; i += 2) sum += panel(i, two, none);
    if (i + 1 < n) sum += panel(n - 3, two, detail::oscillatory_moments(kappa, h));
    return I * eta4 * std::exp(I * kappa * z_origin) * sum;
}

}  // namespace backscatter

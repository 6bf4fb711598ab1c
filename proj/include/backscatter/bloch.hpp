/*
 * bloch.hpp: four-level density-matrix dynamics.
 *
 * Conventions. The Hamiltonian is returned in angular-frequency units (H/ħ)
 * in the frame where level x rotates at θ_x, so that every field term is
 * static:
 *
 *   H_xx = E_x − θ_x,   H_ul = −Ω_j,   H_lu = −Ω_j*   (field j on u–l)
 *
 * and the rotating-frame coherence is ρ̃_xy = ρ_xy e^{i(θ_x − θ_y)t}. With
 * this sign choice the weak-probe coherence is ρ_ab = iΩ₁Γ_cb/(Γ_abΓ_cb + |Ω₂|²),
 * whose ratio to Ω₁ has a non-negative imaginary part (absorption), and the
 * grating is ρ_cb = −Ω₁Ω₂* / (Γ_abΓ_cb + |Ω₂|²).
 *
 * Relaxation is −½(Γρ + ρΓ) generalised to an independent decay rate per
 * coherence, plus an optional repopulation term returning decayed
 * population to the levels listed in the branching table.
 */

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "error.hpp"
#include "medium.hpp"

namespace backscatter {

using Matrix4c = Eigen::Matrix<cplx, 4, 4>;
using Liouvillian = Eigen::Matrix<cplx, 16, 16>;

inline constexpr cplx I{0.0, 1.0};

struct DensityMatrix {
    Matrix4c rho = Matrix4c::Zero();

    cplx operator()(Level x, Level y) const { return rho(index(x), index(y)); }
    double population(Level x) const { return rho(index(x), index(x)).real(); }
    cplx trace() const { return rho.trace(); }

    double hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }

    static DensityMatrix pure(Level x) {
        DensityMatrix d;
        d.rho(index(x), index(x)) = 1.0;
        return d;
    }
};

/// Γ_xy = γ_xy + i(ω_xy − (θ_x − θ_y)); the imaginary part is the detuning
/// of the x–y coherence from its rotating frame, taken from level_detunings.
inline cplx complex_rate(const LevelScheme& s, const std::array<double, 4>& detuning, Level x, Level y) {
    return {s.coherence_decay(x, y), detuning[index(x)] - detuning[index(y)]};
}

struct ComplexRates {
    cplx ab, ca, cb, db;
    cplx signal;  // the field-4 transition (d–b, or c–d for VLambda)
};

inline ComplexRates complex_rates(const LevelScheme& s, const FieldSet& f) {
    auto det = level_detunings(s, f);
    auto sig = coupled_transitions(s.variant)[field::signal];
    return {complex_rate(s, det, Level::a, Level::b), complex_rate(s, det, Level::c, Level::a),
            complex_rate(s, det, Level::c, Level::b), complex_rate(s, det, Level::d, Level::b),
            complex_rate(s, det, sig.upper, sig.lower)};
}

inline Matrix4c interaction_hamiltonian(const LevelScheme& s, const FieldSet& f) {
    auto det = level_detunings(s, f);
    Matrix4c h = Matrix4c::Zero();
    for (Level x : all_levels) h(index(x), index(x)) = det[index(x)];
    auto tr = coupled_transitions(s.variant);
    for (int j = 0; j < 4; ++j) {
        int u = index(tr[j].upper), l = index(tr[j].lower);
        h(u, l) += -f.rabi(j);
        h(l, u) += -std::conj(f.rabi(j));
    }
    return h;
}

struct Relaxation {
    std::array<double, 4> decay{};
    Eigen::Matrix4d coherence = Eigen::Matrix4d::Zero();
    Eigen::Matrix4d branching = Eigen::Matrix4d::Zero();  // (from, to)
    bool repopulation = true;
};

inline Relaxation relaxation(const LevelScheme& s) {
    Relaxation r;
    r.decay = s.decay;
    r.repopulation = s.repopulation;
    for (Level x : all_levels)
        for (Level y : all_levels) {
            r.branching(index(x), index(y)) = s.branching[index(x)][index(y)];
            if (x != y) r.coherence(index(x), index(y)) = s.coherence_decay(x, y);
        }
    return r;
}

inline Matrix4c master_equation_rhs(const Matrix4c& rho, const Matrix4c& h, const Relaxation& r) {
    Matrix4c out = -I * (h * rho - rho * h);
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y)
            out(x, y) -= (x == y ? r.decay[x] : r.coherence(x, y)) * rho(x, y);
    if (r.repopulation) {
        for (int x = 0; x < 4; ++x) {
            double outflow = r.decay[x] * rho(x, x).real();
            if (outflow == 0.0) continue;
            for (int y = 0; y < 4; ++y) out(y, y) += outflow * r.branching(x, y);
        }
    }
    return out;
}

namespace detail {
inline constexpr int vec_index(int x, int y) { return 4 * x + y; }
}  // namespace detail

/// Matrix of the linear map vec(ρ) ↦ vec(dρ/dt), built column by column.
inline Liouvillian liouvillian(const Matrix4c& h, const Relaxation& r) {
    Liouvillian l;
    for (int x = 0; x < 4; ++x)
        for (int y = 0; y < 4; ++y) {
            Matrix4c basis = Matrix4c::Zero();
            basis(x, y) = 1.0;
            Matrix4c image = master_equation_rhs(basis, h, r);
            for (int p = 0; p < 4; ++p)
                for (int q = 0; q < 4; ++q) l(detail::vec_index(p, q), detail::vec_index(x, y)) = image(p, q);
        }
    return l;
}

inline Matrix4c hermitize(const Matrix4c& m) { return 0.5 * (m + m.adjoint()); }

/// Solves dρ/dt = 0 with Tr ρ = 1 replacing the ρ_bb equation.
inline DensityMatrix steady_state(const Matrix4c& h, const Relaxation& r) {
    Liouvillian l = liouvillian(h, r);
    double scale = l.cwiseAbs().maxCoeff();
    if (scale == 0.0)
        throw DegenerateSteadyStateError(16, "steady state is degenerate: Liouvillian vanishes (null-space dimension 16)");
    l /= scale;

    const int row = detail::vec_index(index(Level::b), index(Level::b));
    Liouvillian a = l;
    a.row(row).setZero();
    for (int x = 0; x < 4; ++x) a(row, detail::vec_index(x, x)) = 1.0;

    Eigen::FullPivLU<Liouvillian> lu(a);
    if (!lu.isInvertible()) {
        Eigen::JacobiSVD<Liouvillian> svd(l);
        auto sv = svd.singularValues();
        int null_dim = 0;
        for (int i = 0; i < sv.size(); ++i)
            if (sv(i) <= 1e-12 * sv(0)) ++null_dim;
        throw DegenerateSteadyStateError(
            null_dim, "steady state is not unique (null-space dimension " + std::to_string(null_dim) +
                          "); add relaxation or couple the isolated levels");
    }
    Eigen::Matrix<cplx, 16, 1> rhs = Eigen::Matrix<cplx, 16, 1>::Zero();
    rhs(row) = 1.0;
    Eigen::Matrix<cplx, 16, 1> x = lu.solve(rhs);

    double residual = (l * x).norm();
    if (!(residual <= 1e-10 * l.norm() * x.norm()))
        throw DegenerateSteadyStateError(
            0, "no trace-preserving steady state (null-space dimension 0); the relaxation removes "
               "population without repopulation");

    DensityMatrix d;
    for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q) d.rho(p, q) = x(detail::vec_index(p, q));
    d.rho = hermitize(d.rho);
    return d;
}

inline DensityMatrix steady_state(const LevelScheme& s, const FieldSet& f) {
    return steady_state(interaction_hamiltonian(s, f), relaxation(s));
}

/// Largest frequency scale in the generator; explicit steps should stay
/// below 0.1 of its inverse.
inline double fastest_rate(const Matrix4c& h, const Relaxation& r) {
    double m = h.cwiseAbs().maxCoeff();
    for (double g : r.decay) m = std::max(m, g);
    return std::max(m, r.coherence.cwiseAbs().maxCoeff());
}

struct EvolveResult {
    DensityMatrix state;
    long steps = 0;
    std::vector<std::string> warnings;
};

/// Fixed-step RK4 integration of the rotating-frame master equation.
inline EvolveResult evolve(const DensityMatrix& rho0, const Matrix4c& h, const Relaxation& r, double duration,
                           double dt) {
    detail::require_non_negative(duration, "integration time");
    detail::require_positive(dt, "time step");
    EvolveResult out;
    out.state = rho0;
    if (duration == 0.0) return out;

    long n = static_cast<long>(std::ceil(duration / dt - 1e-9));
    double step = duration / static_cast<double>(n);
    double limit = 0.1 / fastest_rate(h, r);
    if (step > limit)
        out.warnings.push_back("time step " + std::to_string(step) + " s exceeds stability heuristic " +
                               std::to_string(limit) + " s");

    Matrix4c rho = rho0.rho;
    auto f = [&](const Matrix4c& m) { return master_equation_rhs(m, h, r); };
    for (long i = 0; i < n; ++i) {
        Matrix4c k1 = f(rho);
        Matrix4c k2 = f(rho + 0.5 * step * k1);
        Matrix4c k3 = f(rho + 0.5 * step * k2);
        Matrix4c k4 = f(rho + step * k3);
        rho = hermitize(rho + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
        if ((i & 255) == 0 || i + 1 == n) {
            double norm = rho.cwiseAbs().maxCoeff();
            if (!std::isfinite(norm) || norm > 10.0)
                throw Error(ErrorKind::Integrator,
                            "density matrix blew up after " + std::to_string(i + 1) +
                                " steps; reduce the time step below " + std::to_string(limit) + " s");
        }
    }
    out.state.rho = rho;
    out.steps = n;
    return out;
}

inline EvolveResult evolve(const DensityMatrix& rho0, const LevelScheme& s, const FieldSet& f, double duration,
                           double dt) {
    return evolve(rho0, interaction_hamiltonian(s, f), relaxation(s), duration, dt);
}

struct WeakProbe {
    cplx ab;  // probe polarisation ρ_ab
    cplx cb;  // grating ρ_cb
};

/// Closed-form steady state of the a–b–c subsystem to first order in Ω₁,
/// with ρ_bb = 1 and ρ_aa = ρ_cc = ρ_ca = 0. For VLambda, field 2 climbs from
/// a to c and the grating follows Ω₁Ω₂ instead of Ω₁Ω₂*.
inline WeakProbe weak_probe_coherence(cplx pump, cplx stokes, cplx gamma_ab, cplx gamma_cb,
                                      Variant v = Variant::DoubleLambda) {
    cplx denom = gamma_ab * gamma_cb + std::norm(stokes);
    if (std::abs(denom) == 0.0)
        throw Error(ErrorKind::Singularity, "Γ_abΓ_cb + |Ω₂|² vanishes; weak-probe coherence is singular");
    cplx stokes_factor = v == Variant::VLambda ? stokes : std::conj(stokes);
    return {I * pump * gamma_cb / denom, -pump * stokes_factor / denom};
}

/// ρ_ab/Ω₁ from the weak-probe solution; finite even when Ω₁ = 0.
inline cplx probe_response(cplx stokes, cplx gamma_ab, cplx gamma_cb) {
    cplx denom = gamma_ab * gamma_cb + std::norm(stokes);
    if (std::abs(denom) == 0.0)
        throw Error(ErrorKind::Singularity, "Γ_abΓ_cb + |Ω₂|² vanishes; probe response is singular");
    return I * gamma_cb / denom;
}

/// Steady coherence on the signal transition driven by the grating and the
/// probe, with ground-state closure (ρ_bb = 1, other populations zero):
///   DoubleLambda  ρ_db = i(Ω₄ + Ω₃ρ_cb)/Γ_db
///   LadderLambda  ρ_db = i(Ω₄ + Ω₃*ρ_cb)/Γ_db
///   VLambda       ρ_cd = −iΩ₃*ρ_cb/Γ_cd   (both populations of c–d vanish)
inline cplx signal_polarization(cplx grating, cplx probe, cplx signal, cplx gamma_signal,
                                Variant v = Variant::DoubleLambda) {
    if (std::abs(gamma_signal) == 0.0)
        throw Error(ErrorKind::Singularity, "signal-transition rate Γ vanishes");
    switch (v) {
        case Variant::DoubleLambda: return I * (signal + probe * grating) / gamma_signal;
        case Variant::LadderLambda: return I * (signal + std::conj(probe) * grating) / gamma_signal;
        case Variant::VLambda: return -I * std::conj(probe) * grating / gamma_signal;
    }
    return {};
}

/// The density-matrix element that radiates into field j.
inline cplx field_coherence(const DensityMatrix& d, Variant v, int j) {
    auto t = coupled_transitions(v)[j];
    return d(t.upper, t.lower);
}

}  // namespace backscatter

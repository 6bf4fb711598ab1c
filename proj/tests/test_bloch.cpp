#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace backscatter;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

FieldSet detuned_fields(const LevelScheme& s, cplx pump, cplx stokes, double d1, double d2) {
    FieldSet f = resonant_fields(s, pump, stokes, 0.0, 0.0);
    f[0].frequency += d1;
    f[1].frequency += d2;
    f[3].frequency = closure_frequency(s.variant, f.frequency(0), f.frequency(1), f.frequency(2));
    return f;
}

Matrix4c random_density(support::Rng& rng) {
    Eigen::Matrix<cplx, 4, 4> a;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a(i, j) = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    Matrix4c rho = a * a.adjoint();
    return rho / rho.trace();
}

}  // namespace

TEST_CASE("Hamiltonian is Hermitian with field terms on the coupled transitions") {
    support::Rng rng(11);
    for (Variant v : {Variant::DoubleLambda, Variant::LadderLambda, Variant::VLambda}) {
        auto s = support::optical_scheme(v);
        auto f = resonant_fields(s, rng.polar(1e3), rng.polar(1e6), rng.polar(1e4), rng.polar(1e2));
        Matrix4c h = interaction_hamiltonian(s, f);
        CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
        auto tr = coupled_transitions(v);
        for (int j = 0; j < 4; ++j) CHECK(h(index(tr[j].upper), index(tr[j].lower)) == -f.rabi(j));

        auto dark = resonant_fields(s, 0.0, 0.0, 0.0, 0.0);
        Matrix4c h0 = interaction_hamiltonian(s, dark);
        CHECK((h0 - Matrix4c(h0.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("a-b-c block equals a hand-built three-level lambda Hamiltonian") {
    auto s = support::optical_scheme(Variant::DoubleLambda);
    double d1 = 3e5, d2 = -7e4;
    cplx o1(2e3, 1e3), o2(4e6, -2e6);
    auto f = detuned_fields(s, o1, o2, d1, d2);
    Matrix4c h = interaction_hamiltonian(s, f);

    // Rotating frame with ρ_ab ~ e^{−iν₁t}, ρ_cb ~ e^{−i(ν₁−ν₂)t}: H_aa = −Δ₁,
    // H_cc = −(Δ₁ − Δ₂), couplings −Ω on a–b and a–c.
    Eigen::Matrix3cd hand;
    hand << -d1, -o1, -o2,
            -std::conj(o1), 0.0, 0.0,
            -std::conj(o2), 0.0, -(d1 - d2);
    int idx[3] = {index(Level::a), index(Level::b), index(Level::c)};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(std::abs(h(idx[i], idx[j]) - hand(i, j)) <= 1e-9 * (1.0 + std::abs(hand(i, j))));
}

TEST_CASE("master equation: dark ground state is stationary") {
    auto s = support::optical_scheme(Variant::DoubleLambda);
    auto f = resonant_fields(s, 0.0, 0.0, 0.0, 0.0);
    Matrix4c rhs = master_equation_rhs(DensityMatrix::pure(Level::b).rho, interaction_hamiltonian(s, f), relaxation(s));
    CHECK(rhs.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("master equation conserves trace and Hermiticity with repopulation") {
    support::Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        Variant v = static_cast<Variant>(trial % 3);
        auto s = support::optical_scheme(v, rng.log_uniform(1e5, 1e8), rng.log_uniform(1e2, 1e5), rng.log_uniform(1e2, 1e7));
        s.set_coherence_decay(Level::c, Level::b, s.coherence_decay(Level::c, Level::b) + rng.log_uniform(1, 1e4));
        s.branching[index(Level::a)] = {0.0, 0.6, 0.3, 0.1};
        auto f = resonant_fields(s, rng.polar(1e4), rng.polar(1e7), rng.polar(1e5), rng.polar(1e3));
        Matrix4c h = interaction_hamiltonian(s, f);
        Matrix4c rho = random_density(rng);
        Matrix4c out = master_equation_rhs(rho, h, relaxation(s));
        double scale = out.cwiseAbs().maxCoeff();
        CHECK(std::abs(out.trace()) <= 1e-12 * scale);
        CHECK((out - out.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    }
}

TEST_CASE("steady state is a valid density matrix") {
    support::Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        Variant v = static_cast<Variant>(trial % 3);
        auto s = support::optical_scheme(v, rng.log_uniform(1e6, 1e8), rng.log_uniform(1e2, 1e5), rng.log_uniform(1e2, 1e7));
        auto f = detuned_fields(s, rng.polar(rng.log_uniform(1e3, 1e8)), rng.polar(rng.log_uniform(1e5, 1e8)),
                                rng.uniform(-1e7, 1e7), rng.uniform(-1e6, 1e6));
        f[2].rabi = rng.polar(rng.log_uniform(1e2, 1e7));
        DensityMatrix d = steady_state(s, f);
        CHECK(d.hermiticity_error() <= 1e-10);
        CHECK(std::abs(d.trace() - 1.0) <= 1e-10);
        for (Level l : all_levels) {
            CHECK(d.population(l) >= -1e-10);
            CHECK(d.population(l) <= 1.0 + 1e-10);
            CHECK(std::abs(d(l, l).imag()) <= 1e-12);
        }
    }
}

TEST_CASE("weak-probe coherences agree with the full steady state") {
    support::Rng rng(14);
    for (Variant v : {Variant::DoubleLambda, Variant::LadderLambda, Variant::VLambda}) {
        for (int trial = 0; trial < 10; ++trial) {
            auto s = support::optical_scheme(v, rng.log_uniform(1e6, 1e8), rng.log_uniform(1e2, 1e4), 1e5);
            cplx o2 = rng.polar(rng.log_uniform(1e6, 1e8));
            auto f = detuned_fields(s, 1e-4 * std::abs(o2) * std::polar(1.0, rng.phase()), o2, rng.uniform(-1e6, 1e6),
                                    rng.uniform(-1e5, 1e5));
            auto rates = complex_rates(s, f);
            auto w = weak_probe_coherence(f.rabi(0), f.rabi(1), rates.ab, rates.cb, v);
            DensityMatrix d = steady_state(s, f);
            CHECK(support::rel(d(Level::a, Level::b), w.ab) <= 1e-6);
            CHECK(support::rel(d(Level::c, Level::b), w.cb) <= 1e-6);
        }
    }
}

TEST_CASE("grating follows −Ω₁Ω₂* and the probe response absorbs") {
    cplx o1(3.0, 1.0), o2(2e6, 5e5);
    cplx gab(1e7, 2e5), gcb(1e3, 2e5);
    auto w = weak_probe_coherence(o1, o2, gab, gcb);
    cplx d = gab * gcb + std::norm(o2);
    CHECK(support::rel(w.cb, -o1 * std::conj(o2) / d) <= 1e-15);
    CHECK(support::rel(w.ab, I * o1 * gcb / d) <= 1e-15);
    CHECK(support::rel(weak_probe_coherence(o1, o2, gab, gcb, Variant::VLambda).cb, -o1 * o2 / d) <= 1e-15);

    support::Rng rng(15);
    for (int i = 0; i < 1000; ++i) {
        cplx ga(rng.log_uniform(1e5, 1e8), rng.uniform(-1e8, 1e8));
        cplx gc(rng.log_uniform(1e0, 1e5), ga.imag() + rng.uniform(-1e5, 1e5));
        CHECK(probe_response(rng.polar(rng.log_uniform(1e4, 1e9)), ga, gc).imag() >= 0.0);
    }
    CHECK_THROWS_AS(weak_probe_coherence(1.0, 0.0, 0.0, 1.0), Error);
}

TEST_CASE("signal coherence on its own transition") {
    auto s = support::optical_scheme(Variant::DoubleLambda, 1e7, 2e3, 2e5);
    auto f = resonant_fields(s, 1e3, 1e7, 1e4, 0.0);
    DensityMatrix d = steady_state(s, f);
    auto rates = complex_rates(s, f);
    cplx closed = signal_polarization(d(Level::c, Level::b), f.rabi(2), 0.0, rates.signal, Variant::DoubleLambda);
    CHECK(support::rel(d(Level::d, Level::b), closed) <= 1e-3);
    CHECK(field_coherence(d, Variant::DoubleLambda, field::signal) == d(Level::d, Level::b));
    CHECK(field_coherence(d, Variant::VLambda, field::signal) == d(Level::c, Level::d));
    CHECK_THROWS_AS(signal_polarization(1.0, 1.0, 0.0, 0.0), Error);
}

TEST_CASE("steady state reports a degenerate null space") {
    auto s = support::optical_scheme(Variant::DoubleLambda, 0.0, 0.0, 0.0);
    auto f = resonant_fields(s, 0.0, 0.0, 0.0, 0.0);
    try {
        steady_state(s, f);
        FAIL("expected a degenerate steady state");
    } catch (const DegenerateSteadyStateError& e) {
        CHECK(e.null_dimension() == 16);
    }

    auto isolated = support::optical_scheme(Variant::DoubleLambda, 1e7, 1e3, 0.0);
    auto g = resonant_fields(isolated, 1e3, 1e6, 0.0, 0.0);
    try {
        steady_state(isolated, g);
        FAIL("expected a degenerate steady state");
    } catch (const DegenerateSteadyStateError& e) {
        CHECK(e.null_dimension() >= 2);
        CHECK_THAT(std::string(e.what()), ContainsSubstring("null-space dimension"));
    }

    auto lossy = support::optical_scheme(Variant::DoubleLambda);
    lossy.repopulation = false;
    CHECK_THROWS_AS(steady_state(lossy, resonant_fields(lossy, 1e3, 1e6, 0.0, 0.0)), DegenerateSteadyStateError);
}

TEST_CASE("resonant Rabi flopping under H = −Ω") {
    auto s = support::optical_scheme(Variant::DoubleLambda, 0.0, 0.0, 0.0);
    double omega = 1e6;
    auto f = resonant_fields(s, omega, 0.0, 0.0, 0.0);
    double dt = 1e-9;
    auto half = evolve(DensityMatrix::pure(Level::b), s, f, constants::pi / (2.0 * omega), dt);
    CHECK_THAT(half.state.population(Level::a), WithinAbs(1.0, 1e-9));
    auto full = evolve(DensityMatrix::pure(Level::b), s, f, constants::pi / omega, dt);
    CHECK_THAT(full.state.population(Level::a), WithinAbs(0.0, 1e-9));
    CHECK(full.warnings.empty());
}

TEST_CASE("detuned Rabi flopping has amplitude 4Ω²/W²") {
    auto s = support::optical_scheme(Variant::DoubleLambda, 0.0, 0.0, 0.0);
    double omega = 1e6, delta = 1.5e6;
    auto f = detuned_fields(s, omega, 0.0, delta, 0.0);
    double w = std::sqrt(4.0 * omega * omega + delta * delta);
    auto r = evolve(DensityMatrix::pure(Level::b), s, f, constants::pi / w, 1e-9);
    CHECK_THAT(r.state.population(Level::a), WithinAbs(4.0 * omega * omega / (w * w), 1e-8));
}

TEST_CASE("evolution relaxes onto the steady state") {
    auto s = support::optical_scheme(Variant::DoubleLambda, 1e7, 1e6, 1e6);
    auto f = resonant_fields(s, 1e5, 3e6, 1e4, 0.0);
    auto r = evolve(DensityMatrix::pure(Level::b), s, f, 50.0 / 1e6, 1e-8);
    DensityMatrix d = steady_state(s, f);
    CHECK((r.state.rho - d.rho).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(r.state.hermiticity_error() <= 1e-14);
}

TEST_CASE("evolve warns on coarse steps and stops on blow-up") {
    auto s = support::optical_scheme(Variant::DoubleLambda, 1e7, 1e3, 1e3);
    auto f = resonant_fields(s, 1e5, 3e6, 0.0, 0.0);
    auto coarse = evolve(DensityMatrix::pure(Level::b), s, f, 2e-7, 2e-8);
    CHECK_FALSE(coarse.warnings.empty());
    CHECK_THROWS_WITH(evolve(DensityMatrix::pure(Level::b), s, f, 1e-4, 1e-6), ContainsSubstring("blew up"));
    CHECK_THROWS_AS(evolve(DensityMatrix::pure(Level::b), s, f, 1.0, 0.0), Error);
    CHECK(evolve(DensityMatrix::pure(Level::b), s, f, 0.0, 1.0).steps == 0);
}

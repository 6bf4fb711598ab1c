#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace backscatter;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct Setup {
    LevelScheme s;
    FieldSet f;
    MediumParams m;
};

Setup eit(double density, double stokes, double gamma_cb_total = 0.0) {
    Setup x;
    x.s = support::optical_scheme(Variant::DoubleLambda, 1e7, 0.0, 2e3);
    x.s.set_coherence_decay(Level::c, Level::b, gamma_cb_total);
    x.f = resonant_fields(x.s, 1e3, stokes, 0.0, 0.0);
    x.m = support::medium(density, 1e9, 1e7, 1e-2);  // Δ_D = 100γ_r
    return x;
}

}  // namespace

TEST_CASE("empty medium propagates at c") {
    auto x = eit(0.0, 1e7);
    double nu = x.s.field_transition_frequency(0);
    auto d = dispersion_sample(x.s, x.f, x.m, 0.0);
    CHECK(d.chi_re == 0.0);
    CHECK(d.chi_im == 0.0);
    CHECK_THAT(d.k, WithinRel(nu / constants::c, 1e-15));
    CHECK_THAT(d.vg, WithinRel(constants::c, 1e-12));
}

TEST_CASE("absorption is never negative") {
    support::Rng rng(21);
    for (int trial = 0; trial < 500; ++trial) {
        Variant v = static_cast<Variant>(trial % 3);
        auto s = support::optical_scheme(v, rng.log_uniform(1e5, 1e8), rng.log_uniform(1e1, 1e5), 1e3);
        auto f = resonant_fields(s, 1.0, rng.polar(rng.log_uniform(1e4, 1e9)), 0.0, 0.0);
        f[1].frequency += rng.uniform(-1e6, 1e6);
        f[3].frequency = closure_frequency(v, f.frequency(0), f.frequency(1), f.frequency(2));
        auto m = support::medium(rng.log_uniform(1e14, 1e20), 1e7, 1e7, 1e-2);
        cplx chi = susceptibility(s, f, m, rng.uniform(-1e9, 1e9));
        CHECK(chi.imag() >= 0.0);
    }
}

TEST_CASE("vanishing coupling recovers the two-level susceptibility") {
    auto x = eit(1e18, 1e-3, 1e3);
    for (double delta : {-3e7, -1e6, 0.0, 2e6, 5e7}) {
        auto rates = complex_rates(x.s, with_pump_detuning(x.s, x.f, delta));
        cplx two = two_level_susceptibility(x.m.density, x.s.dipole[0], rates.ab);
        cplx chi = susceptibility(x.s, x.f, x.m, delta);
        CHECK(support::rel(chi, two) <= 1e-6);
    }
}

TEST_CASE("homogeneous real part equals the Doppler closed form") {
    // With ℘² from γ_r, N℘²/(ε₀ħ) = 3λ³Nγ_r/(8π²), so both share δ/|Ω₂|².
    auto x = eit(1e17, 3e7);
    double lambda = wavelength_from_angular(x.s.field_transition_frequency(0));
    for (double delta : {-1e4, -1e3, 5e3}) {
        cplx chi = susceptibility(x.s, x.f, x.m, delta);
        cplx dop = doppler_susceptibility(delta, lambda, x.m.density, 1e7, x.m.doppler_width, x.f.rabi(1));
        CHECK_THAT(chi.real(), WithinRel(dop.real(), 1e-3));
    }
}

TEST_CASE("group velocity at resonance is (1/c + η₁/|Ω₂|²)⁻¹") {
    for (double density : {1e15, 1e17, 1e19}) {
        auto x = eit(density, 2e7);
        double eta = coupling_constant(x.s.field_transition_frequency(0), density, x.s.dipole[0]);
        double expected = 1.0 / (1.0 / constants::c + eta / std::norm(x.f.rabi(1)));
        CHECK_THAT(group_velocity(x.s, x.f, x.m, 0.0), WithinRel(expected, 1e-6));
    }
}

TEST_CASE("wavevector and absorption from χ") {
    double nu = 2e15;
    auto w = wavevector(nu, cplx(1e-4, 2e-6));
    CHECK_THAT(w.k, WithinRel(nu / constants::c * (1.0 + 0.5e-4), 1e-15));
    CHECK_THAT(w.alpha, WithinRel(nu / constants::c * 1e-6, 1e-15));
    CHECK_THROWS_AS(wavevector(0.0, 0.0), Error);
}

TEST_CASE("dispersion is monotone inside the transparency window") {
    auto x = eit(1e17, 3e7);
    double window = eit_window(x.f.rabi(1), x.m.radiative_rate, x.m.doppler_width);
    CHECK_THAT(window, WithinRel(9e14 / 1e8, 1e-12));
    auto scan = dispersion_scan(x.s, x.f, x.m, -0.5 * window, 0.5 * window, 201);
    REQUIRE(scan.size() == 201);
    for (std::size_t i = 1; i < scan.size(); ++i) {
        CHECK(scan[i].chi_re > scan[i - 1].chi_re);
        CHECK(scan[i].k > scan[i - 1].k);
    }
    CHECK_THROWS_AS(dispersion_scan(x.s, x.f, x.m, 0.0, 1.0, 1), Error);
}

TEST_CASE("slope of k(ν) at resonance equals 1/V_g") {
    auto x = eit(1e17, 3e7);
    double h = 10.0;
    double slope = (pump_wavevector(x.s, x.f, x.m, h) - pump_wavevector(x.s, x.f, x.m, -h)) / (2.0 * h);
    CHECK_THAT(slope, WithinRel(1.0 / group_velocity(x.s, x.f, x.m, 0.0), 1e-4));
}

TEST_CASE("susceptibility needs a coupling field") {
    auto x = eit(1e17, 0.0);
    CHECK_THROWS_AS(susceptibility(x.s, x.f, x.m, 0.0), Error);
    CHECK_THROWS_AS(eit_window(1.0, 0.0, 1.0), Error);
    CHECK_THROWS_AS(doppler_susceptibility(1.0, 1e-6, 1.0, 1.0, 1.0, 0.0), Error);
}

TEST_CASE("Doppler closed form") {
    double lambda = 780e-9, n = 1e19, g = 3.8e7, dd = 3e9;
    cplx stokes(2e8, 0.0);
    double delta = -1e6;
    cplx chi = doppler_susceptibility(delta, lambda, n, g, dd, stokes);
    double pre = 3.0 * lambda * lambda * lambda * n / (8.0 * constants::pi * constants::pi);
    CHECK_THAT(chi.real(), WithinRel(pre * g * delta / 4e16, 1e-14));
    CHECK_THAT(chi.imag(), WithinRel(pre * g * dd * delta * delta / 1.6e33, 1e-14));
    CHECK_THAT(doppler_susceptibility(0.0, lambda, n, g, dd, stokes).imag(), WithinAbs(0.0, 0.0));
}

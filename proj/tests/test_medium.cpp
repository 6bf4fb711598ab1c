#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace backscatter;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinRel;

TEST_CASE("coupling constant matches a hand evaluation") {
    double nu = 2.4e15, n = 1.4e19, dipole = 2e-29;
    double expected = 2.4e15 * 1.4e19 * (2e-29 * 2e-29) / (2.0 * 8.8541878128e-12 * 1.054571817e-34 * 299792458.0);
    CHECK_THAT(coupling_constant(nu, n, dipole), WithinRel(expected, 1e-12));
}

TEST_CASE("coupling constant scales linearly in density and quadratically in dipole") {
    CHECK(coupling_constant(1e15, 0.0, 1e-29) == 0.0);
    double base = coupling_constant(1e15, 1e18, 1e-29);
    CHECK_THAT(coupling_constant(1e15, 2e18, 1e-29), WithinRel(2.0 * base, 1e-14));
    CHECK_THAT(coupling_constant(1e15, 1e18, 3e-29), WithinRel(9.0 * base, 1e-14));
}

TEST_CASE("coupling constant rejects unphysical arguments") {
    CHECK_THROWS_AS(coupling_constant(0.0, 1e18, 1e-29), Error);
    CHECK_THROWS_AS(coupling_constant(1e15, -1.0, 1e-29), Error);
    CHECK_THROWS_AS(coupling_constant(1e15, 1e18, 0.0), Error);
    try {
        coupling_constant(1e15, 1e18, -1e-29);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidParameter);
    }
}

TEST_CASE("wavelength round trip is exact to 1e-12") {
    support::Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        double lambda = rng.log_uniform(100e-9, 1e-2);
        CHECK_THAT(wavelength_from_angular(angular_from_wavelength(lambda)), WithinRel(lambda, 1e-12));
        double per_cm = rng.log_uniform(0.1, 1e5);
        CHECK_THAT(wavenumber_from_angular(angular_from_wavenumber(per_cm)), WithinRel(per_cm, 1e-12));
    }
}

TEST_CASE("unit conversion") {
    CHECK_THAT(to_si(236, "nm", Dimension::AngularFrequency),
               WithinRel(2.0 * constants::pi * constants::c / 236e-9, 1e-15));
    CHECK_THAT(to_si(10, "cm^-1", Dimension::AngularFrequency),
               WithinRel(2.0 * constants::pi * constants::c * 1000.0, 1e-15));
    CHECK_THAT(to_si(1, "MHz", Dimension::Rate), WithinRel(2.0 * constants::pi * 1e6, 1e-15));
    CHECK(to_si(5, "rad/s", Dimension::Rate) == 5.0);
    CHECK(to_si(1, "cm^-3", Dimension::Density) == 1e6);
    CHECK_THAT(to_si(1, "D", Dimension::Dipole), WithinRel(3.33564095e-30, 1e-15));
    CHECK(to_si(5, "mm", Dimension::Length) == 5e-3);
    CHECK_THROWS_WITH(to_si(1, "nm", Dimension::Rate), ContainsSubstring("not a valid rate unit"));
    CHECK_THROWS_AS(to_si(1, "furlong", Dimension::Length), Error);
}

TEST_CASE("resonant fields satisfy each variant's frequency closure") {
    for (Variant v : {Variant::DoubleLambda, Variant::LadderLambda, Variant::VLambda}) {
        auto s = support::optical_scheme(v);
        s.validate();
        auto f = resonant_fields(s, 1.0, 1e6, 1.0, 0.0);
        CHECK_NOTHROW(check_frequency_closure(v, f));
        CHECK_THAT(f.frequency(3), WithinRel(s.field_transition_frequency(3), 1e-12));
        auto sg = closure_signs(v);
        CHECK_THAT(f.frequency(3), WithinRel(f.frequency(0) + sg.stokes * f.frequency(1) + sg.probe * f.frequency(2), 1e-15));
    }
    CHECK(closure_signs(Variant::DoubleLambda).stokes == -1);
    CHECK(closure_signs(Variant::DoubleLambda).probe == +1);
    CHECK(closure_signs(Variant::LadderLambda).probe == -1);
    CHECK(closure_signs(Variant::VLambda).stokes == +1);
}

TEST_CASE("closure violation names the identity") {
    auto s = support::optical_scheme(Variant::DoubleLambda);
    auto f = resonant_fields(s, 1.0, 1e6, 1.0, 0.0);
    f[3].frequency *= 1.001;
    CHECK_THROWS_WITH(check_frequency_closure(Variant::DoubleLambda, f), ContainsSubstring("ν₄ = ν₁ − ν₂ + ν₃"));
    auto l = support::optical_scheme(Variant::LadderLambda);
    auto g = resonant_fields(l, 1.0, 1e6, 1.0, 0.0);
    g[3].frequency += 1e9;
    CHECK_THROWS_WITH(check_frequency_closure(Variant::LadderLambda, g), ContainsSubstring("ν₄ = ν₁ − ν₂ − ν₃"));
}

TEST_CASE("scheme validation") {
    auto s = support::optical_scheme(Variant::DoubleLambda);
    CHECK_NOTHROW(s.validate());

    auto inverted = s;
    inverted.energy[index(Level::d)] = 0.5 * inverted.energy[index(Level::c)];  // d below c breaks field 3
    CHECK_THROWS_WITH(inverted.validate(), ContainsSubstring("field 3 transition d–c"));

    auto dephased = s;
    dephased.set_coherence_decay(Level::a, Level::b, 0.1 * s.decay_of(Level::a));
    CHECK_THROWS_WITH(dephased.validate(), ContainsSubstring("below (Γ_a + Γ_b)/2"));

    auto leaky = s;
    leaky.branching[0] = {0.0, 0.5, 0.0, 0.0};
    CHECK_THROWS_WITH(leaky.validate(), ContainsSubstring("must sum to 1"));

    auto no_dipole = s;
    no_dipole.dipole[2] = 0.0;
    CHECK_THROWS_AS(no_dipole.validate(), Error);

    MediumParams m;
    m.radiative_rate = 0.0;
    CHECK_THROWS_AS(m.validate(), Error);
}

TEST_CASE("coherence decay adds pure dephasing to the population average") {
    auto s = support::optical_scheme(Variant::DoubleLambda, 1e7, 2e3, 4e3);
    CHECK(s.coherence_decay(Level::c, Level::b) == 1e3);
    s.set_coherence_decay(Level::c, Level::b, 5e3);
    CHECK_THAT(s.coherence_decay(Level::c, Level::b), WithinRel(5e3, 1e-15));
    CHECK_THAT(s.coherence_decay(Level::b, Level::c), WithinRel(5e3, 1e-15));
    CHECK(s.coherence_decay(Level::d, Level::c) == 3e3);
}

TEST_CASE("frame frequencies follow fields 1 to 3") {
    for (Variant v : {Variant::DoubleLambda, Variant::LadderLambda, Variant::VLambda}) {
        auto s = support::optical_scheme(v);
        auto f = with_pump_detuning(s, resonant_fields(s, 1.0, 1e6, 1.0, 0.0), 1e5);
        auto theta = frame_frequencies(v, f);
        CHECK(theta[index(Level::b)] == 0.0);
        CHECK_THAT(theta[index(Level::a)], WithinRel(f.frequency(0), 1e-15));
        auto tr = coupled_transitions(v);
        for (int j = 0; j < 4; ++j)
            CHECK_THAT(theta[index(tr[j].upper)] - theta[index(tr[j].lower)], WithinRel(f.frequency(j), 1e-9));
    }
}

TEST_CASE("pump detuning re-closes the signal frequency") {
    auto s = support::optical_scheme(Variant::VLambda);
    auto f = resonant_fields(s, 1.0, 1e6, 1.0, 0.0);
    auto g = with_pump_detuning(s, f, -3e6);
    CHECK_THAT(g.frequency(0) - s.field_transition_frequency(0), WithinRel(-3e6, 1e-6));
    CHECK_NOTHROW(check_frequency_closure(Variant::VLambda, g));
}

TEST_CASE("variant names parse") {
    CHECK(parse_variant("double_lambda") == Variant::DoubleLambda);
    CHECK(parse_variant("LadderLambda") == Variant::LadderLambda);
    CHECK(parse_variant("v_lambda") == Variant::VLambda);
    CHECK_THROWS_WITH(parse_variant("lambda"), ContainsSubstring("expected double_lambda"));
}

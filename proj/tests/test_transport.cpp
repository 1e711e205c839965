#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "pemsim/parameters.hpp"
#include "pemsim/transport.hpp"

using namespace pemsim;

namespace {
const ParameterSet P = ParameterSet::eh31();
}

TEST_CASE("water activity") {
    CHECK(water_activity(12.0, 12.0, 0.0) == doctest::Approx(1.0));
    CHECK(water_activity(0.0, 10.0, 0.25) == doctest::Approx(0.5));
    CHECK(water_activity(0.8 * 12.79, 12.79, 0.1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(water_activity(1.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("equilibrium water content") {
    CHECK(equilibrium_water_content(1.0, 2.0) == doctest::Approx(9.2).epsilon(1e-9));
    CHECK(equilibrium_water_content(0.0, 2.0) == doctest::Approx(0.300).epsilon(1e-9));
    CHECK(equilibrium_water_content(2.0, 2.0) == doctest::Approx(16.6361165642).epsilon(1e-9));
    // continuity across the branch gate at a_w = 1
    CHECK(std::abs(equilibrium_water_content(1.0 + 1e-9, 2.0) - 9.2) < 1e-6);
    CHECK(std::abs(equilibrium_water_content(1.0 - 1e-9, 2.0) - 9.2) < 1e-6);
    // positive and continuous over the working range
    double prev = equilibrium_water_content(0.0, 2.0);
    for (double a = 0.01; a < 3.0; a += 0.01) {
        const double v = equilibrium_water_content(a, 2.0);
        CHECK(v > 0.0);
        CHECK(std::abs(v - prev) < 0.5);
        prev = v;
    }
}

TEST_CASE("membrane water diffusivity") {
    CHECK(membrane_water_diffusivity(2.5) == doctest::Approx(2.902577716e-10).epsilon(1e-6));
    CHECK(membrane_water_diffusivity(25.0) == doctest::Approx(8.2e-10).epsilon(1e-6));
    // strictly increasing, vanishing limit
    double prev = membrane_water_diffusivity(1e-6);
    CHECK(prev > 0.0);
    CHECK(prev < 1e-10);
    for (double lam = 0.5; lam <= 25.0; lam += 0.5) {
        const double v = membrane_water_diffusivity(lam);
        CHECK(v > prev);
        prev = v;
    }
    CHECK_THROWS_AS(membrane_water_diffusivity(0.0), std::invalid_argument);
}

TEST_CASE("ionomer volume fraction") {
    CHECK(ionomer_volume_fraction(0.0, 1.8e-5, 5.5556e-4) == doctest::Approx(0.0));
    CHECK(ionomer_volume_fraction(14.0, 1.8e-5, 1.1 / 1980.0)
          == doctest::Approx(0.3120528343).epsilon(1e-9));
    CHECK(ionomer_volume_fraction(1e12, 1.8e-5, 5.5556e-4) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("sorption rate") {
    const double Vw = 1.8e-5, Vm = 1.1 / 1980.0;
    const double abs_rate = sorption_rate(14.0, 303.0, SorptionDirection::absorption, 1e-5, Vw, Vm);
    const double des_rate = sorption_rate(14.0, 303.0, SorptionDirection::desorption, 1e-5, Vw, Vm);
    CHECK(abs_rate == doctest::Approx(0.3557402312).epsilon(1e-9));
    CHECK(des_rate == doctest::Approx(1.4323225096).epsilon(1e-9));
    CHECK(des_rate / abs_rate == doctest::Approx(4.59 / 1.14).epsilon(1e-12));
    // the ratio is independent of lambda and T
    for (double lam : {0.5, 3.0, 9.0, 22.0}) {
        for (double T : {293.0, 320.0, 353.0}) {
            const double a = sorption_rate(lam, T, SorptionDirection::absorption, 1e-5, Vw, Vm);
            const double d = sorption_rate(lam, T, SorptionDirection::desorption, 1e-5, Vw, Vm);
            CHECK(d / a == doctest::Approx(4.59 / 1.14).epsilon(1e-12));
        }
    }
    CHECK(sorption_rate(0.0, 303.0, SorptionDirection::absorption, 1e-5, Vw, Vm)
          == doctest::Approx(0.0));
}

TEST_CASE("intrinsic permeability") {
    auto porous = P.porous;
    const double k0 = intrinsic_permeability(0.701, porous);
    CHECK(k0 == doctest::Approx(1.0941743457e-12).epsilon(1e-9));

    // doubling the fiber radius quadruples K0
    auto porous2 = porous;
    porous2.r_f = 2.0 * porous.r_f;
    CHECK(intrinsic_permeability(0.701, porous2) == doctest::Approx(4.0 * k0).epsilon(1e-12));

    // compression acts through exp(beta1 * eps_c)
    auto porous3 = porous;
    porous3.eps_c = 0.0;
    CHECK(intrinsic_permeability(0.701, porous) / intrinsic_permeability(0.701, porous3)
          == doctest::Approx(std::exp(porous.beta1 * porous.eps_c)).epsilon(1e-12));

    // vanishes toward the percolation threshold
    CHECK(intrinsic_permeability(porous.eps_p + 1e-9, porous) < 1e-25);
    CHECK_THROWS_AS(intrinsic_permeability(porous.eps_p, porous), std::invalid_argument);
}

TEST_CASE("surface tension") {
    CHECK(surface_tension(347.15) == doctest::Approx(0.0637687907).epsilon(1e-6));
    CHECK(surface_tension(298.15) == doctest::Approx(0.0719760414).epsilon(1e-6));
    CHECK(surface_tension(647.15 - 1e-6) < 1e-8);
    CHECK(surface_tension(298.15) > surface_tension(347.15));
    CHECK_THROWS_AS(surface_tension(647.15), std::invalid_argument);
}

TEST_CASE("binary diffusivity") {
    CHECK(binary_diffusivity(Side::anode, 101325.0, 333.0) == doctest::Approx(1.644e-4));
    CHECK(binary_diffusivity(Side::cathode, 101325.0, 333.0) == doctest::Approx(3.242e-5));
    CHECK(binary_diffusivity(Side::anode, 2 * 101325.0, 333.0)
          == doctest::Approx(0.822e-4).epsilon(1e-12));
    CHECK_THROWS_AS(binary_diffusivity(Side::anode, 0.0, 333.0), std::invalid_argument);
}

TEST_CASE("effective diffusivity") {
    const auto& porous = P.porous;
    CHECK(effective_diffusivity(Side::anode, 1.0, 0.701, 101325.0, 333.0, porous)
          == doctest::Approx(0.0));
    const double d0 = effective_diffusivity(Side::anode, 0.0, 0.701, 101325.0, 333.0, porous);
    const double d5 = effective_diffusivity(Side::anode, 0.5, 0.701, 101325.0, 333.0, porous);
    CHECK(d0 / d5 == doctest::Approx(4.0).epsilon(1e-12));
    // never exceeds porosity times the open-space diffusivity
    for (double s : {0.0, 0.2, 0.7}) {
        for (double eps : {0.25, 0.4755, 0.701}) {
            const double deff = effective_diffusivity(Side::cathode, s, eps, 2e5, 347.15, porous);
            const double d = binary_diffusivity(Side::cathode, 2e5, 347.15);
            CHECK(deff > 0.0);
            CHECK(deff <= eps * d);
        }
    }
    CHECK_THROWS_AS(effective_diffusivity(Side::anode, 0.0, 0.05, 1e5, 333.0, porous),
                    std::invalid_argument);
}

TEST_CASE("convective mass transfer") {
    CHECK(sherwood_number(5e-4, 5e-4) == doctest::Approx(2.3787));
    CHECK(sherwood_number(4.5e-4, 5e-4) == doctest::Approx(2.2812731312).epsilon(1e-9));
    CHECK(convective_mass_transfer(Side::anode, 101325.0, 333.0, 4.5e-4, 5e-4)
          == doctest::Approx(0.7500826055).epsilon(1e-9));
    CHECK_THROWS_AS(sherwood_number(0.0, 5e-4), std::invalid_argument);
}

TEST_CASE("membrane permeation") {
    const double T_ref = P.kinetics.T_ref;
    CHECK(membrane_permeation(CrossoverGas::H2, 20.0, T_ref, 1.0, P)
          == doctest::Approx(1.8e-14).epsilon(1e-12));
    CHECK(membrane_permeation(CrossoverGas::O2, 20.0, T_ref, 1.0, P)
          == doctest::Approx(1.2e-14).epsilon(1e-12));
    CHECK(membrane_permeation(CrossoverGas::H2, 0.0, T_ref, 1.0, P)
          == doctest::Approx(0.29e-14).epsilon(1e-12));
    CHECK(membrane_permeation(CrossoverGas::H2, 5.0, T_ref, 0.0, P) == doctest::Approx(0.0));
    // documented discontinuity at lambda = 17.6; both sides finite and positive
    CHECK(membrane_permeation(CrossoverGas::O2, 17.6 - 1e-9, T_ref, 1.0, P) > 0.0);
    CHECK(membrane_permeation(CrossoverGas::O2, 17.6, T_ref, 1.0, P) > 0.0);
}

TEST_CASE("saturation pressure") {
    // boiling point sanity within 2 percent
    CHECK(saturation_pressure(373.15) == doctest::Approx(101325.0).epsilon(0.02));
    double prev = saturation_pressure(273.15);
    for (double T = 275.0; T <= 373.15; T += 2.0) {
        const double p = saturation_pressure(T);
        CHECK(p > prev);
        prev = p;
    }
    CHECK(saturation_concentration(347.15, 8.314)
          == doctest::Approx(saturation_pressure(347.15) / (8.314 * 347.15)).epsilon(1e-12));
    CHECK_THROWS_AS(saturation_pressure(150.0), std::invalid_argument);
    CHECK_THROWS_AS(saturation_pressure(650.0), std::invalid_argument);
}

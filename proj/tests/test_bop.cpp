#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "pemsim/bop.hpp"
#include "pemsim/transport.hpp"

using namespace pemsim;

namespace {
const ParameterSet P = ParameterSet::eh31();
}

TEST_CASE("mixture molar mass") {
    CHECK(mixture_molar_mass(GasRegion::asm_, 0.0, 2e5, 347.15, 0.0, P)
          == doctest::Approx(2e-3).epsilon(1e-12));
    CHECK(mixture_molar_mass(GasRegion::csm, 0.0, 2e5, 347.15, 0.2095, P)
          == doctest::Approx(0.028838).epsilon(1e-12));
    // pure vapor limit
    const double p_sat = saturation_pressure(347.15);
    CHECK(mixture_molar_mass(GasRegion::aem, 1.0, p_sat, 347.15, 0.0, P)
          == doctest::Approx(1.8e-2).epsilon(1e-12));
    CHECK_THROWS_AS(mixture_molar_mass(GasRegion::aem, 1.5, p_sat, 347.15, 0.0, P),
                    std::invalid_argument);
    CHECK_THROWS_AS(mixture_molar_mass(GasRegion::aem, 0.5, 0.0, 347.15, 0.0, P),
                    std::invalid_argument);
}

TEST_CASE("linear nozzle flow") {
    CHECK(linear_nozzle_flow(1e-5, 2e5, 2e5) == doctest::Approx(0.0));
    CHECK(linear_nozzle_flow(1e-5, 2e5 + 100.0, 2e5) == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(linear_nozzle_flow(1e-5, 2e5, 2e5 + 100.0) == doctest::Approx(-1e-3).epsilon(1e-12));
}

TEST_CASE("compressible orifice flow") {
    const double R = P.bop.R;
    CHECK(compressible_orifice_flow(0.05, 1.18e-3, 2e5, 2e5, 347.15, 0.028, 1.401, R)
          == doctest::Approx(0.0));
    CHECK(compressible_orifice_flow(0.05, 0.0, 2e5, 101325.0, 347.15, 0.028, 1.401, R)
          == doctest::Approx(0.0));
    CHECK(compressible_orifice_flow(0.05, 1.18e-3, 2e5, 101325.0, 347.15, 0.028, 1.401, R)
          == doctest::Approx(0.0251469568).epsilon(1e-9));
    CHECK_THROWS_AS(
        compressible_orifice_flow(0.05, 1.18e-3, 1e5, 1.5e5, 347.15, 0.028, 1.401, R),
        std::invalid_argument);
}

TEST_CASE("recirculation flow") {
    auto oc = OperatingConditions::eh31();
    CHECK(recirculation_flow(1.5e4, 0.0, 1.0, 2e5, 0.0, 2e-3, P, oc) == doctest::Approx(0.0));
    CHECK(recirculation_flow(0.0, 0.0, 1.2, 2e5, 0.0, 2e-3, P, oc) == doctest::Approx(0.0));
    CHECK(recirculation_flow(1.5e4, 0.0, 1.2, 2e5, 0.0, 2e-3, P, oc)
          == doctest::Approx(1.3214489299e-6).epsilon(1e-9));
    // dry-gas pressure must stay positive
    const double p_sat = saturation_pressure(oc.T_fc);
    CHECK_THROWS_AS(recirculation_flow(1.5e4, 0.0, 1.2, 0.9 * p_sat, 1.0, 2e-3, P, oc),
                    std::invalid_argument);
}

TEST_CASE("desired flows") {
    auto oc = OperatingConditions::eh31();
    auto p = P;
    p.ambient.Phi_ext = 0.0;

    auto d0 = desired_flows(0.0, 0.0, 0.0, 2e5, p, oc);
    CHECK(d0.W_cp_des == doctest::Approx(0.0));
    CHECK(d0.W_c_inj_des == doctest::Approx(0.0));

    auto d = desired_flows(1.5e4, 0.0, 0.0, 2e5, p, oc);
    CHECK(d.W_cp_des == doctest::Approx(4.5474873795e-4).epsilon(1e-9));

    // humidifier cannot dehumidify: demand clamps at zero
    auto p_wet = P;
    p_wet.ambient.Phi_ext = 1.0;
    auto oc_dry = oc;
    oc_dry.Phi_c_des = 0.0;
    auto dc = desired_flows(1.5e4, 0.0, 1e-3, 2e5, p_wet, oc_dry);
    CHECK(dc.W_c_inj_des == doctest::Approx(0.0));
}

TEST_CASE("actuator dynamics") {
    CHECK(actuator_dynamics(1.0, 1.0, 1.0) == doctest::Approx(0.0));
    CHECK(actuator_dynamics(0.0, 1.0, 1.0) == doctest::Approx(1.0));
    CHECK(actuator_dynamics(0.0, 1.0, 5.0) == doctest::Approx(0.2));
}

TEST_CASE("back pressure valve") {
    const double A_T = P.bop.A_T, Kp = P.bop.K_p, Kd = P.bop.K_d;
    CHECK(back_pressure_valve(A_T / 2, 2e5, 0.0, 2e5, Kp, Kd, A_T) == doctest::Approx(0.0));
    // below setpoint: valve closes to raise the pressure
    CHECK(back_pressure_valve(A_T / 2, 2e5 - 1e3, 0.0, 2e5, Kp, Kd, A_T) < 0.0);
    // clamped when pushing past the open stop
    CHECK(back_pressure_valve(A_T, 2e5 + 1e3, 0.0, 2e5, Kp, Kd, A_T) == doctest::Approx(0.0));
    // clamped when pushing past the closed stop
    CHECK(back_pressure_valve(0.0, 2e5 - 1e3, 0.0, 2e5, Kp, Kd, A_T) == doctest::Approx(0.0));
    // inward commands still act at the stops
    CHECK(back_pressure_valve(A_T, 2e5 - 1e3, 0.0, 2e5, Kp, Kd, A_T) < 0.0);
    // derivative damping enters with +Kd
    CHECK(back_pressure_valve(A_T / 2, 2e5, 1e3, 2e5, Kp, Kd, A_T)
          == doctest::Approx(Kd * 1e3).epsilon(1e-12));
}

#pragma once

#include "pemsim/parameters.hpp"

namespace pemsim {

enum class GasRegion { asm_, aem, csm, agc, cem, cgc, ext };

// All auxiliary-system flows for one RHS evaluation. W_* are mass flows in
// kg s^-1 except the manifold vapor exchange terms W_v_asm_in, W_v_aem_out,
// W_v_csm_in and W_v_cem_out which are molar (mol s^-1), matching the
// humidity balances they feed.
struct BopFlows {
    double W_asm_in = 0, W_asm_out = 0;
    double W_aem_in = 0, W_aem_out = 0;
    double W_are = 0;
    double W_v_asm_in = 0, W_v_aem_out = 0;
    double W_csm_in = 0, W_csm_out = 0;
    double W_cem_in = 0, W_cem_out = 0;
    double W_v_csm_in = 0, W_v_cem_out = 0;
    double W_cp_des = 0, W_c_inj_des = 0;
    double W_c_v_des = 0, W_v_hum_in = 0;
};

// Molar mass of a humid gas mixture (kg mol^-1). y_O2 is the dry-gas oxygen
// fraction and is only used for air-side regions.
double mixture_molar_mass(GasRegion region, double Phi, double P, double T, double y_O2,
                          const ParameterSet& params);

// Linearized nozzle: W = k (P_up - P_down), sign-symmetric.
double linear_nozzle_flow(double k, double P_up, double P_down);

// Subcritical compressible orifice outflow (kg s^-1). Errors when
// P_ext > P_up; reversed exhaust flow is not modeled.
double compressible_orifice_flow(double C_D, double A, double P_up, double P_ext,
                                 double T, double M, double gamma, double R);

// Anode recirculation pump mass flow (kg s^-1).
double recirculation_flow(double i_fc, double i_n, double S_a, double P_aem, double Phi_aem,
                          double M_aem, const ParameterSet& params,
                          const OperatingConditions& oc);

struct DesiredFlows {
    double W_cp_des = 0;
    double W_c_v_des = 0;
    double W_v_hum_in = 0;
    double W_c_inj_des = 0;
};

// Compressor / humidifier setpoints for the current demand. P_cp is the
// compressor outlet pressure (taken equal to P_csm).
DesiredFlows desired_flows(double i_fc, double i_n, double W_cp, double P_cp,
                           const ParameterSet& params, const OperatingConditions& oc);

// First-order actuator relaxation toward the desired flow.
double actuator_dynamics(double W, double W_des, double tau);

// PD-controlled back-pressure valve aperture rate, clamped at the travel
// limits when the raw command pushes outward. stop_band widens the clamp to
// a closed neighborhood of each stop so the integrator can rest there
// instead of chattering on the discontinuity.
double back_pressure_valve(double A_bp_c, double P_cgc, double dP_cgc_dt, double P_c_des,
                           double K_p, double K_d, double A_T, double stop_band = 0.0);

} // namespace pemsim

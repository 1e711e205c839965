#pragma once

#include "pemsim/parameters.hpp"

namespace pemsim {

// Everything that goes into one cell-voltage evaluation.
struct VoltageBreakdown {
    double U_eq = 0;     // equilibrium potential (V)
    double eta_c = 0;    // cathode overpotential (V)
    double R_mem = 0;    // proton resistances (ohm m^2)
    double R_ccl = 0;
    double R_p = 0;
    double i_n = 0;      // internal currents from crossover
    double i_co_H2 = 0;
    double i_co_O2 = 0;
    double f_drop = 0;   // flooding attenuation in (0,1)
    double s_lim = 0;
    double s_switch = 0;
    double U_cell = 0;   // net cell voltage (V)
    bool open_circuit = false; // i_fc + i_n vanished; eta_c skipped
};

struct LimitSaturations {
    double s_lim;
    double s_switch;
};

// Affine limit-saturation law; P_des in Pa, converted to bar internally.
// Errors when the resulting s_lim leaves (0,1).
LimitSaturations limit_saturations(double P_des, double a_slim, double b_slim, double a_switch);

// Smooth voltage-drop multiplier, 1 well below s_switch and 0 past s_lim.
double voltage_drop_function(double s_ccl, double s_lim, double s_switch);

struct CrossoverCurrents {
    double i_co_H2;
    double i_co_O2;
    double i_n;
};

CrossoverCurrents crossover_currents(double lambda_mem, double T_fc, double c_h2_acl,
                                     double c_o2_ccl, double kappa_co,
                                     const ParameterSet& params);

// Nernst-corrected equilibrium potential. Errors on non-positive reactant
// concentration (starvation).
double equilibrium_potential(double T_fc, double c_h2_acl, double c_o2_ccl,
                             const ParameterSet& params);

// Tafel overpotential scaled by 1/f_drop. Errors when i_fc + i_n <= 0 or the
// oxygen concentration is non-positive.
double overpotential(double i_fc, double i_n, double c_o2_ccl, double f_drop, double T_fc,
                     const ParameterSet& params);

struct ProtonResistance {
    double R_mem;
    double R_ccl;
    double R_p;
};

ProtonResistance proton_resistance(double lambda_mem, double lambda_ccl, double T_fc,
                                   double H_mem, double H_cl, double eps_mc, double tau);

// Composes the pieces above for a given internal state.
VoltageBreakdown cell_voltage(double i_fc, double lambda_mem, double lambda_ccl, double s_ccl,
                              double c_h2_acl, double c_o2_ccl, const ParameterSet& params,
                              const OperatingConditions& oc);

} // namespace pemsim

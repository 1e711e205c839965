#include "pemsim/voltage.hpp"

#include <cmath>
#include <sstream>

#include "pemsim/errors.hpp"
#include "pemsim/transport.hpp"

namespace pemsim {

LimitSaturations limit_saturations(double P_des, double a_slim, double b_slim, double a_switch) {
    const double p_bar = P_des * 1e-5;
    LimitSaturations ls{};
    ls.s_lim = a_slim * p_bar + b_slim;
    ls.s_switch = a_switch * ls.s_lim;
    if (!(ls.s_lim > 0.0 && ls.s_lim < 1.0)) {
        std::ostringstream os;
        os << "limit_saturations: s_lim = " << ls.s_lim << " outside (0,1) for P_des = "
           << p_bar << " bar";
        throw ModelError(os.str());
    }
    return ls;
}

double voltage_drop_function(double s_ccl, double s_lim, double s_switch) {
    if (!(s_switch < s_lim)) {
        throw ModelError("voltage_drop_function: requires s_switch < s_lim");
    }
    return 0.5 * (1.0 - std::tanh((4.0 * s_ccl - 2.0 * s_lim - 2.0 * s_switch)
                                  / (s_lim - s_switch)));
}

CrossoverCurrents crossover_currents(double lambda_mem, double T_fc, double c_h2_acl,
                                     double c_o2_ccl, double kappa_co,
                                     const ParameterSet& params) {
    const double k_h2 = membrane_permeation(CrossoverGas::H2, lambda_mem, T_fc, kappa_co, params);
    const double k_o2 = membrane_permeation(CrossoverGas::O2, lambda_mem, T_fc, kappa_co, params);
    const double rt = params.bop.R * T_fc;
    CrossoverCurrents c{};
    c.i_co_H2 = 2.0 * params.bop.F * k_h2 * rt * c_h2_acl;
    c.i_co_O2 = 4.0 * params.bop.F * k_o2 * rt * c_o2_ccl;
    c.i_n = c.i_co_H2 + c.i_co_O2;
    return c;
}

double equilibrium_potential(double T_fc, double c_h2_acl, double c_o2_ccl,
                             const ParameterSet& params) {
    if (!(c_h2_acl > 0)) {
        throw ModelError("hydrogen starvation: C_H2_acl <= 0 in the voltage evaluation");
    }
    if (!(c_o2_ccl > 0)) {
        throw ModelError("oxygen starvation: C_O2_ccl <= 0 in the voltage evaluation");
    }
    const auto& k = params.kinetics;
    const double rt = params.bop.R * T_fc;
    return k.E0 - 8.5e-4 * (T_fc - 298.15)
           + rt / (2.0 * params.bop.F)
                 * (std::log(rt * c_h2_acl / k.P_ref) + 0.5 * std::log(rt * c_o2_ccl / k.P_ref));
}

double overpotential(double i_fc, double i_n, double c_o2_ccl, double f_drop, double T_fc,
                     const ParameterSet& params) {
    if (!(i_fc + i_n > 0)) {
        throw ModelError("overpotential: i_fc + i_n must be > 0");
    }
    if (!(c_o2_ccl > 0)) {
        throw ModelError("oxygen starvation: C_O2_ccl <= 0 in the voltage evaluation");
    }
    const auto& k = params.kinetics;
    return 1.0 / f_drop * params.bop.R * T_fc / (k.alpha_c * params.bop.F)
           * std::log((i_fc + i_n) / k.i0_c_ref
                      * std::pow(k.C_O2_ref / c_o2_ccl, k.kappa_c));
}

namespace {

double ionomer_conductivity(double lambda, double T_fc) {
    const double arr = std::exp(1268.0 * (1.0 / 303.15 - 1.0 / T_fc));
    if (lambda >= 1.0) return (0.5139 * lambda - 0.326) * arr;
    return 0.1879 * arr;
}

} // namespace

ProtonResistance proton_resistance(double lambda_mem, double lambda_ccl, double T_fc,
                                   double H_mem, double H_cl, double eps_mc, double tau) {
    ProtonResistance r{};
    r.R_mem = H_mem / ionomer_conductivity(lambda_mem, T_fc);
    r.R_ccl = H_cl / (std::pow(eps_mc, tau) * ionomer_conductivity(lambda_ccl, T_fc));
    r.R_p = r.R_mem + r.R_ccl;
    return r;
}

VoltageBreakdown cell_voltage(double i_fc, double lambda_mem, double lambda_ccl, double s_ccl,
                              double c_h2_acl, double c_o2_ccl, const ParameterSet& params,
                              const OperatingConditions& oc) {
    const auto& k = params.kinetics;
    VoltageBreakdown v{};
    const auto ls = limit_saturations(oc.P_c_des, k.a_slim, k.b_slim, k.a_switch);
    v.s_lim = ls.s_lim;
    v.s_switch = ls.s_switch;
    v.f_drop = voltage_drop_function(s_ccl, ls.s_lim, ls.s_switch);

    const auto co = crossover_currents(lambda_mem, oc.T_fc, c_h2_acl, c_o2_ccl, k.kappa_co, params);
    v.i_co_H2 = co.i_co_H2;
    v.i_co_O2 = co.i_co_O2;
    v.i_n = co.i_n;

    v.U_eq = equilibrium_potential(oc.T_fc, c_h2_acl, c_o2_ccl, params);

    if (i_fc + v.i_n > 0) {
        v.eta_c = overpotential(i_fc, v.i_n, c_o2_ccl, v.f_drop, oc.T_fc, params);
    } else {
        // Exact open circuit without crossover: the Tafel log diverges, so
        // report the equilibrium potential and flag it.
        v.eta_c = 0.0;
        v.open_circuit = true;
    }

    const auto rp = proton_resistance(lambda_mem, lambda_ccl, oc.T_fc, params.geometry.H_mem,
                                      params.geometry.H_cl, params.membrane.eps_mc,
                                      params.membrane.tau);
    v.R_mem = rp.R_mem;
    v.R_ccl = rp.R_ccl;
    v.R_p = rp.R_p;

    v.U_cell = v.U_eq - v.eta_c - i_fc * (v.R_p + k.R_e);
    return v;
}

} // namespace pemsim

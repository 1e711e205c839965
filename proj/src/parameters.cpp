#include "pemsim/parameters.hpp"

#include <numbers>
#include <sstream>

#include "pemsim/errors.hpp"

namespace pemsim {

ParameterSet ParameterSet::eh31() {
    ParameterSet p{};

    p.geometry.A_act = 8.5e-3;
    p.geometry.H_mem = 2e-5;
    p.geometry.H_cl = 1e-5;
    p.geometry.H_gdl = 2e-4;
    p.geometry.H_gc = 5e-4;
    p.geometry.W_gc = 4.5e-4;
    p.geometry.L_gc = 9.67;
    p.geometry.n_cell = 5;
    p.geometry.n_gdl = 0;

    p.membrane.rho_mem = 1980.0;
    p.membrane.M_eq = 1.1;
    p.membrane.eps_mc = 0.399;
    p.membrane.tau = 1.02;

    p.porous.eps_gdl = 0.701;
    p.porous.eps_cl = 0.25;
    p.porous.eps_c = 0.271;
    // eps_p..r_f are not tabulated for the EH-31; these are GDL-literature
    // magnitudes and should be treated as tunable.
    p.porous.eps_p = 0.11;
    p.porous.alpha = 0.785;
    p.porous.beta1 = -2.51;
    p.porous.beta2 = -2.0;
    p.porous.r_f = 4e-6;
    p.porous.theta_c_gdl = 2.0 * std::numbers::pi / 3.0; // 120 deg
    p.porous.theta_c_cl = 1.66;                          // ~95 deg
    p.porous.e = 5.0;

    p.kinetics.i0_c_ref = 2.79;
    p.kinetics.kappa_c = 1.61;
    p.kinetics.kappa_co = 27.2;
    p.kinetics.alpha_c = 0.5;
    p.kinetics.E0 = 1.229;
    p.kinetics.P_ref = 1e5;
    p.kinetics.C_O2_ref = 3.39;
    p.kinetics.E_act = 73.2e3;
    p.kinetics.E_act_H2_v = 21e3;
    p.kinetics.E_act_H2_l = 21e3;
    p.kinetics.E_act_O2_v = 21e3;
    p.kinetics.E_act_O2_l = 21e3;
    p.kinetics.T_ref = 303.15;
    p.kinetics.a_slim = 0.0555;
    p.kinetics.b_slim = 0.1051;
    p.kinetics.a_switch = 0.63654;
    p.kinetics.R_e = 5.70e-7;

    p.water.gamma_cond = 5e3;
    p.water.gamma_evap = 1e-4;
    p.water.K_shape = 2.0;
    p.water.rho_H2O = 1000.0;
    p.water.nu_l = 3.65e-7; // liquid water near 80 C
    p.water.V_w = 1.8e-2 / 1000.0;
    p.water.V_mem = 1.1 / 1980.0;

    p.bop.tau_cp = 1.0;
    p.bop.tau_hum = 5.0;
    p.bop.K_p = 5e-8;
    p.bop.K_d = 1e-8;
    p.bop.C_D = 0.05;
    p.bop.k_sm_in = 1.0e-5;
    p.bop.k_sm_out = 8.0e-6;
    p.bop.k_em_in = 8.0e-6; // not tabulated; symmetric with k_sm_out
    p.bop.V_sm = 7.0e-3;
    p.bop.V_em = 2.4e-3;
    p.bop.A_T = 1.18e-3;
    p.bop.k_purge = 0.0;
    p.bop.gamma_H2 = 1.404;
    p.bop.gamma_a = 1.401;
    p.bop.M_H2 = 2e-3;
    p.bop.M_H2O = 1.8e-2;
    p.bop.M_O2 = 3.2e-2;
    p.bop.M_N2 = 2.8e-2;
    p.bop.F = 96485.0;
    p.bop.R = 8.314;

    p.ambient.T_ext = 298.0;
    p.ambient.P_ext = 101325.0;
    p.ambient.Phi_ext = 0.4;
    p.ambient.y_O2_ext = 0.2095;

    return p;
}

OperatingConditions OperatingConditions::eh31(double P_des_bar) {
    OperatingConditions oc{};
    oc.T_fc = 347.15;
    oc.P_a_des = P_des_bar * 1e5;
    oc.P_c_des = P_des_bar * 1e5;
    oc.S_a = 1.2;
    oc.S_c = 2.0;
    oc.Phi_a_des = 0.4;
    oc.Phi_c_des = 0.6;
    return oc;
}

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid parameter set: ") + what);
}

} // namespace

void ParameterSet::validate() const {
    const auto& g = geometry;
    require(g.A_act > 0, "A_act must be > 0");
    require(g.H_mem > 0 && g.H_cl > 0 && g.H_gdl > 0 && g.H_gc > 0, "thicknesses must be > 0");
    require(g.W_gc > 0 && g.L_gc > 0, "channel dimensions must be > 0");
    require(g.n_cell >= 1, "n_cell must be >= 1");
    require(g.n_gdl == 0 || g.n_gdl >= 2, "n_gdl override must be >= 2");

    require(membrane.rho_mem > 0 && membrane.M_eq > 0, "membrane density/molar mass must be > 0");
    require(membrane.eps_mc > 0 && membrane.eps_mc < 1, "eps_mc must be in (0,1)");
    require(membrane.tau > 0, "tau must be > 0");

    const auto& po = porous;
    require(po.eps_gdl > 0 && po.eps_gdl < 1, "eps_gdl must be in (0,1)");
    require(po.eps_cl > 0 && po.eps_cl < 1, "eps_cl must be in (0,1)");
    require(po.eps_c >= 0 && po.eps_c < 1, "eps_c must be in [0,1)");
    require(po.eps_p >= 0 && po.eps_p < 1, "eps_p must be in [0,1)");
    require(po.eps_gdl > po.eps_p, "eps_gdl must exceed the percolation threshold eps_p");
    require(po.eps_cl > po.eps_p, "eps_cl must exceed the percolation threshold eps_p");
    require(po.r_f > 0, "r_f must be > 0");
    require(po.e > 0, "capillary exponent must be > 0");

    require(kinetics.i0_c_ref > 0, "i0_c_ref must be > 0");
    require(kinetics.alpha_c > 0, "alpha_c must be > 0");
    require(kinetics.P_ref > 0 && kinetics.C_O2_ref > 0, "reference state must be > 0");
    require(kinetics.T_ref > 0, "T_ref must be > 0");
    require(kinetics.a_switch > 0 && kinetics.a_switch < 1, "a_switch must be in (0,1)");
    require(kinetics.R_e >= 0, "R_e must be >= 0");

    require(water.gamma_cond >= 0 && water.gamma_evap >= 0, "phase change rates must be >= 0");
    require(water.rho_H2O > 0 && water.nu_l > 0, "water properties must be > 0");
    require(water.V_w > 0 && water.V_mem > 0, "molar volumes must be > 0");

    require(bop.tau_cp > 0 && bop.tau_hum > 0, "actuator time constants must be > 0");
    require(bop.K_p >= 0 && bop.K_d >= 0, "valve controller constants must be >= 0");
    require(bop.C_D >= 0, "C_D must be >= 0");
    require(bop.k_sm_in >= 0 && bop.k_sm_out >= 0 && bop.k_em_in >= 0, "nozzle coefficients must be >= 0");
    require(bop.V_sm > 0 && bop.V_em > 0, "manifold volumes must be > 0");
    require(bop.A_T > 0, "A_T must be > 0");
    require(bop.k_purge >= 0, "k_purge must be >= 0");
    require(bop.gamma_H2 > 1 && bop.gamma_a > 1, "heat capacity ratios must be > 1");
    require(bop.M_H2 > 0 && bop.M_H2O > 0 && bop.M_O2 > 0 && bop.M_N2 > 0, "molar masses must be > 0");
    require(bop.F > 0 && bop.R > 0, "physical constants must be > 0");

    require(ambient.T_ext > 0 && ambient.P_ext > 0, "ambient state must be > 0");
    require(ambient.Phi_ext >= 0 && ambient.Phi_ext <= 1, "Phi_ext must be in [0,1]");
    require(ambient.y_O2_ext > 0 && ambient.y_O2_ext < 1, "y_O2_ext must be in (0,1)");
}

void OperatingConditions::validate(const ParameterSet& params) const {
    auto fail = [](const std::string& what) {
        throw ConfigError("invalid operating conditions: " + what);
    };
    if (!(T_fc > 273.15)) fail("T_fc must be above 273.15 K");
    if (!(P_a_des >= params.ambient.P_ext) || !(P_c_des >= params.ambient.P_ext)) {
        std::ostringstream os;
        os << "desired pressures (" << P_a_des << ", " << P_c_des
           << " Pa) must be at least ambient (" << params.ambient.P_ext << " Pa)";
        fail(os.str());
    }
    if (!(S_a >= 1.0) || !(S_c >= 1.0)) fail("stoichiometries must be >= 1");
    if (Phi_a_des < 0 || Phi_a_des > 1 || Phi_c_des < 0 || Phi_c_des > 1) {
        fail("desired humidities must be in [0,1]");
    }
}

} // namespace pemsim

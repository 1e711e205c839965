#include "pemsim/bop.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "pemsim/transport.hpp"

namespace pemsim {

double mixture_molar_mass(GasRegion region, double Phi, double P, double T, double y_O2,
                          const ParameterSet& params) {
    if (!(P > 0)) throw std::invalid_argument("mixture_molar_mass: P must be > 0");
    const double p_v = Phi * saturation_pressure(T);
    if (p_v > P * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "mixture_molar_mass: vapor partial pressure " << p_v
           << " Pa exceeds total pressure " << P << " Pa";
        throw std::invalid_argument(os.str());
    }
    const double x_v = p_v / P;
    const double x_dry = 1.0 - x_v;
    const auto& c = params.bop;
    switch (region) {
        case GasRegion::asm_:
        case GasRegion::aem:
        case GasRegion::agc:
            return x_v * c.M_H2O + x_dry * c.M_H2;
        case GasRegion::csm:
        case GasRegion::cem:
        case GasRegion::cgc:
        case GasRegion::ext:
            return x_v * c.M_H2O + x_dry * (y_O2 * c.M_O2 + (1.0 - y_O2) * c.M_N2);
    }
    return 0.0;
}

double linear_nozzle_flow(double k, double P_up, double P_down) {
    return k * (P_up - P_down);
}

double compressible_orifice_flow(double C_D, double A, double P_up, double P_ext,
                                 double T, double M, double gamma, double R) {
    if (!(P_ext > 0) || !(P_ext <= P_up)) {
        std::ostringstream os;
        os << "compressible_orifice_flow: requires 0 < P_ext <= P_up, got P_ext = "
           << P_ext << " Pa, P_up = " << P_up << " Pa";
        throw std::invalid_argument(os.str());
    }
    if (A == 0.0) return 0.0;
    const double r = P_ext / P_up;
    const double bracket = 1.0 - std::pow(r, (gamma - 1.0) / gamma);
    return C_D * A * P_up / std::sqrt(R * T) * std::pow(r, 1.0 / gamma)
           * std::sqrt(M * 2.0 * gamma / (gamma - 1.0) * bracket);
}

double recirculation_flow(double i_fc, double i_n, double S_a, double P_aem, double Phi_aem,
                          double M_aem, const ParameterSet& params,
                          const OperatingConditions& oc) {
    const double p_dry = P_aem - Phi_aem * saturation_pressure(oc.T_fc);
    if (!(p_dry > 0)) {
        throw std::invalid_argument("recirculation_flow: dry-gas pressure in the exhaust "
                                    "manifold must be > 0");
    }
    return params.geometry.n_cell * M_aem * P_aem / p_dry
           * (S_a - 1.0) * (i_fc + i_n) * params.geometry.A_act / (2.0 * params.bop.F);
}

DesiredFlows desired_flows(double i_fc, double i_n, double W_cp, double P_cp,
                           const ParameterSet& params, const OperatingConditions& oc) {
    const auto& amb = params.ambient;
    const double p_sat_ext = saturation_pressure(amb.T_ext);
    const double M_ext = mixture_molar_mass(GasRegion::ext, amb.Phi_ext, amb.P_ext,
                                            amb.T_ext, amb.y_O2_ext, params);
    DesiredFlows d{};
    d.W_cp_des = params.geometry.n_cell * M_ext
                 * amb.P_ext / (amb.P_ext - amb.Phi_ext * p_sat_ext) / amb.y_O2_ext
                 * oc.S_c * (i_fc + i_n) * params.geometry.A_act / (4.0 * params.bop.F);
    d.W_c_v_des = params.bop.M_H2O * oc.Phi_c_des * saturation_pressure(oc.T_fc) / P_cp
                  * W_cp / M_ext;
    d.W_v_hum_in = params.bop.M_H2O * amb.Phi_ext * p_sat_ext / amb.P_ext * W_cp / M_ext;
    // The humidifier can only inject water.
    d.W_c_inj_des = std::max(0.0, d.W_c_v_des - d.W_v_hum_in);
    return d;
}

double actuator_dynamics(double W, double W_des, double tau) {
    return (W_des - W) / tau;
}

double back_pressure_valve(double A_bp_c, double P_cgc, double dP_cgc_dt, double P_c_des,
                           double K_p, double K_d, double A_T, double stop_band) {
    const double raw = -K_p * (P_c_des - P_cgc) + K_d * dP_cgc_dt;
    if (A_bp_c >= A_T - stop_band && raw > 0) return 0.0;
    if (A_bp_c <= stop_band && raw < 0) return 0.0;
    return raw;
}

} // namespace pemsim

#include "pemsim/mea.hpp"

#include <algorithm>
#include <cmath>

namespace pemsim {

double dissolved_water_flux(double lambda_near, double lambda_far, double lambda_interface,
                            double i_fc, double F, double rho_mem, double M_eq,
                            double H_mem, double H_cl) {
    const double drag = 2.5 / 22.0 * i_fc / F * lambda_interface;
    const double lam = std::max(lambda_interface, 1e-9);
    const double diffusion = 2.0 * rho_mem / M_eq * membrane_water_diffusivity(lam)
                             * (lambda_far - lambda_near) / (H_mem + H_cl);
    return drag - diffusion;
}

double sorption_source(double C_v, double s, double lambda, double T_fc,
                       const ParameterSet& params) {
    const double c_sat = saturation_concentration(T_fc, params.bop.R);
    const double a_w = water_activity(std::max(C_v, 0.0), c_sat, std::max(s, 0.0));
    const double lambda_eq = equilibrium_water_content(a_w, params.water.K_shape);
    const auto direction = (lambda_eq > lambda) ? SorptionDirection::absorption
                                                : SorptionDirection::desorption;
    const double gamma = sorption_rate(std::max(lambda, 0.0), T_fc, direction,
                                       params.geometry.H_cl, params.water.V_w,
                                       params.water.V_mem);
    return gamma * params.membrane.rho_mem / params.membrane.M_eq * (lambda_eq - lambda);
}

ReactionCrossoverSources reaction_and_crossover_sources(double i_fc, double c_h2_acl,
                                                        double c_o2_ccl, double lambda_mem,
                                                        double T_fc, const ParameterSet& params) {
    const double lam = std::max(lambda_mem, 0.0);
    const double k_h2 = membrane_permeation(CrossoverGas::H2, lam, T_fc,
                                            params.kinetics.kappa_co, params);
    const double k_o2 = membrane_permeation(CrossoverGas::O2, lam, T_fc,
                                            params.kinetics.kappa_co, params);
    const double F = params.bop.F;
    const double H_cl = params.geometry.H_cl;
    const double H_mem = params.geometry.H_mem;
    const double rt_over_hh = params.bop.R * T_fc / (H_cl * H_mem);

    ReactionCrossoverSources out{};
    out.k_h2 = k_h2;
    out.k_o2 = k_o2;
    out.s_p_acl = 2.0 * k_o2 * rt_over_hh * c_o2_ccl;
    out.s_p_ccl = i_fc / (2.0 * F * H_cl) + k_h2 * rt_over_hh * c_h2_acl;
    out.s_h2_acl = -i_fc / (2.0 * F * H_cl) - rt_over_hh * (k_h2 * c_h2_acl + 2.0 * k_o2 * c_o2_ccl);
    out.s_o2_ccl = -i_fc / (4.0 * F * H_cl) - rt_over_hh * (k_o2 * c_o2_ccl + 0.5 * k_h2 * c_h2_acl);
    return out;
}

CapillaryInterface make_capillary_interface(double eps, double theta_c, double T_fc,
                                            const ParameterSet& params) {
    const double k0 = intrinsic_permeability(eps, params.porous);
    CapillaryInterface iface{};
    iface.prefactor = surface_tension(T_fc) * std::cos(theta_c) * std::sqrt(eps * k0)
                      / params.water.nu_l;
    iface.e = params.porous.e;
    return iface;
}

double capillary_flow(double s_left, double s_right, const CapillaryInterface& iface,
                      double spacing, double geometric_factor) {
    const double s_bar = 0.5 * (s_left + s_right);
    if (s_bar <= 0.0 || s_left == s_right) return 0.0;
    const double leverett = 1.417 - 4.24 * s_bar + 3.789 * s_bar * s_bar;
    const double s_pow = std::exp(iface.e * std::log(s_bar));
    return geometric_factor * iface.prefactor * s_pow * leverett
           * (s_right - s_left) / spacing;
}

double phase_change_rate(double C_v, double s, double eps, double T_fc, double x_v,
                         const ParameterSet& params) {
    return phase_change_rate(C_v, s, eps, T_fc, x_v,
                             saturation_concentration(T_fc, params.bop.R), params);
}

double phase_change_rate(double C_v, double s, double eps, double T_fc, double x_v,
                         double c_v_sat, const ParameterSet& params) {
    if (C_v > c_v_sat) {
        return params.water.gamma_cond * eps * (1.0 - s) * x_v * (C_v - c_v_sat);
    }
    return -params.water.gamma_evap * eps * s * params.water.rho_H2O / params.bop.M_H2O
           * params.bop.R * T_fc * (c_v_sat - C_v);
}

double gas_diffusion_flux(double C_left, double C_right, double D_eff, double spacing,
                          double geometric_factor) {
    return -geometric_factor * D_eff * (C_right - C_left) / spacing;
}

double convective_boundary_flux(double C_upstream, double C_downstream, double h) {
    return h * (C_upstream - C_downstream);
}

} // namespace pemsim

#pragma once

#include "pemsim/parameters.hpp"
#include "pemsim/transport.hpp"

namespace pemsim {

// Flux and source primitives for the in-cell balances. Quantities evaluated
// at an interface use the arithmetic mean of the two adjacent node values.

// Dissolved water flux through a membrane/CL interface (mol m^-2 s^-1),
// positive toward the cathode: electro-osmotic drag plus back-diffusion.
double dissolved_water_flux(double lambda_near, double lambda_far, double lambda_interface,
                            double i_fc, double F, double rho_mem, double M_eq,
                            double H_mem, double H_cl);

// Sorption source between CL pore vapor and the ionomer (mol m^-3 s^-1);
// absorbing when lambda_eq exceeds lambda, desorbing otherwise.
double sorption_source(double C_v, double s, double lambda, double T_fc,
                       const ParameterSet& params);

struct ReactionCrossoverSources {
    double s_p_acl;   // dissolved water production in the ACL (mol m^-3 s^-1)
    double s_p_ccl;   // dissolved water production in the CCL
    double s_h2_acl;  // hydrogen consumption in the ACL
    double s_o2_ccl;  // oxygen consumption in the CCL
    double k_h2;      // permeation coefficients used (mol m^-1 s^-1 Pa^-1)
    double k_o2;
};

ReactionCrossoverSources reaction_and_crossover_sources(double i_fc, double c_h2_acl,
                                                        double c_o2_ccl, double lambda_mem,
                                                        double T_fc, const ParameterSet& params);

// Pre-reduced interface properties for capillary flow; prefactor is
// sigma * cos(theta) * sqrt(eps * K0) / nu_l so the flux is
// prefactor * s^e * (1.417 - 4.24 s + 3.789 s^2) * ds/dx  (kg m^-2 s^-1).
struct CapillaryInterface {
    double prefactor;
    double e;
};

CapillaryInterface make_capillary_interface(double eps, double theta_c, double T_fc,
                                            const ParameterSet& params);

double capillary_flow(double s_left, double s_right, const CapillaryInterface& iface,
                      double spacing, double geometric_factor = 1.0);

// Condensation (>0) / evaporation (<0) rate at a node (mol m^-3 s^-1).
double phase_change_rate(double C_v, double s, double eps, double T_fc, double x_v,
                         const ParameterSet& params);

// Variant with a precomputed saturation concentration for hot loops.
double phase_change_rate(double C_v, double s, double eps, double T_fc, double x_v,
                         double c_v_sat, const ParameterSet& params);

// Fickian diffusion between two nodes (mol m^-2 s^-1), positive left->right.
double gas_diffusion_flux(double C_left, double C_right, double D_eff, double spacing,
                          double geometric_factor = 1.0);

// Convective exchange at a GC/GDL interface (mol m^-2 s^-1).
double convective_boundary_flux(double C_upstream, double C_downstream, double h);

} // namespace pemsim

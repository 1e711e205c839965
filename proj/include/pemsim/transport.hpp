#pragma once

#include "pemsim/parameters.hpp"

namespace pemsim {

enum class Side { anode, cathode };
enum class SorptionDirection { absorption, desorption };
enum class CrossoverGas { H2, O2 };

// Water activity in the CL pores: a_w = C_v/C_v_sat + 2s.
double water_activity(double C_v, double C_v_sat, double s);

// Equilibrium water content of the ionomer, smooth across a_w = 1 where it
// equals 9.2.
double equilibrium_water_content(double a_w, double K_shape);

// Diffusion coefficient of dissolved water in the membrane (m^2 s^-1).
double membrane_water_diffusivity(double lambda);

// Water volume fraction of the membrane, in [0,1).
double ionomer_volume_fraction(double lambda, double V_w, double V_mem);

// Sorption rate between CL pores and the ionomer (s^-1). The desorption rate
// is the absorption rate scaled by 4.59/1.14.
double sorption_rate(double lambda, double T_fc, SorptionDirection direction,
                     double H_cl, double V_w, double V_mem);

// Intrinsic permeability of a porous layer (m^2). eps must exceed the
// percolation threshold eps_p.
double intrinsic_permeability(double eps, const ParameterSet::Porous& porous);

// Surface tension of liquid water (N m^-1), valid below the critical point.
double surface_tension(double T_fc);

// Binary diffusivity of vapor in H2 (anode) or air (cathode), m^2 s^-1.
double binary_diffusivity(Side side, double P, double T_fc);

// Effective diffusivity in a porous layer: structure and saturation corrected.
double effective_diffusivity(Side side, double s, double eps, double P, double T_fc,
                             const ParameterSet::Porous& porous);

// Sherwood number for the GC/GDL interface, from the channel aspect ratio.
double sherwood_number(double W_gc, double H_gc);

// Convective mass transfer coefficient h = Sh * D / H_gc (m s^-1).
double convective_mass_transfer(Side side, double P, double T_fc, double W_gc, double H_gc);

// Membrane permeation coefficient for H2 or O2 (mol m^-1 s^-1 Pa^-1),
// piecewise at lambda = 17.6.
double membrane_permeation(CrossoverGas gas, double lambda, double T_fc, double kappa_co,
                           const ParameterSet& params);

// Saturation pressure of water vapor (Pa). Hard error outside [200, 600] K.
double saturation_pressure(double T);

// Saturation vapor concentration P_sat/(R*T) (mol m^-3).
double saturation_concentration(double T, double R);

} // namespace pemsim

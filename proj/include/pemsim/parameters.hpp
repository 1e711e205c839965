#pragma once

#include <cmath>

namespace pemsim {

// Full parameter bundle for one cell plus its auxiliary system. Grouped the
// same way as the configuration file sections; every field is addressable by
// its symbol name through the config layer. Immutable by convention once a
// simulation has been constructed from it.
struct ParameterSet {
    struct Geometry {
        double A_act;   // active area (m^2)
        double H_mem;   // membrane thickness (m)
        double H_cl;    // catalyst layer thickness (m)
        double H_gdl;   // gas diffusion layer thickness (m)
        double H_gc;    // gas channel depth (m)
        double W_gc;    // gas channel width (m)
        double L_gc;    // cumulated gas channel length (m)
        int n_cell;     // cells in the stack
        int n_gdl;      // nodes per GDL; 0 = derive from thicknesses
    };

    struct Membrane {
        double rho_mem; // dry membrane density (kg m^-3)
        double M_eq;    // equivalent molar mass of ionomer (kg mol^-1)
        double eps_mc;  // ionomer volume fraction in the CLs
        double tau;     // pore structure coefficient
    };

    struct Porous {
        double eps_gdl;     // GDL porosity
        double eps_cl;      // CL porosity
        double eps_c;       // GDL compression ratio
        double eps_p;       // percolation threshold porosity
        double alpha;       // permeability / diffusivity structure exponent
        double beta1;       // compression exponent in K0
        double beta2;       // compression exponent in D_eff
        double r_f;         // carbon fiber radius (m)
        double theta_c_gdl; // GDL contact angle (rad)
        double theta_c_cl;  // CL contact angle (rad)
        double e;           // capillary exponent
    };

    struct Kinetics {
        double i0_c_ref;  // referenced cathode exchange current density (A m^-2)
        double kappa_c;   // overpotential correction exponent
        double kappa_co;  // crossover correction coefficient
        double alpha_c;   // cathode transfer coefficient
        double E0;        // standard-state reversible voltage (V)
        double P_ref;     // reference pressure (Pa)
        double C_O2_ref;  // reference O2 concentration (mol m^-3)
        double E_act;     // cathode activation energy (J mol^-1)
        double E_act_H2_v; // permeation activation energies (J mol^-1)
        double E_act_H2_l;
        double E_act_O2_v;
        double E_act_O2_l;
        double T_ref;     // reference temperature for permeation (K)
        double a_slim;    // limit-saturation slope (bar^-1)
        double b_slim;    // limit-saturation intercept
        double a_switch;  // onset fraction of s_lim
        double R_e;       // electron conduction resistance (ohm m^2)
    };

    struct Water {
        double gamma_cond; // condensation rate constant (s^-1)
        double gamma_evap; // evaporation rate constant (Pa^-1 s^-1)
        double K_shape;    // lambda_eq smoothing factor
        double rho_H2O;    // liquid water density (kg m^-3)
        double nu_l;       // liquid water kinematic viscosity (m^2 s^-1)
        double V_w;        // molar volume of water (m^3 mol^-1)
        double V_mem;      // molar volume of dry membrane (m^3 mol^-1)
    };

    struct Bop {
        double tau_cp;   // compressor time constant (s)
        double tau_hum;  // humidifier time constant (s)
        double K_p;      // valve controller proportional constant (m^2 s^-1 Pa^-1)
        double K_d;      // valve controller derivative constant (m^2 Pa^-1)
        double C_D;      // throttle discharge coefficient
        double k_sm_in;  // nozzle coefficients (kg Pa^-1 s^-1)
        double k_sm_out;
        double k_em_in;
        double V_sm;     // supply manifold volume (m^3)
        double V_em;     // exhaust manifold volume (m^3)
        double A_T;      // exhaust throttle area (m^2)
        double k_purge;  // anode purge gain (0 = purge disabled)
        double gamma_H2; // heat capacity ratios
        double gamma_a;
        double M_H2;     // molar masses (kg mol^-1)
        double M_H2O;
        double M_O2;
        double M_N2;
        double F;        // Faraday constant (C mol^-1)
        double R;        // universal gas constant (J mol^-1 K^-1)
    };

    struct Ambient {
        double T_ext;    // outside temperature (K)
        double P_ext;    // outside pressure (Pa)
        double Phi_ext;  // outside relative humidity
        double y_O2_ext; // O2 molar fraction in dry air
    };

    Geometry geometry;
    Membrane membrane;
    Porous porous;
    Kinetics kinetics;
    Water water;
    Bop bop;
    Ambient ambient;

    // Defaults for the 1 kW EH-31 stack its tables describe.
    static ParameterSet eh31();

    // Throws ConfigError when an invariant is violated.
    void validate() const;
};

// Operator setpoints held constant during one simulation.
struct OperatingConditions {
    double T_fc;      // cell temperature (K)
    double P_a_des;   // desired anode pressure (Pa)
    double P_c_des;   // desired cathode pressure (Pa)
    double S_a;       // anode stoichiometry
    double S_c;       // cathode stoichiometry
    double Phi_a_des; // desired anode inlet humidity
    double Phi_c_des; // desired cathode inlet humidity

    static OperatingConditions eh31(double P_des_bar = 2.0);

    void validate(const ParameterSet& params) const;
};

} // namespace pemsim

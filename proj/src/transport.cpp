#include "pemsim/transport.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pemsim {

double water_activity(double C_v, double C_v_sat, double s) {
    if (!(C_v_sat > 0)) throw std::invalid_argument("water_activity: C_v_sat must be > 0");
    return C_v / C_v_sat + 2.0 * s;
}

double equilibrium_water_content(double a_w, double K_shape) {
    const double gate = std::tanh(100.0 * (a_w - 1.0));
    const double poly = 0.300 + 10.8 * a_w - 16.0 * a_w * a_w + 14.1 * a_w * a_w * a_w;
    const double smooth = 9.2 + 8.6 * (1.0 - std::exp(-K_shape * (a_w - 1.0)));
    return 0.5 * poly * (1.0 - gate) + 0.5 * smooth * (1.0 + gate);
}

double membrane_water_diffusivity(double lambda) {
    if (!(lambda > 0)) throw std::invalid_argument("membrane_water_diffusivity: lambda must be > 0");
    return 4.1e-10 * std::pow(lambda / 25.0, 0.15) * (1.0 + std::tanh((lambda - 2.5) / 1.4));
}

double ionomer_volume_fraction(double lambda, double V_w, double V_mem) {
    return lambda * V_w / (V_mem + lambda * V_w);
}

double sorption_rate(double lambda, double T_fc, SorptionDirection direction,
                     double H_cl, double V_w, double V_mem) {
    const double base = (direction == SorptionDirection::absorption) ? 1.14e-5 : 4.59e-5;
    const double f_v = ionomer_volume_fraction(lambda, V_w, V_mem);
    return base * f_v / H_cl * std::exp(2416.0 * (1.0 / 303.0 - 1.0 / T_fc));
}

double intrinsic_permeability(double eps, const ParameterSet::Porous& porous) {
    if (!(eps > porous.eps_p)) {
        std::ostringstream os;
        os << "intrinsic_permeability: porosity " << eps
           << " is at or below the percolation threshold " << porous.eps_p;
        throw std::invalid_argument(os.str());
    }
    const double ln_eps = std::log(eps);
    const double a = porous.alpha;
    return eps / (8.0 * ln_eps * ln_eps)
           * std::pow(eps - porous.eps_p, a + 2.0) * porous.r_f * porous.r_f
           / (std::pow(1.0 - porous.eps_p, a) * std::pow((a + 1.0) * eps - porous.eps_p, 2.0))
           * std::exp(porous.beta1 * porous.eps_c);
}

double surface_tension(double T_fc) {
    if (!(T_fc < 647.15)) throw std::invalid_argument("surface_tension: T must be below 647.15 K");
    const double r = (647.15 - T_fc) / 647.15;
    return 235.8e-3 * std::pow(r, 1.256) * (1.0 - 0.625 * r);
}

double binary_diffusivity(Side side, double P, double T_fc) {
    if (!(P > 0)) throw std::invalid_argument("binary_diffusivity: P must be > 0");
    const double base = (side == Side::anode) ? 1.644e-4 : 3.242e-5;
    return base * std::pow(T_fc / 333.0, 2.334) * (101325.0 / P);
}

double effective_diffusivity(Side side, double s, double eps, double P, double T_fc,
                             const ParameterSet::Porous& porous) {
    if (!(eps > porous.eps_p)) {
        std::ostringstream os;
        os << "effective_diffusivity: porosity " << eps
           << " is at or below the percolation threshold " << porous.eps_p;
        throw std::invalid_argument(os.str());
    }
    const double structure = std::pow((eps - porous.eps_p) / (1.0 - porous.eps_p), porous.alpha);
    const double blockage = (1.0 - s) * (1.0 - s);
    return eps * structure * blockage * std::exp(porous.beta2 * porous.eps_c)
           * binary_diffusivity(side, P, T_fc);
}

double sherwood_number(double W_gc, double H_gc) {
    if (!(W_gc > 0) || !(H_gc > 0)) {
        throw std::invalid_argument("sherwood_number: channel dimensions must be > 0");
    }
    return 0.9247 * std::log(W_gc / H_gc) + 2.3787;
}

double convective_mass_transfer(Side side, double P, double T_fc, double W_gc, double H_gc) {
    return sherwood_number(W_gc, H_gc) * binary_diffusivity(side, P, T_fc) / H_gc;
}

double membrane_permeation(CrossoverGas gas, double lambda, double T_fc, double kappa_co,
                           const ParameterSet& params) {
    const auto& k = params.kinetics;
    const double f_v = ionomer_volume_fraction(lambda, params.water.V_w, params.water.V_mem);
    double coeff, E_act;
    if (gas == CrossoverGas::H2) {
        coeff = (lambda < 17.6) ? (0.29 + 2.2 * f_v) : 1.8;
        E_act = (lambda < 17.6) ? k.E_act_H2_v : k.E_act_H2_l;
    } else {
        coeff = (lambda < 17.6) ? (0.11 + 1.9 * f_v) : 1.2;
        E_act = (lambda < 17.6) ? k.E_act_O2_v : k.E_act_O2_l;
    }
    return kappa_co * coeff * 1e-14
           * std::exp(E_act / params.bop.R * (1.0 / k.T_ref - 1.0 / T_fc));
}

double saturation_pressure(double T) {
    if (!(T >= 200.0 && T <= 600.0)) {
        std::ostringstream os;
        os << "saturation_pressure: T = " << T << " K outside [200, 600] K";
        throw std::invalid_argument(os.str());
    }
    const double t = T - 273.15; // Celsius
    const double lg = -2.1794 + 0.02953 * t - 9.1837e-5 * t * t + 1.4454e-7 * t * t * t;
    return 101325.0 * std::pow(10.0, lg);
}

double saturation_concentration(double T, double R) {
    return saturation_pressure(T) / (R * T);
}

} // namespace pemsim

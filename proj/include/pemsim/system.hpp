#pragma once

#include <span>
#include <vector>

#include "pemsim/derived.hpp"
#include "pemsim/layout.hpp"
#include "pemsim/mea.hpp"
#include "pemsim/parameters.hpp"
#include "pemsim/voltage.hpp"

namespace pemsim {

// One cell plus its auxiliary system as a single ODE right-hand side.
// Parameters and operating conditions are fixed at construction (isothermal
// operation). An instance is cheap to copy; use one instance per concurrent
// simulation — rhs() itself carries no mutable state.
class CellModel {
public:
    CellModel(ParameterSet params, OperatingConditions oc);

    const ParameterSet& params() const { return params_; }
    const OperatingConditions& oc() const { return oc_; }
    const DiscretizationLayout& layout() const { return layout_; }

    // Zero-current steady state at the mean of the desired pressures and
    // humidities. Throws ModelError when the humidity demand is infeasible.
    std::vector<double> initial_state() const;

    // Time derivative of the full state. Non-finite results are passed
    // through for the integrator's error control to reject.
    void rhs(double t, std::span<const double> y, double i_fc, std::span<double> dydt) const;

    // Same, but throws ModelError naming the offending state when any
    // derivative is non-finite.
    void rhs_checked(double t, std::span<const double> y, double i_fc,
                     std::span<double> dydt) const;

    DerivedQuantities derived(std::span<const double> y, double i_fc) const;

    VoltageBreakdown voltage(std::span<const double> y, double i_fc) const;

    // Total water per unit active area (mol m^-2): vapor, liquid and
    // dissolved, weighted by the capacity factors of the balances.
    double water_inventory(std::span<const double> y) const;

    // Test hook: zero the manifold<->channel exchange so the cell becomes a
    // closed vessel.
    void set_sealed_gas_channels(bool sealed) { sealed_gc_ = sealed; }
    bool sealed_gas_channels() const { return sealed_gc_; }

    double saturation_pressure_T() const { return p_sat_; }
    double saturation_concentration_T() const { return c_vsat_; }

private:
    void assemble(double t, std::span<const double> y, double i_fc, std::span<double> dydt,
                  DerivedQuantities* rec) const;

    ParameterSet params_;
    OperatingConditions oc_;
    DiscretizationLayout layout_;
    bool sealed_gc_ = false;

    // Temperature-fixed coefficients.
    double rt_ = 0;                 // R * T_fc
    double p_sat_ = 0, c_vsat_ = 0;
    double p_sat_ext_ = 0;
    double m_ext_ = 0;
    double sherwood_ = 0;
    double d_a_T_ = 0, d_c_T_ = 0;  // binary diffusivity at T times 101325 Pa
    double structure_gdl_ = 0;      // porous structure factor of D_eff, GDL
    double structure_iface_ = 0;    // same at the GDL|CL interface
    CapillaryInterface cap_gdl_{};
    CapillaryInterface cap_iface_{};
    double cap_lambda_cl_ = 0;      // rho_mem eps_mc / M_eq
    double cap_lambda_mem_ = 0;     // rho_mem / M_eq
};

} // namespace pemsim

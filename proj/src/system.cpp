#include "pemsim/system.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pemsim/errors.hpp"
#include "pemsim/transport.hpp"

namespace pemsim {

namespace {

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// Per-thread flux workspace so the hot RHS path never allocates.
struct Scratch {
    std::vector<double> j_l_a, j_l_c, s_vl_a, s_vl_c, j_v_a, j_v_c, j_h2, j_o2;
    void size_for(int n) {
        j_l_a.resize(n - 1);
        j_l_c.resize(n - 1);
        s_vl_a.resize(n);
        s_vl_c.resize(n);
        j_v_a.resize(n - 1);
        j_v_c.resize(n - 1);
        j_h2.resize(n - 1);
        j_o2.resize(n - 1);
    }
};

thread_local Scratch tl_scratch;

} // namespace

CellModel::CellModel(ParameterSet params, OperatingConditions oc)
    : params_(std::move(params)), oc_(oc), layout_(DiscretizationLayout::build(params_)) {
    params_.validate();
    oc_.validate(params_);

    const auto& g = params_.geometry;
    const auto& po = params_.porous;
    const double T = oc_.T_fc;

    rt_ = params_.bop.R * T;
    p_sat_ = saturation_pressure(T);
    c_vsat_ = p_sat_ / rt_;
    p_sat_ext_ = saturation_pressure(params_.ambient.T_ext);
    m_ext_ = mixture_molar_mass(GasRegion::ext, params_.ambient.Phi_ext, params_.ambient.P_ext,
                                params_.ambient.T_ext, params_.ambient.y_O2_ext, params_);
    sherwood_ = sherwood_number(g.W_gc, g.H_gc);
    d_a_T_ = 1.644e-4 * std::pow(T / 333.0, 2.334) * 101325.0;
    d_c_T_ = 3.242e-5 * std::pow(T / 333.0, 2.334) * 101325.0;

    auto structure = [&](double eps) {
        return eps * std::pow((eps - po.eps_p) / (1.0 - po.eps_p), po.alpha)
               * std::exp(po.beta2 * po.eps_c);
    };
    structure_gdl_ = structure(po.eps_gdl);
    const double eps_iface = 0.5 * (po.eps_gdl + po.eps_cl);
    structure_iface_ = structure(eps_iface);

    cap_gdl_ = make_capillary_interface(po.eps_gdl, po.theta_c_gdl, T, params_);
    const double theta_iface = 0.5 * (po.theta_c_gdl + po.theta_c_cl);
    cap_iface_ = make_capillary_interface(eps_iface, theta_iface, T, params_);

    cap_lambda_cl_ = params_.membrane.rho_mem * params_.membrane.eps_mc / params_.membrane.M_eq;
    cap_lambda_mem_ = params_.membrane.rho_mem / params_.membrane.M_eq;
}

std::vector<double> CellModel::initial_state() const {
    const auto& L = layout_;
    const int n = L.n_gdl();
    const double p_mean = 0.5 * (oc_.P_a_des + oc_.P_c_des);
    const double phi_mean = 0.5 * (oc_.Phi_a_des + oc_.Phi_c_des);
    const double p_v = phi_mean * p_sat_;
    if (!(p_v < p_mean)) {
        std::ostringstream os;
        os << "infeasible humidity: mean vapor pressure " << p_v
           << " Pa reaches the mean total pressure " << p_mean << " Pa";
        throw ModelError(os.str());
    }
    const double c_v = p_v / rt_;
    const double c_dry = (p_mean - p_v) / rt_;
    const double lambda0 = equilibrium_water_content(water_activity(c_v, c_vsat_, 0.0),
                                                     params_.water.K_shape);

    std::vector<double> y(L.total_len(), 0.0);
    y[L.lambda_acl()] = lambda0;
    y[L.lambda_mem()] = lambda0;
    y[L.lambda_ccl()] = lambda0;
    // s block stays zero.
    y[L.c_v_agc()] = c_v;
    for (int i = 1; i <= n; ++i) y[L.c_v_agdl(i)] = c_v;
    y[L.c_v_acl()] = c_v;
    y[L.c_v_ccl()] = c_v;
    for (int i = 1; i <= n; ++i) y[L.c_v_cgdl(i)] = c_v;
    y[L.c_v_cgc()] = c_v;
    y[L.c_h2_agc()] = c_dry;
    for (int i = 1; i <= n; ++i) y[L.c_h2_agdl(i)] = c_dry;
    y[L.c_h2_acl()] = c_dry;
    const double y_o2 = params_.ambient.y_O2_ext;
    y[L.c_o2_ccl()] = y_o2 * c_dry;
    for (int i = 1; i <= n; ++i) y[L.c_o2_cgdl(i)] = y_o2 * c_dry;
    y[L.c_o2_cgc()] = y_o2 * c_dry;
    y[L.c_n2()] = (1.0 - y_o2) * c_dry;
    y[L.p_asm()] = oc_.P_a_des;
    y[L.p_aem()] = oc_.P_a_des;
    y[L.phi_asm()] = oc_.Phi_a_des;
    y[L.phi_aem()] = oc_.Phi_a_des;
    y[L.p_csm()] = oc_.P_c_des;
    y[L.p_cem()] = oc_.P_c_des;
    y[L.phi_csm()] = oc_.Phi_c_des;
    y[L.phi_cem()] = oc_.Phi_c_des;
    y[L.w_cp()] = 0.0;
    y[L.w_c_inj()] = 0.0;
    // Zero-current steady state: nothing flows, so the back-pressure valve
    // rests closed. Any opening here would blow the pressurized cathode down
    // faster than the compressor could refill it.
    y[L.a_bp_c()] = 0.0;
    return y;
}

void CellModel::rhs(double t, std::span<const double> y, double i_fc,
                    std::span<double> dydt) const {
    assemble(t, y, i_fc, dydt, nullptr);
}

void CellModel::rhs_checked(double t, std::span<const double> y, double i_fc,
                            std::span<double> dydt) const {
    assemble(t, y, i_fc, dydt, nullptr);
    for (std::size_t i = 0; i < dydt.size(); ++i) {
        if (!std::isfinite(dydt[i])) {
            std::ostringstream os;
            os << "non-finite time derivative for state '" << layout_.state_name(i)
               << "' at t = " << t << " s, i_fc = " << i_fc << " A m^-2";
            throw ModelError(os.str());
        }
    }
}

DerivedQuantities CellModel::derived(std::span<const double> y, double i_fc) const {
    DerivedQuantities rec;
    std::vector<double> dydt(layout_.total_len());
    assemble(0.0, y, i_fc, dydt, &rec);
    rec.voltage = voltage(y, i_fc);
    return rec;
}

VoltageBreakdown CellModel::voltage(std::span<const double> y, double i_fc) const {
    const auto& L = layout_;
    return cell_voltage(i_fc, y[L.lambda_mem()], y[L.lambda_ccl()], y[L.s_ccl()],
                        y[L.c_h2_acl()], y[L.c_o2_ccl()], params_, oc_);
}

double CellModel::water_inventory(std::span<const double> y) const {
    const auto& L = layout_;
    const int n = L.n_gdl();
    const auto& g = params_.geometry;
    const auto& po = params_.porous;
    const double dx = L.dx_gdl();
    const double mol_liquid = params_.water.rho_H2O / params_.bop.M_H2O;

    auto s_agdl = [&](int i) { return i == 1 ? 0.0 : y[L.s_agdl(i)]; };
    auto s_cgdl = [&](int i) { return i == n ? 0.0 : y[L.s_cgdl(i)]; };

    double w = g.H_gc * (y[L.c_v_agc()] + y[L.c_v_cgc()]);
    for (int i = 1; i <= n; ++i) {
        w += po.eps_gdl * dx
             * ((1.0 - s_agdl(i)) * y[L.c_v_agdl(i)] + (1.0 - s_cgdl(i)) * y[L.c_v_cgdl(i)]);
        w += po.eps_gdl * dx * mol_liquid * (s_agdl(i) + s_cgdl(i));
    }
    w += po.eps_cl * g.H_cl
         * ((1.0 - y[L.s_acl()]) * y[L.c_v_acl()] + (1.0 - y[L.s_ccl()]) * y[L.c_v_ccl()]);
    w += po.eps_cl * g.H_cl * mol_liquid * (y[L.s_acl()] + y[L.s_ccl()]);
    w += cap_lambda_cl_ * g.H_cl * (y[L.lambda_acl()] + y[L.lambda_ccl()]);
    w += cap_lambda_mem_ * g.H_mem * y[L.lambda_mem()];
    return w;
}

void CellModel::assemble(double /*t*/, std::span<const double> y, double i_fc,
                         std::span<double> dydt, DerivedQuantities* rec) const {
    const auto& L = layout_;
    const auto& g = params_.geometry;
    const auto& po = params_.porous;
    const auto& c = params_.bop;
    const int n = L.n_gdl();
    const double T = oc_.T_fc;
    const double dx = L.dx_gdl();
    const double dx_iface = dx + g.H_cl; // GDL|CL spacing carries a factor 2 in the flux
    const double p_floor = 0.05 * params_.ambient.P_ext;

    std::fill(dydt.begin(), dydt.end(), 0.0);

    // --- state views ------------------------------------------------------
    const double lam_acl = y[L.lambda_acl()];
    const double lam_mem = y[L.lambda_mem()];
    const double lam_ccl = y[L.lambda_ccl()];
    auto s_agdl = [&](int i) { return i == 1 ? 0.0 : y[L.s_agdl(i)]; };
    auto s_cgdl = [&](int i) { return i == n ? 0.0 : y[L.s_cgdl(i)]; };
    const double s_acl = y[L.s_acl()];
    const double s_ccl = y[L.s_ccl()];
    const double c_n2 = y[L.c_n2()];

    // Nodal total pressures (ideal gas; N2 homogeneous on the cathode side).
    auto p_anode_node = [&](int i) { return (y[L.c_v_agdl(i)] + y[L.c_h2_agdl(i)]) * rt_; };
    auto p_cathode_node = [&](int i) {
        return (y[L.c_v_cgdl(i)] + y[L.c_o2_cgdl(i)] + c_n2) * rt_;
    };
    const double p_agc = (y[L.c_v_agc()] + y[L.c_h2_agc()]) * rt_;
    const double p_cgc = (y[L.c_v_cgc()] + y[L.c_o2_cgc()] + c_n2) * rt_;
    const double p_acl = (y[L.c_v_acl()] + y[L.c_h2_acl()]) * rt_;
    const double p_ccl = (y[L.c_v_ccl()] + y[L.c_o2_ccl()] + c_n2) * rt_;

    const double phi_agc = y[L.c_v_agc()] * rt_ / p_sat_;
    const double phi_cgc = y[L.c_v_cgc()] * rt_ / p_sat_;
    const double denom_o2 = y[L.c_o2_cgc()] + c_n2;
    const double y_o2_cgc = denom_o2 > 0 ? y[L.c_o2_cgc()] / denom_o2 : 0.0;

    // Vapor mole fractions for the condensation law and GC molar masses.
    auto x_v_anode = [&](double c_v, double c_h2) {
        const double tot = c_v + c_h2;
        return tot > 0 ? clamp01(c_v / tot) : 0.0;
    };
    auto x_v_cathode = [&](double c_v, double c_o2) {
        const double tot = c_v + c_o2 + c_n2;
        return tot > 0 ? clamp01(c_v / tot) : 0.0;
    };

    const double x_v_agc = x_v_anode(y[L.c_v_agc()], y[L.c_h2_agc()]);
    const double x_v_cgc = x_v_cathode(y[L.c_v_cgc()], y[L.c_o2_cgc()]);
    const double m_agc = x_v_agc * c.M_H2O + (1.0 - x_v_agc) * c.M_H2;
    const double m_cgc = x_v_cgc * c.M_H2O
                         + (1.0 - x_v_cgc) * (y_o2_cgc * c.M_O2 + (1.0 - y_o2_cgc) * c.M_N2);

    // --- reaction, crossover, internal current -----------------------------
    const auto rx = reaction_and_crossover_sources(i_fc, y[L.c_h2_acl()], y[L.c_o2_ccl()],
                                                   lam_mem, T, params_);
    const double i_n = 2.0 * c.F * rx.k_h2 * rt_ * y[L.c_h2_acl()]
                       + 4.0 * c.F * rx.k_o2 * rt_ * y[L.c_o2_ccl()];

    // --- balance of plant flows --------------------------------------------
    BopFlows w{};
    const double p_asm = y[L.p_asm()];
    const double p_aem = y[L.p_aem()];
    const double p_csm = y[L.p_csm()];
    const double p_cem = y[L.p_cem()];
    const double phi_asm = y[L.phi_asm()];
    const double phi_aem = y[L.phi_aem()];
    const double phi_csm = y[L.phi_csm()];
    const double phi_cem = y[L.phi_cem()];

    auto x_v_of = [&](double phi, double p) { return clamp01(phi * p_sat_ / std::max(p, p_floor)); };
    const double x_v_asm = x_v_of(phi_asm, p_asm);
    const double x_v_aem = x_v_of(phi_aem, p_aem);
    const double x_v_csm = x_v_of(phi_csm, p_csm);
    const double x_v_cem = x_v_of(phi_cem, p_cem);
    const double m_asm = x_v_asm * c.M_H2O + (1.0 - x_v_asm) * c.M_H2;
    const double m_aem = x_v_aem * c.M_H2O + (1.0 - x_v_aem) * c.M_H2;
    const double y_o2_ext = params_.ambient.y_O2_ext;
    const double m_csm = x_v_csm * c.M_H2O
                         + (1.0 - x_v_csm) * (y_o2_ext * c.M_O2 + (1.0 - y_o2_ext) * c.M_N2);
    const double m_cem = x_v_cem * c.M_H2O
                         + (1.0 - x_v_cem) * (y_o2_cgc * c.M_O2 + (1.0 - y_o2_cgc) * c.M_N2);

    w.W_asm_in = linear_nozzle_flow(c.k_sm_in, oc_.P_a_des, p_asm);
    w.W_asm_out = linear_nozzle_flow(c.k_sm_out, p_asm, p_agc);
    w.W_aem_in = linear_nozzle_flow(c.k_em_in, p_agc, p_aem);
    if (c.k_purge > 0 && p_aem > params_.ambient.P_ext) {
        w.W_aem_out = c.k_purge
                      * compressible_orifice_flow(c.C_D, c.A_T, p_aem, params_.ambient.P_ext,
                                                  T, m_agc, c.gamma_H2, c.R);
    }
    {
        const double p_dry = std::max(p_aem - phi_aem * p_sat_, p_floor);
        w.W_are = g.n_cell * m_aem * p_aem / p_dry * (oc_.S_a - 1.0) * (i_fc + i_n)
                  * g.A_act / (2.0 * c.F);
    }
    w.W_v_asm_in = phi_aem * p_sat_ / (m_aem * std::max(p_aem, p_floor)) * w.W_are;
    w.W_v_aem_out = phi_aem * p_sat_ / (m_aem * std::max(p_aem, p_floor)) * w.W_aem_out;

    const double w_cp = y[L.w_cp()];
    const double w_c_inj = y[L.w_c_inj()];
    w.W_csm_in = w_cp + w_c_inj;
    w.W_csm_out = linear_nozzle_flow(c.k_sm_out, p_csm, p_cgc);
    w.W_cem_in = linear_nozzle_flow(c.k_em_in, p_cgc, p_cem);
    {
        const double a_bp = std::clamp(y[L.a_bp_c()], 0.0, c.A_T);
        if (p_cem > params_.ambient.P_ext && a_bp > 0) {
            w.W_cem_out = compressible_orifice_flow(c.C_D, a_bp, p_cem, params_.ambient.P_ext,
                                                    T, m_cgc, c.gamma_a, c.R);
        }
    }
    w.W_v_csm_in = params_.ambient.Phi_ext * p_sat_ext_ / (m_ext_ * params_.ambient.P_ext) * w_cp
                   + w_c_inj / c.M_H2O;
    w.W_v_cem_out = phi_cem * p_sat_ / (m_cem * std::max(p_cem, p_floor)) * w.W_cem_out;

    // Compressor and humidifier setpoints (compressor outlet at P_csm).
    {
        const double p_cp = std::max(p_csm, p_floor);
        w.W_cp_des = g.n_cell * m_ext_
                     * params_.ambient.P_ext
                     / (params_.ambient.P_ext - params_.ambient.Phi_ext * p_sat_ext_)
                     / y_o2_ext * oc_.S_c * (i_fc + i_n) * g.A_act / (4.0 * c.F);
        w.W_c_v_des = c.M_H2O * oc_.Phi_c_des * p_sat_ / p_cp * w_cp / m_ext_;
        w.W_v_hum_in = c.M_H2O * params_.ambient.Phi_ext * p_sat_ext_ / params_.ambient.P_ext
                       * w_cp / m_ext_;
        w.W_c_inj_des = std::max(0.0, w.W_c_v_des - w.W_v_hum_in);
    }

    // --- dissolved water ----------------------------------------------------
    const double j_mem_acl = dissolved_water_flux(lam_acl, lam_mem, 0.5 * (lam_acl + lam_mem),
                                                  i_fc, c.F, params_.membrane.rho_mem,
                                                  params_.membrane.M_eq, g.H_mem, g.H_cl);
    const double j_mem_ccl = dissolved_water_flux(lam_mem, lam_ccl, 0.5 * (lam_mem + lam_ccl),
                                                  i_fc, c.F, params_.membrane.rho_mem,
                                                  params_.membrane.M_eq, g.H_mem, g.H_cl);
    const double s_sorp_acl = sorption_source(y[L.c_v_acl()], s_acl, lam_acl, T, params_);
    const double s_sorp_ccl = sorption_source(y[L.c_v_ccl()], s_ccl, lam_ccl, T, params_);

    dydt[L.lambda_acl()] = (-j_mem_acl / g.H_cl + s_sorp_acl + rx.s_p_acl) / cap_lambda_cl_;
    dydt[L.lambda_mem()] = ((j_mem_acl - j_mem_ccl) / g.H_mem) / cap_lambda_mem_;
    dydt[L.lambda_ccl()] = (j_mem_ccl / g.H_cl + s_sorp_ccl + rx.s_p_ccl) / cap_lambda_cl_;

    // --- capacity factor with flooding floor --------------------------------
    auto gas_capacity = [](double eps, double s) {
        return eps * std::max(1.0 - s, 1e-3);
    };
    const double rho_eps_gdl = params_.water.rho_H2O * po.eps_gdl;
    const double rho_eps_cl = params_.water.rho_H2O * po.eps_cl;

    // --- liquid water --------------------------------------------------------
    // Faces between GDL nodes i and i+1 at slot i-1; the s = 0 Dirichlet nodes
    // participate through their pinned value.
    tl_scratch.size_for(n);
    auto& j_l_a = tl_scratch.j_l_a;
    auto& j_l_c = tl_scratch.j_l_c;
    for (int i = 1; i <= n - 1; ++i) {
        j_l_a[i - 1] = capillary_flow(s_agdl(i), s_agdl(i + 1), cap_gdl_, dx);
        j_l_c[i - 1] = capillary_flow(s_cgdl(i), s_cgdl(i + 1), cap_gdl_, dx);
    }
    const double j_l_agdl_acl = capillary_flow(s_agdl(n), s_acl, cap_iface_, dx_iface, 2.0);
    const double j_l_ccl_cgdl = capillary_flow(s_ccl, s_cgdl(1), cap_iface_, dx_iface, 2.0);

    auto& s_vl_a = tl_scratch.s_vl_a;
    auto& s_vl_c = tl_scratch.s_vl_c;
    for (int i = 1; i <= n; ++i) {
        const double xva = x_v_anode(y[L.c_v_agdl(i)], y[L.c_h2_agdl(i)]);
        const double xvc = x_v_cathode(y[L.c_v_cgdl(i)], y[L.c_o2_cgdl(i)]);
        s_vl_a[i - 1] = phase_change_rate(y[L.c_v_agdl(i)], s_agdl(i), po.eps_gdl, T, xva,
                                          c_vsat_, params_);
        s_vl_c[i - 1] = phase_change_rate(y[L.c_v_cgdl(i)], s_cgdl(i), po.eps_gdl, T, xvc,
                                          c_vsat_, params_);
    }
    const double s_vl_acl = phase_change_rate(y[L.c_v_acl()], s_acl, po.eps_cl, T,
                                              x_v_anode(y[L.c_v_acl()], y[L.c_h2_acl()]),
                                              c_vsat_, params_);
    const double s_vl_ccl = phase_change_rate(y[L.c_v_ccl()], s_ccl, po.eps_cl, T,
                                              x_v_cathode(y[L.c_v_ccl()], y[L.c_o2_ccl()]),
                                              c_vsat_, params_);

    for (int i = 2; i <= n; ++i) {
        const double j_out = (i == n) ? j_l_agdl_acl : j_l_a[i - 1];
        dydt[L.s_agdl(i)] = ((j_l_a[i - 2] - j_out) / dx + c.M_H2O * s_vl_a[i - 1])
                            / rho_eps_gdl;
    }
    dydt[L.s_acl()] = (j_l_agdl_acl / g.H_cl + c.M_H2O * s_vl_acl) / rho_eps_cl;
    dydt[L.s_ccl()] = (-j_l_ccl_cgdl / g.H_cl + c.M_H2O * s_vl_ccl) / rho_eps_cl;
    for (int i = 1; i <= n - 1; ++i) {
        const double j_in = (i == 1) ? j_l_ccl_cgdl : j_l_c[i - 2];
        dydt[L.s_cgdl(i)] = ((j_in - j_l_c[i - 1]) / dx + c.M_H2O * s_vl_c[i - 1])
                            / rho_eps_gdl;
    }

    // --- vapor ---------------------------------------------------------------
    auto d_eff_face_gdl = [&](double d_T, double s1, double s2, double pbar) {
        const double sb = std::clamp(0.5 * (s1 + s2), 0.0, 1.0);
        return structure_gdl_ * (1.0 - sb) * (1.0 - sb) * d_T / std::max(pbar, p_floor);
    };
    auto d_eff_face_iface = [&](double d_T, double s1, double s2, double pbar) {
        const double sb = std::clamp(0.5 * (s1 + s2), 0.0, 1.0);
        return structure_iface_ * (1.0 - sb) * (1.0 - sb) * d_T / std::max(pbar, p_floor);
    };

    const double h_a = sherwood_ * (d_a_T_ / std::max(0.5 * (p_agc + p_anode_node(1)), p_floor))
                       / g.H_gc;
    const double h_c = sherwood_
                       * (d_c_T_ / std::max(0.5 * (p_cgc + p_cathode_node(n)), p_floor))
                       / g.H_gc;

    const double j_v_agc_agdl = convective_boundary_flux(y[L.c_v_agc()], y[L.c_v_agdl(1)], h_a);
    const double j_v_cgdl_cgc = convective_boundary_flux(y[L.c_v_cgdl(n)], y[L.c_v_cgc()], h_c);

    auto& j_v_a = tl_scratch.j_v_a;
    auto& j_v_c = tl_scratch.j_v_c;
    auto& j_h2 = tl_scratch.j_h2;
    auto& j_o2 = tl_scratch.j_o2;
    for (int i = 1; i <= n - 1; ++i) {
        const double pa = 0.5 * (p_anode_node(i) + p_anode_node(i + 1));
        const double pc = 0.5 * (p_cathode_node(i) + p_cathode_node(i + 1));
        const double da = d_eff_face_gdl(d_a_T_, s_agdl(i), s_agdl(i + 1), pa);
        const double dc = d_eff_face_gdl(d_c_T_, s_cgdl(i), s_cgdl(i + 1), pc);
        j_v_a[i - 1] = gas_diffusion_flux(y[L.c_v_agdl(i)], y[L.c_v_agdl(i + 1)], da, dx);
        j_v_c[i - 1] = gas_diffusion_flux(y[L.c_v_cgdl(i)], y[L.c_v_cgdl(i + 1)], dc, dx);
        j_h2[i - 1] = gas_diffusion_flux(y[L.c_h2_agdl(i)], y[L.c_h2_agdl(i + 1)], da, dx);
        j_o2[i - 1] = gas_diffusion_flux(y[L.c_o2_cgdl(i)], y[L.c_o2_cgdl(i + 1)], dc, dx);
    }

    const double p_iface_a = 0.5 * (p_anode_node(n) + p_acl);
    const double p_iface_c = 0.5 * (p_ccl + p_cathode_node(1));
    const double da_iface = d_eff_face_iface(d_a_T_, s_agdl(n), s_acl, p_iface_a);
    const double dc_iface = d_eff_face_iface(d_c_T_, s_ccl, s_cgdl(1), p_iface_c);

    const double j_v_agdl_acl =
        gas_diffusion_flux(y[L.c_v_agdl(n)], y[L.c_v_acl()], da_iface, dx_iface, 2.0);
    const double j_v_ccl_cgdl =
        gas_diffusion_flux(y[L.c_v_ccl()], y[L.c_v_cgdl(1)], dc_iface, dx_iface, 2.0);
    const double j_h2_agdl_acl =
        gas_diffusion_flux(y[L.c_h2_agdl(n)], y[L.c_h2_acl()], da_iface, dx_iface, 2.0);
    const double j_o2_ccl_cgdl =
        gas_diffusion_flux(y[L.c_o2_ccl()], y[L.c_o2_cgdl(1)], dc_iface, dx_iface, 2.0);

    for (int i = 1; i <= n; ++i) {
        const double j_in_a = (i == 1) ? j_v_agc_agdl : j_v_a[i - 2];
        const double j_out_a = (i == n) ? j_v_agdl_acl : j_v_a[i - 1];
        dydt[L.c_v_agdl(i)] = ((j_in_a - j_out_a) / dx - s_vl_a[i - 1])
                              / gas_capacity(po.eps_gdl, s_agdl(i));
        const double j_in_c = (i == 1) ? j_v_ccl_cgdl : j_v_c[i - 2];
        const double j_out_c = (i == n) ? j_v_cgdl_cgc : j_v_c[i - 1];
        dydt[L.c_v_cgdl(i)] = ((j_in_c - j_out_c) / dx - s_vl_c[i - 1])
                              / gas_capacity(po.eps_gdl, s_cgdl(i));
    }
    dydt[L.c_v_acl()] = (j_v_agdl_acl / g.H_cl - s_sorp_acl - s_vl_acl)
                        / gas_capacity(po.eps_cl, s_acl);
    dydt[L.c_v_ccl()] = (-j_v_ccl_cgdl / g.H_cl - s_sorp_ccl - s_vl_ccl)
                        / gas_capacity(po.eps_cl, s_ccl);

    // --- hydrogen -------------------------------------------------------------
    const double j_h2_agc_agdl = convective_boundary_flux(y[L.c_h2_agc()], y[L.c_h2_agdl(1)], h_a);
    for (int i = 1; i <= n; ++i) {
        const double j_in = (i == 1) ? j_h2_agc_agdl : j_h2[i - 2];
        const double j_out = (i == n) ? j_h2_agdl_acl : j_h2[i - 1];
        dydt[L.c_h2_agdl(i)] = ((j_in - j_out) / dx) / gas_capacity(po.eps_gdl, s_agdl(i));
    }
    dydt[L.c_h2_acl()] = (j_h2_agdl_acl / g.H_cl + rx.s_h2_acl) / gas_capacity(po.eps_cl, s_acl);

    // --- oxygen ----------------------------------------------------------------
    const double j_o2_cgdl_cgc = convective_boundary_flux(y[L.c_o2_cgdl(n)], y[L.c_o2_cgc()], h_c);
    dydt[L.c_o2_ccl()] = (-j_o2_ccl_cgdl / g.H_cl + rx.s_o2_ccl) / gas_capacity(po.eps_cl, s_ccl);
    for (int i = 1; i <= n; ++i) {
        const double j_in = (i == 1) ? j_o2_ccl_cgdl : j_o2[i - 2];
        const double j_out = (i == n) ? j_o2_cgdl_cgc : j_o2[i - 1];
        dydt[L.c_o2_cgdl(i)] = ((j_in - j_out) / dx) / gas_capacity(po.eps_gdl, s_cgdl(i));
    }

    // --- gas channels ------------------------------------------------------------
    const double gc_area = g.H_gc * g.W_gc;
    double w_asm_out = w.W_asm_out, w_aem_in = w.W_aem_in;
    double w_csm_out = w.W_csm_out, w_cem_in = w.W_cem_in;
    if (sealed_gc_) {
        w_asm_out = w_aem_in = w_csm_out = w_cem_in = 0.0;
    }

    const double j_v_a_in = x_v_asm * w_asm_out / (gc_area * m_asm);
    const double j_v_a_out = x_v_agc * w_aem_in / (gc_area * m_agc);
    const double j_h2_in = (1.0 - x_v_asm) * w_asm_out / (gc_area * m_asm);
    const double j_h2_out = (1.0 - x_v_agc) * w_aem_in / (gc_area * m_agc);
    const double j_v_c_in = x_v_csm * w_csm_out / (gc_area * m_csm);
    const double j_v_c_out = x_v_cgc * w_cem_in / (gc_area * m_cgc);
    const double j_o2_in = y_o2_ext * (1.0 - x_v_csm) * w_csm_out / (gc_area * m_csm);
    const double j_o2_out = y_o2_cgc * (1.0 - x_v_cgc) * w_cem_in / (gc_area * m_cgc);
    const double j_n2_in = (1.0 - y_o2_ext) * (1.0 - x_v_csm) * w_csm_out / (gc_area * m_csm);
    const double j_n2_out = (1.0 - y_o2_cgc) * (1.0 - x_v_cgc) * w_cem_in / (gc_area * m_cgc);

    dydt[L.c_v_agc()] = (j_v_a_in - j_v_a_out) / g.L_gc - j_v_agc_agdl / g.H_gc;
    dydt[L.c_h2_agc()] = (j_h2_in - j_h2_out) / g.L_gc - j_h2_agc_agdl / g.H_gc;
    dydt[L.c_v_cgc()] = (j_v_c_in - j_v_c_out) / g.L_gc + j_v_cgdl_cgc / g.H_gc;
    dydt[L.c_o2_cgc()] = (j_o2_in - j_o2_out) / g.L_gc + j_o2_cgdl_cgc / g.H_gc;
    dydt[L.c_n2()] = (j_n2_in - j_n2_out) / g.L_gc;

    // --- manifolds, actuators, valve -----------------------------------------------
    dydt[L.p_asm()] = rt_ / (c.V_sm * m_asm) * (w.W_asm_in + w.W_are - g.n_cell * w.W_asm_out);
    dydt[L.p_aem()] = rt_ / (c.V_em * m_aem) * (g.n_cell * w.W_aem_in - w.W_are - w.W_aem_out);
    dydt[L.phi_asm()] = rt_ / (c.V_sm * p_sat_)
                        * (w.W_v_asm_in - j_v_a_in * gc_area * g.n_cell);
    dydt[L.phi_aem()] = rt_ / (c.V_em * p_sat_)
                        * (j_v_a_out * gc_area * g.n_cell - w.W_v_asm_in - w.W_v_aem_out);
    dydt[L.p_csm()] = rt_ / (c.V_sm * m_csm) * (w.W_csm_in - g.n_cell * w.W_csm_out);
    dydt[L.p_cem()] = rt_ / (c.V_em * m_cem) * (g.n_cell * w.W_cem_in - w.W_cem_out);
    dydt[L.phi_csm()] = rt_ / (c.V_sm * p_sat_)
                        * (w.W_v_csm_in - j_v_c_in * gc_area * g.n_cell);
    dydt[L.phi_cem()] = rt_ / (c.V_em * p_sat_)
                        * (j_v_c_out * gc_area * g.n_cell - w.W_v_cem_out);
    dydt[L.w_cp()] = actuator_dynamics(w_cp, w.W_cp_des, c.tau_cp);
    dydt[L.w_c_inj()] = actuator_dynamics(w_c_inj, w.W_c_inj_des, c.tau_hum);

    const double dp_cgc_dt = rt_ * (dydt[L.c_v_cgc()] + dydt[L.c_o2_cgc()] + dydt[L.c_n2()]);
    dydt[L.a_bp_c()] = back_pressure_valve(y[L.a_bp_c()], p_cgc, dp_cgc_dt, oc_.P_c_des,
                                           c.K_p, c.K_d, c.A_T, 1e-6 * c.A_T);

    // --- diagnostics record ---------------------------------------------------------
    if (rec) {
        rec->phi_agc = phi_agc;
        rec->phi_cgc = phi_cgc;
        rec->p_agc = p_agc;
        rec->p_cgc = p_cgc;
        rec->p_acl = p_acl;
        rec->p_ccl = p_ccl;
        rec->p_agdl.resize(n);
        rec->p_cgdl.resize(n);
        for (int i = 1; i <= n; ++i) {
            rec->p_agdl[i - 1] = p_anode_node(i);
            rec->p_cgdl[i - 1] = p_cathode_node(i);
        }
        rec->y_o2_cgc = y_o2_cgc;
        rec->m_agc = m_agc;
        rec->m_cgc = m_cgc;
        rec->m_asm = m_asm;
        rec->m_aem = m_aem;
        rec->m_csm = m_csm;
        rec->m_cem = m_cem;
        rec->flows = w;

        auto& mf = rec->mea;
        mf.j_lambda_mem_acl = j_mem_acl;
        mf.j_lambda_mem_ccl = j_mem_ccl;
        mf.s_sorp_acl = s_sorp_acl;
        mf.s_sorp_ccl = s_sorp_ccl;
        mf.s_p_acl = rx.s_p_acl;
        mf.s_p_ccl = rx.s_p_ccl;
        mf.s_h2_acl = rx.s_h2_acl;
        mf.s_o2_ccl = rx.s_o2_ccl;
        mf.j_l_agdl_face = j_l_a;
        mf.j_l_cgdl_face = j_l_c;
        mf.j_l_agdl_acl = j_l_agdl_acl;
        mf.j_l_ccl_cgdl = j_l_ccl_cgdl;
        mf.s_vl_agdl = s_vl_a;
        mf.s_vl_cgdl = s_vl_c;
        mf.s_vl_acl = s_vl_acl;
        mf.s_vl_ccl = s_vl_ccl;
        mf.j_v_agdl_face = j_v_a;
        mf.j_v_cgdl_face = j_v_c;
        mf.j_v_agc_agdl = j_v_agc_agdl;
        mf.j_v_agdl_acl = j_v_agdl_acl;
        mf.j_v_ccl_cgdl = j_v_ccl_cgdl;
        mf.j_v_cgdl_cgc = j_v_cgdl_cgc;
        mf.j_h2_agdl_face = j_h2;
        mf.j_h2_agc_agdl = j_h2_agc_agdl;
        mf.j_h2_agdl_acl = j_h2_agdl_acl;
        mf.j_o2_cgdl_face = j_o2;
        mf.j_o2_ccl_cgdl = j_o2_ccl_cgdl;
        mf.j_o2_cgdl_cgc = j_o2_cgdl_cgc;
        mf.j_v_a_in = j_v_a_in;
        mf.j_v_a_out = j_v_a_out;
        mf.j_v_c_in = j_v_c_in;
        mf.j_v_c_out = j_v_c_out;
        mf.j_h2_in = j_h2_in;
        mf.j_h2_out = j_h2_out;
        mf.j_o2_in = j_o2_in;
        mf.j_o2_out = j_o2_out;
        mf.j_n2_in = j_n2_in;
        mf.j_n2_out = j_n2_out;
    }
}

} // namespace pemsim

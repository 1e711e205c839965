#pragma once

#include <vector>

#include "pemsim/bop.hpp"
#include "pemsim/voltage.hpp"

namespace pemsim {

// Every flux (J, mol m^-2 s^-1 or kg m^-2 s^-1 for liquid) and source
// (S, mol m^-3 s^-1) evaluated during one RHS assembly. Face arrays hold the
// flux between GDL nodes i and i+1 at slot i-1 (i = 1 .. n-1).
struct MeaFluxes {
    double j_lambda_mem_acl = 0, j_lambda_mem_ccl = 0;
    double s_sorp_acl = 0, s_sorp_ccl = 0;
    double s_p_acl = 0, s_p_ccl = 0;
    double s_h2_acl = 0, s_o2_ccl = 0;

    std::vector<double> j_l_agdl_face, j_l_cgdl_face;   // kg m^-2 s^-1
    double j_l_agdl_acl = 0, j_l_ccl_cgdl = 0;
    std::vector<double> s_vl_agdl, s_vl_cgdl;           // per GDL node
    double s_vl_acl = 0, s_vl_ccl = 0;

    std::vector<double> j_v_agdl_face, j_v_cgdl_face;
    double j_v_agc_agdl = 0, j_v_agdl_acl = 0, j_v_ccl_cgdl = 0, j_v_cgdl_cgc = 0;

    std::vector<double> j_h2_agdl_face;
    double j_h2_agc_agdl = 0, j_h2_agdl_acl = 0;

    std::vector<double> j_o2_cgdl_face;
    double j_o2_ccl_cgdl = 0, j_o2_cgdl_cgc = 0;

    // Gas channel supply/exhaust fluxes (mol m^-2 s^-1).
    double j_v_a_in = 0, j_v_a_out = 0, j_v_c_in = 0, j_v_c_out = 0;
    double j_h2_in = 0, j_h2_out = 0, j_o2_in = 0, j_o2_out = 0;
    double j_n2_in = 0, j_n2_out = 0;
};

// Diagnostics derived from one state snapshot; all values equal the ones the
// RHS assembly used at that instant.
struct DerivedQuantities {
    double phi_agc = 0, phi_cgc = 0;
    double p_agc = 0, p_cgc = 0;
    std::vector<double> p_agdl, p_cgdl; // nodal total pressures
    double p_acl = 0, p_ccl = 0;
    double y_o2_cgc = 0;
    double m_agc = 0, m_cgc = 0, m_asm = 0, m_aem = 0, m_csm = 0, m_cem = 0;
    BopFlows flows;
    MeaFluxes mea;
    VoltageBreakdown voltage;
};

} // namespace pemsim

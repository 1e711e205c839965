#include "pemsim/layout.hpp"

#include <cassert>
#include <cmath>
#include <sstream>

#include "pemsim/errors.hpp"

namespace pemsim {

DiscretizationLayout DiscretizationLayout::build(const ParameterSet& params) {
    const auto& g = params.geometry;
    DiscretizationLayout l;
    if (g.n_gdl > 0) {
        l.n_gdl_ = g.n_gdl;
    } else {
        l.n_gdl_ = static_cast<int>(std::floor(g.H_gdl / (2.0 * g.H_cl)));
    }
    if (l.n_gdl_ < 2) {
        std::ostringstream os;
        os << "discretization requires n_gdl >= 2, got " << l.n_gdl_
           << " (H_gdl = " << g.H_gdl << " m, H_cl = " << g.H_cl
           << " m; need H_gdl >= 4*H_cl or an explicit n_gdl)";
        throw ConfigError(os.str());
    }
    const int n = l.n_gdl_;
    l.dx_gdl_ = g.H_gdl / n;
    l.H_cl_ = g.H_cl;
    l.H_mem_ = g.H_mem;

    l.cv_begin_ = 3 + 2 * static_cast<std::size_t>(n);
    l.ch2_begin_ = l.cv_begin_ + 2 * n + 4;
    l.co2_begin_ = l.ch2_begin_ + n + 2;
    l.cn2_ = l.co2_begin_ + n + 2;
    l.bop_begin_ = l.cn2_ + 1;
    l.total_len_ = l.bop_begin_ + 11;

    auto& names = l.names_;
    names.resize(l.total_len_);
    names[0] = "lambda_acl";
    names[1] = "lambda_mem";
    names[2] = "lambda_ccl";
    for (int i = 2; i <= n; ++i) names[l.s_agdl(i)] = "s_agdl_" + std::to_string(i);
    names[l.s_acl()] = "s_acl";
    names[l.s_ccl()] = "s_ccl";
    for (int i = 1; i <= n - 1; ++i) names[l.s_cgdl(i)] = "s_cgdl_" + std::to_string(i);
    names[l.c_v_agc()] = "C_v_agc";
    for (int i = 1; i <= n; ++i) names[l.c_v_agdl(i)] = "C_v_agdl_" + std::to_string(i);
    names[l.c_v_acl()] = "C_v_acl";
    names[l.c_v_ccl()] = "C_v_ccl";
    for (int i = 1; i <= n; ++i) names[l.c_v_cgdl(i)] = "C_v_cgdl_" + std::to_string(i);
    names[l.c_v_cgc()] = "C_v_cgc";
    names[l.c_h2_agc()] = "C_H2_agc";
    for (int i = 1; i <= n; ++i) names[l.c_h2_agdl(i)] = "C_H2_agdl_" + std::to_string(i);
    names[l.c_h2_acl()] = "C_H2_acl";
    names[l.c_o2_ccl()] = "C_O2_ccl";
    for (int i = 1; i <= n; ++i) names[l.c_o2_cgdl(i)] = "C_O2_cgdl_" + std::to_string(i);
    names[l.c_o2_cgc()] = "C_O2_cgc";
    names[l.c_n2()] = "C_N2";
    names[l.p_asm()] = "P_asm";
    names[l.p_aem()] = "P_aem";
    names[l.phi_asm()] = "Phi_asm";
    names[l.phi_aem()] = "Phi_aem";
    names[l.p_csm()] = "P_csm";
    names[l.p_cem()] = "P_cem";
    names[l.phi_csm()] = "Phi_csm";
    names[l.phi_cem()] = "Phi_cem";
    names[l.w_cp()] = "W_cp";
    names[l.w_c_inj()] = "W_c_inj";
    names[l.a_bp_c()] = "A_bp_c";
    return l;
}

std::size_t DiscretizationLayout::s_agdl(int i) const {
    assert(i >= 2 && i <= n_gdl_);
    return 3 + static_cast<std::size_t>(i - 2);
}

std::size_t DiscretizationLayout::s_cgdl(int i) const {
    assert(i >= 1 && i <= n_gdl_ - 1);
    return s_ccl() + 1 + static_cast<std::size_t>(i - 1);
}

std::size_t DiscretizationLayout::c_v_agdl(int i) const {
    assert(i >= 1 && i <= n_gdl_);
    return cv_begin_ + static_cast<std::size_t>(i);
}

std::size_t DiscretizationLayout::c_v_cgdl(int i) const {
    assert(i >= 1 && i <= n_gdl_);
    return c_v_ccl() + static_cast<std::size_t>(i);
}

std::size_t DiscretizationLayout::c_h2_agdl(int i) const {
    assert(i >= 1 && i <= n_gdl_);
    return ch2_begin_ + static_cast<std::size_t>(i);
}

std::size_t DiscretizationLayout::c_o2_cgdl(int i) const {
    assert(i >= 1 && i <= n_gdl_);
    return co2_begin_ + static_cast<std::size_t>(i);
}

std::vector<double> DiscretizationLayout::default_atol() const {
    std::vector<double> atol(total_len_);
    for (std::size_t i = 0; i < total_len_; ++i) {
        if (i < 3) {
            atol[i] = 1e-8;                                   // lambda
        } else if (i < cv_begin_) {
            atol[i] = 1e-9;                                   // s
        } else if (i < bop_begin_) {
            atol[i] = 1e-8;                                   // concentrations
        } else if (i == w_cp() || i == w_c_inj()) {
            atol[i] = 1e-12;                                  // mass flows
        } else if (i == a_bp_c()) {
            // loose enough to step across the valve travel stops
            atol[i] = 1e-8;                                   // valve area
        } else if (i == phi_asm() || i == phi_aem() || i == phi_csm() || i == phi_cem()) {
            atol[i] = 1e-8;                                   // humidities
        } else {
            atol[i] = 1e-2;                                   // pressures
        }
    }
    return atol;
}

std::vector<double> DiscretizationLayout::state_scales() const {
    std::vector<double> scale(total_len_);
    for (std::size_t i = 0; i < total_len_; ++i) {
        if (i < 3) {
            scale[i] = 10.0;    // lambda
        } else if (i < cv_begin_) {
            scale[i] = 0.1;     // s
        } else if (i < bop_begin_) {
            scale[i] = 10.0;    // concentrations (mol m^-3)
        } else if (i == w_cp() || i == w_c_inj()) {
            scale[i] = 1e-4;    // kg s^-1
        } else if (i == a_bp_c()) {
            scale[i] = 1e-3;    // m^2
        } else if (i == phi_asm() || i == phi_aem() || i == phi_csm() || i == phi_cem()) {
            scale[i] = 1.0;
        } else {
            scale[i] = 1e5;     // Pa
        }
    }
    return scale;
}

namespace {

void require_size(std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
        std::ostringstream os;
        os << "state block '" << what << "' has length " << got << ", expected " << want;
        throw ConfigError(os.str());
    }
}

} // namespace

std::vector<double> pack(const StateBlocks& b, const DiscretizationLayout& l) {
    const int n = l.n_gdl();
    require_size(b.s_agdl.size(), static_cast<std::size_t>(n - 1), "s_agdl");
    require_size(b.s_cgdl.size(), static_cast<std::size_t>(n - 1), "s_cgdl");
    require_size(b.c_v_agdl.size(), static_cast<std::size_t>(n), "c_v_agdl");
    require_size(b.c_v_cgdl.size(), static_cast<std::size_t>(n), "c_v_cgdl");
    require_size(b.c_h2_agdl.size(), static_cast<std::size_t>(n), "c_h2_agdl");
    require_size(b.c_o2_cgdl.size(), static_cast<std::size_t>(n), "c_o2_cgdl");

    std::vector<double> y(l.total_len());
    y[l.lambda_acl()] = b.lambda_acl;
    y[l.lambda_mem()] = b.lambda_mem;
    y[l.lambda_ccl()] = b.lambda_ccl;
    for (int i = 2; i <= n; ++i) y[l.s_agdl(i)] = b.s_agdl[i - 2];
    y[l.s_acl()] = b.s_acl;
    y[l.s_ccl()] = b.s_ccl;
    for (int i = 1; i <= n - 1; ++i) y[l.s_cgdl(i)] = b.s_cgdl[i - 1];
    y[l.c_v_agc()] = b.c_v_agc;
    for (int i = 1; i <= n; ++i) y[l.c_v_agdl(i)] = b.c_v_agdl[i - 1];
    y[l.c_v_acl()] = b.c_v_acl;
    y[l.c_v_ccl()] = b.c_v_ccl;
    for (int i = 1; i <= n; ++i) y[l.c_v_cgdl(i)] = b.c_v_cgdl[i - 1];
    y[l.c_v_cgc()] = b.c_v_cgc;
    y[l.c_h2_agc()] = b.c_h2_agc;
    for (int i = 1; i <= n; ++i) y[l.c_h2_agdl(i)] = b.c_h2_agdl[i - 1];
    y[l.c_h2_acl()] = b.c_h2_acl;
    y[l.c_o2_ccl()] = b.c_o2_ccl;
    for (int i = 1; i <= n; ++i) y[l.c_o2_cgdl(i)] = b.c_o2_cgdl[i - 1];
    y[l.c_o2_cgc()] = b.c_o2_cgc;
    y[l.c_n2()] = b.c_n2;
    y[l.p_asm()] = b.p_asm;
    y[l.p_aem()] = b.p_aem;
    y[l.phi_asm()] = b.phi_asm;
    y[l.phi_aem()] = b.phi_aem;
    y[l.p_csm()] = b.p_csm;
    y[l.p_cem()] = b.p_cem;
    y[l.phi_csm()] = b.phi_csm;
    y[l.phi_cem()] = b.phi_cem;
    y[l.w_cp()] = b.w_cp;
    y[l.w_c_inj()] = b.w_c_inj;
    y[l.a_bp_c()] = b.a_bp_c;
    return y;
}

StateBlocks unpack(std::span<const double> y, const DiscretizationLayout& l) {
    require_size(y.size(), l.total_len(), "flat state vector");
    const int n = l.n_gdl();
    StateBlocks b;
    b.lambda_acl = y[l.lambda_acl()];
    b.lambda_mem = y[l.lambda_mem()];
    b.lambda_ccl = y[l.lambda_ccl()];
    b.s_agdl.resize(n - 1);
    for (int i = 2; i <= n; ++i) b.s_agdl[i - 2] = y[l.s_agdl(i)];
    b.s_acl = y[l.s_acl()];
    b.s_ccl = y[l.s_ccl()];
    b.s_cgdl.resize(n - 1);
    for (int i = 1; i <= n - 1; ++i) b.s_cgdl[i - 1] = y[l.s_cgdl(i)];
    b.c_v_agc = y[l.c_v_agc()];
    b.c_v_agdl.resize(n);
    for (int i = 1; i <= n; ++i) b.c_v_agdl[i - 1] = y[l.c_v_agdl(i)];
    b.c_v_acl = y[l.c_v_acl()];
    b.c_v_ccl = y[l.c_v_ccl()];
    b.c_v_cgdl.resize(n);
    for (int i = 1; i <= n; ++i) b.c_v_cgdl[i - 1] = y[l.c_v_cgdl(i)];
    b.c_v_cgc = y[l.c_v_cgc()];
    b.c_h2_agc = y[l.c_h2_agc()];
    b.c_h2_agdl.resize(n);
    for (int i = 1; i <= n; ++i) b.c_h2_agdl[i - 1] = y[l.c_h2_agdl(i)];
    b.c_h2_acl = y[l.c_h2_acl()];
    b.c_o2_ccl = y[l.c_o2_ccl()];
    b.c_o2_cgdl.resize(n);
    for (int i = 1; i <= n; ++i) b.c_o2_cgdl[i - 1] = y[l.c_o2_cgdl(i)];
    b.c_o2_cgc = y[l.c_o2_cgc()];
    b.c_n2 = y[l.c_n2()];
    b.p_asm = y[l.p_asm()];
    b.p_aem = y[l.p_aem()];
    b.phi_asm = y[l.phi_asm()];
    b.phi_aem = y[l.phi_aem()];
    b.p_csm = y[l.p_csm()];
    b.p_cem = y[l.p_cem()];
    b.phi_csm = y[l.phi_csm()];
    b.phi_cem = y[l.phi_cem()];
    b.w_cp = y[l.w_cp()];
    b.w_c_inj = y[l.w_c_inj()];
    b.a_bp_c = y[l.a_bp_c()];
    return b;
}

} // namespace pemsim

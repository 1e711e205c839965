#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pemsim/parameters.hpp"

namespace pemsim {

// Maps every ODE state to a slot in the flat state vector. Block order:
//   lambda_acl, lambda_mem, lambda_ccl,
//   s_agdl[2..n], s_acl, s_ccl, s_cgdl[1..n-1],
//   C_v (agc, agdl[1..n], acl, ccl, cgdl[1..n], cgc),
//   C_H2 (agc, agdl[1..n], acl),
//   C_O2 (ccl, cgdl[1..n], cgc),
//   C_N2,
//   P_asm, P_aem, Phi_asm, Phi_aem, P_csm, P_cem, Phi_csm, Phi_cem,
//   W_cp, W_c_inj, A_bp_c
// The boundary liquid nodes s_agdl_1 and s_cgdl_n are held at zero
// algebraically and have no slot.
class DiscretizationLayout {
public:
    // n_gdl from the rule floor(H_gdl / (2 H_cl)) unless params.geometry.n_gdl
    // overrides it. Throws ConfigError when the geometry gives n_gdl < 2.
    static DiscretizationLayout build(const ParameterSet& params);

    int n_gdl() const { return n_gdl_; }
    double dx_gdl() const { return dx_gdl_; }
    double H_cl() const { return H_cl_; }
    double H_mem() const { return H_mem_; }
    std::size_t total_len() const { return total_len_; }

    // Index accessors. GDL node indices are 1-based like the governing tables.
    std::size_t lambda_acl() const { return 0; }
    std::size_t lambda_mem() const { return 1; }
    std::size_t lambda_ccl() const { return 2; }

    std::size_t s_agdl(int i) const;  // i in [2, n]
    std::size_t s_acl() const { return 3 + (n_gdl_ - 1); }
    std::size_t s_ccl() const { return s_acl() + 1; }
    std::size_t s_cgdl(int i) const;  // i in [1, n-1]

    std::size_t c_v_agc() const { return cv_begin_; }
    std::size_t c_v_agdl(int i) const;  // i in [1, n]
    std::size_t c_v_acl() const { return cv_begin_ + 1 + n_gdl_; }
    std::size_t c_v_ccl() const { return c_v_acl() + 1; }
    std::size_t c_v_cgdl(int i) const;  // i in [1, n]
    std::size_t c_v_cgc() const { return cv_begin_ + 2 * n_gdl_ + 3; }

    std::size_t c_h2_agc() const { return ch2_begin_; }
    std::size_t c_h2_agdl(int i) const;  // i in [1, n]
    std::size_t c_h2_acl() const { return ch2_begin_ + 1 + n_gdl_; }

    std::size_t c_o2_ccl() const { return co2_begin_; }
    std::size_t c_o2_cgdl(int i) const;  // i in [1, n]
    std::size_t c_o2_cgc() const { return co2_begin_ + 1 + n_gdl_; }

    std::size_t c_n2() const { return cn2_; }

    std::size_t p_asm() const { return bop_begin_ + 0; }
    std::size_t p_aem() const { return bop_begin_ + 1; }
    std::size_t phi_asm() const { return bop_begin_ + 2; }
    std::size_t phi_aem() const { return bop_begin_ + 3; }
    std::size_t p_csm() const { return bop_begin_ + 4; }
    std::size_t p_cem() const { return bop_begin_ + 5; }
    std::size_t phi_csm() const { return bop_begin_ + 6; }
    std::size_t phi_cem() const { return bop_begin_ + 7; }
    std::size_t w_cp() const { return bop_begin_ + 8; }
    std::size_t w_c_inj() const { return bop_begin_ + 9; }
    std::size_t a_bp_c() const { return bop_begin_ + 10; }

    std::size_t s_begin() const { return 3; }
    std::size_t s_end() const { return cv_begin_; }
    std::size_t bop_begin() const { return bop_begin_; }

    const std::string& state_name(std::size_t idx) const { return names_.at(idx); }
    const std::vector<std::string>& state_names() const { return names_; }

    // Per-state absolute tolerances / magnitude scales for the integrator and
    // steady-state detection.
    std::vector<double> default_atol() const;
    std::vector<double> state_scales() const;

private:
    int n_gdl_ = 0;
    double dx_gdl_ = 0, H_cl_ = 0, H_mem_ = 0;
    std::size_t cv_begin_ = 0, ch2_begin_ = 0, co2_begin_ = 0, cn2_ = 0, bop_begin_ = 0;
    std::size_t total_len_ = 0;
    std::vector<std::string> names_;
};

// State vector exploded into named blocks; the slow-path counterpart of the
// flat vector used by the integrator.
struct StateBlocks {
    double lambda_acl = 0, lambda_mem = 0, lambda_ccl = 0;
    std::vector<double> s_agdl;  // nodes 2..n
    double s_acl = 0, s_ccl = 0;
    std::vector<double> s_cgdl;  // nodes 1..n-1
    double c_v_agc = 0;
    std::vector<double> c_v_agdl;  // nodes 1..n
    double c_v_acl = 0, c_v_ccl = 0;
    std::vector<double> c_v_cgdl;  // nodes 1..n
    double c_v_cgc = 0;
    double c_h2_agc = 0;
    std::vector<double> c_h2_agdl;  // nodes 1..n
    double c_h2_acl = 0;
    double c_o2_ccl = 0;
    std::vector<double> c_o2_cgdl;  // nodes 1..n
    double c_o2_cgc = 0;
    double c_n2 = 0;
    double p_asm = 0, p_aem = 0, phi_asm = 0, phi_aem = 0;
    double p_csm = 0, p_cem = 0, phi_csm = 0, phi_cem = 0;
    double w_cp = 0, w_c_inj = 0, a_bp_c = 0;
};

// pack/unpack are exact inverses; both throw ConfigError on a size mismatch.
std::vector<double> pack(const StateBlocks& blocks, const DiscretizationLayout& layout);
StateBlocks unpack(std::span<const double> flat, const DiscretizationLayout& layout);

} // namespace pemsim

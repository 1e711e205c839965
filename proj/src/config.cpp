#include "pemsim/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "pemsim/errors.hpp"

namespace pemsim {

namespace {

struct Entry {
    const char* section;
    const char* key;
    std::function<double(const Configuration&)> get;
    std::function<void(Configuration&, double)> set;
};

// One row per addressable field, in canonical output order.
std::vector<Entry> registry() {
    auto num = [](auto getter, auto setter) {
        return std::pair{getter, setter};
    };
    (void)num;
    std::vector<Entry> r;
    auto add = [&r](const char* sec, const char* key,
                    std::function<double(const Configuration&)> get,
                    std::function<void(Configuration&, double)> set) {
        r.push_back({sec, key, std::move(get), std::move(set)});
    };

#define FIELD(sec, key, expr)                                              \
    add(sec, key, [](const Configuration& c) { return double(c.expr); },  \
        [](Configuration& c, double v) {                                   \
            c.expr = static_cast<decltype(c.expr)>(v);                     \
        })

    FIELD("geometry", "A_act", params.geometry.A_act);
    FIELD("geometry", "H_mem", params.geometry.H_mem);
    FIELD("geometry", "H_cl", params.geometry.H_cl);
    FIELD("geometry", "H_gdl", params.geometry.H_gdl);
    FIELD("geometry", "H_gc", params.geometry.H_gc);
    FIELD("geometry", "W_gc", params.geometry.W_gc);
    FIELD("geometry", "L_gc", params.geometry.L_gc);
    FIELD("geometry", "n_cell", params.geometry.n_cell);
    FIELD("geometry", "n_gdl", params.geometry.n_gdl);

    FIELD("membrane", "rho_mem", params.membrane.rho_mem);
    FIELD("membrane", "M_eq", params.membrane.M_eq);
    FIELD("membrane", "eps_mc", params.membrane.eps_mc);
    FIELD("membrane", "tau", params.membrane.tau);

    FIELD("porous", "eps_gdl", params.porous.eps_gdl);
    FIELD("porous", "eps_cl", params.porous.eps_cl);
    FIELD("porous", "eps_c", params.porous.eps_c);
    FIELD("porous", "eps_p", params.porous.eps_p);
    FIELD("porous", "alpha", params.porous.alpha);
    FIELD("porous", "beta1", params.porous.beta1);
    FIELD("porous", "beta2", params.porous.beta2);
    FIELD("porous", "r_f", params.porous.r_f);
    FIELD("porous", "theta_c_gdl", params.porous.theta_c_gdl);
    FIELD("porous", "theta_c_cl", params.porous.theta_c_cl);
    FIELD("porous", "e", params.porous.e);

    FIELD("kinetics", "i0_c_ref", params.kinetics.i0_c_ref);
    FIELD("kinetics", "kappa_c", params.kinetics.kappa_c);
    FIELD("kinetics", "kappa_co", params.kinetics.kappa_co);
    FIELD("kinetics", "alpha_c", params.kinetics.alpha_c);
    FIELD("kinetics", "E0", params.kinetics.E0);
    FIELD("kinetics", "P_ref", params.kinetics.P_ref);
    FIELD("kinetics", "C_O2_ref", params.kinetics.C_O2_ref);
    FIELD("kinetics", "E_act", params.kinetics.E_act);
    FIELD("kinetics", "E_act_H2_v", params.kinetics.E_act_H2_v);
    FIELD("kinetics", "E_act_H2_l", params.kinetics.E_act_H2_l);
    FIELD("kinetics", "E_act_O2_v", params.kinetics.E_act_O2_v);
    FIELD("kinetics", "E_act_O2_l", params.kinetics.E_act_O2_l);
    FIELD("kinetics", "T_ref", params.kinetics.T_ref);
    FIELD("kinetics", "a_slim", params.kinetics.a_slim);
    FIELD("kinetics", "b_slim", params.kinetics.b_slim);
    FIELD("kinetics", "a_switch", params.kinetics.a_switch);
    FIELD("kinetics", "R_e", params.kinetics.R_e);

    FIELD("water", "gamma_cond", params.water.gamma_cond);
    FIELD("water", "gamma_evap", params.water.gamma_evap);
    FIELD("water", "K_shape", params.water.K_shape);
    FIELD("water", "rho_H2O", params.water.rho_H2O);
    FIELD("water", "nu_l", params.water.nu_l);
    FIELD("water", "V_w", params.water.V_w);
    FIELD("water", "V_mem", params.water.V_mem);

    FIELD("bop", "tau_cp", params.bop.tau_cp);
    FIELD("bop", "tau_hum", params.bop.tau_hum);
    FIELD("bop", "K_p", params.bop.K_p);
    FIELD("bop", "K_d", params.bop.K_d);
    FIELD("bop", "C_D", params.bop.C_D);
    FIELD("bop", "k_sm_in", params.bop.k_sm_in);
    FIELD("bop", "k_sm_out", params.bop.k_sm_out);
    FIELD("bop", "k_em_in", params.bop.k_em_in);
    FIELD("bop", "V_sm", params.bop.V_sm);
    FIELD("bop", "V_em", params.bop.V_em);
    FIELD("bop", "A_T", params.bop.A_T);
    FIELD("bop", "k_purge", params.bop.k_purge);
    FIELD("bop", "gamma_H2", params.bop.gamma_H2);
    FIELD("bop", "gamma_a", params.bop.gamma_a);
    FIELD("bop", "M_H2", params.bop.M_H2);
    FIELD("bop", "M_H2O", params.bop.M_H2O);
    FIELD("bop", "M_O2", params.bop.M_O2);
    FIELD("bop", "M_N2", params.bop.M_N2);
    FIELD("bop", "F", params.bop.F);
    FIELD("bop", "R", params.bop.R);

    FIELD("ambient", "T_ext", params.ambient.T_ext);
    FIELD("ambient", "P_ext", params.ambient.P_ext);
    FIELD("ambient", "Phi_ext", params.ambient.Phi_ext);
    FIELD("ambient", "y_O2_ext", params.ambient.y_O2_ext);

    FIELD("operating", "T_fc", oc.T_fc);
    FIELD("operating", "P_a_des", oc.P_a_des);
    FIELD("operating", "P_c_des", oc.P_c_des);
    FIELD("operating", "S_a", oc.S_a);
    FIELD("operating", "S_c", oc.S_c);
    FIELD("operating", "Phi_a_des", oc.Phi_a_des);
    FIELD("operating", "Phi_c_des", oc.Phi_c_des);
#undef FIELD
    return r;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

} // namespace

Configuration parse_config(const std::string& text, const std::string& origin) {
    Configuration cfg{ParameterSet::eh31(), OperatingConditions::eh31()};
    const auto reg = registry();

    std::istringstream in(text);
    std::string line, section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(origin + ":" + std::to_string(line_no)
                                  + ": malformed section header '" + line + "'");
            }
            section = trim(line.substr(1, line.size() - 2));
            bool known = false;
            for (const auto& e : reg) known = known || section == e.section;
            if (!known) {
                throw ConfigError(origin + ":" + std::to_string(line_no)
                                  + ": unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(line_no)
                              + ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": key '" + key
                              + "' appears before any section header");
        }
        const Entry* entry = nullptr;
        for (const auto& e : reg) {
            if (section == e.section && key == e.key) {
                entry = &e;
                break;
            }
        }
        if (!entry) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": unknown key '" + key
                              + "' in section [" + section + "]");
        }
        try {
            std::size_t used = 0;
            const double v = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument("trailing characters");
            entry->set(cfg, v);
        } catch (const std::exception&) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": value '" + value
                              + "' for key '" + key + "' is not a number");
        }
    }
    cfg.params.validate();
    cfg.oc.validate(cfg.params);
    return cfg;
}

Configuration load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string dump_config(const Configuration& config) {
    const auto reg = registry();
    std::ostringstream out;
    std::string section;
    char buf[64];
    for (const auto& e : reg) {
        if (section != e.section) {
            if (!section.empty()) out << "\n";
            section = e.section;
            out << "[" << section << "]\n";
        }
        std::snprintf(buf, sizeof buf, "%.17g", e.get(config));
        out << e.key << " = " << buf << "\n";
    }
    return out.str();
}

std::uint64_t config_hash(const Configuration& config) {
    const std::string text = dump_config(config);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace pemsim

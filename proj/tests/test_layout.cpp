#include <random>
#include <set>

#include "doctest.h"
#include "pemsim/errors.hpp"
#include "pemsim/layout.hpp"

using namespace pemsim;

TEST_CASE("node count rule") {
    auto p = ParameterSet::eh31();
    // H_gdl = 2e-4, H_cl = 1e-5 -> floor(20/2) = 10
    CHECK(DiscretizationLayout::build(p).n_gdl() == 10);

    p.geometry.H_gdl = 4.0 * p.geometry.H_cl;
    CHECK(DiscretizationLayout::build(p).n_gdl() == 2);

    p.geometry.H_gdl = 3.9 * p.geometry.H_cl;
    CHECK_THROWS_AS(DiscretizationLayout::build(p), ConfigError);

    // explicit override wins
    p.geometry.H_gdl = 2e-4;
    p.geometry.n_gdl = 7;
    CHECK(DiscretizationLayout::build(p).n_gdl() == 7);
}

TEST_CASE("state vector length") {
    auto p = ParameterSet::eh31();
    auto l = DiscretizationLayout::build(p);
    // 3 lambda + 20 s + 24 C_v + 12 C_H2 + 12 C_O2 + 1 C_N2 + 11 BoP
    CHECK(l.total_len() == 83);

    // strictly increasing as 6 n + 23
    std::size_t prev = 0;
    for (int n = 2; n <= 24; ++n) {
        p.geometry.n_gdl = n;
        auto ln = DiscretizationLayout::build(p);
        CHECK(ln.total_len() == static_cast<std::size_t>(6 * n + 23));
        CHECK(ln.total_len() > prev);
        prev = ln.total_len();
    }
}

TEST_CASE("index map is a bijection") {
    auto p = ParameterSet::eh31();
    for (int n : {2, 3, 10}) {
        p.geometry.n_gdl = n;
        auto l = DiscretizationLayout::build(p);
        std::set<std::size_t> seen;
        auto touch = [&](std::size_t idx) {
            CHECK(idx < l.total_len());
            CHECK(seen.insert(idx).second);
        };
        touch(l.lambda_acl());
        touch(l.lambda_mem());
        touch(l.lambda_ccl());
        for (int i = 2; i <= n; ++i) touch(l.s_agdl(i));
        touch(l.s_acl());
        touch(l.s_ccl());
        for (int i = 1; i <= n - 1; ++i) touch(l.s_cgdl(i));
        touch(l.c_v_agc());
        for (int i = 1; i <= n; ++i) touch(l.c_v_agdl(i));
        touch(l.c_v_acl());
        touch(l.c_v_ccl());
        for (int i = 1; i <= n; ++i) touch(l.c_v_cgdl(i));
        touch(l.c_v_cgc());
        touch(l.c_h2_agc());
        for (int i = 1; i <= n; ++i) touch(l.c_h2_agdl(i));
        touch(l.c_h2_acl());
        touch(l.c_o2_ccl());
        for (int i = 1; i <= n; ++i) touch(l.c_o2_cgdl(i));
        touch(l.c_o2_cgc());
        touch(l.c_n2());
        touch(l.p_asm());
        touch(l.p_aem());
        touch(l.phi_asm());
        touch(l.phi_aem());
        touch(l.p_csm());
        touch(l.p_cem());
        touch(l.phi_csm());
        touch(l.phi_cem());
        touch(l.w_cp());
        touch(l.w_c_inj());
        touch(l.a_bp_c());
        CHECK(seen.size() == l.total_len());

        // every slot carries a unique name
        std::set<std::string> names(l.state_names().begin(), l.state_names().end());
        CHECK(names.size() == l.total_len());
    }
}

TEST_CASE("pack and unpack round trip") {
    auto p = ParameterSet::eh31();
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int n : {2, 5, 10}) {
        p.geometry.n_gdl = n;
        auto l = DiscretizationLayout::build(p);
        for (int rep = 0; rep < 20; ++rep) {
            std::vector<double> flat(l.total_len());
            for (auto& v : flat) v = u(rng);
            StateBlocks b = unpack(flat, l);
            std::vector<double> round = pack(b, l);
            CHECK(round == flat); // bit exact
        }
    }
}

TEST_CASE("pack and unpack reject wrong sizes") {
    auto p = ParameterSet::eh31();
    auto l = DiscretizationLayout::build(p);
    std::vector<double> wrong(l.total_len() - 1, 0.0);
    CHECK_THROWS_AS(unpack(wrong, l), ConfigError);

    StateBlocks b = unpack(std::vector<double>(l.total_len(), 0.0), l);
    b.s_agdl.pop_back();
    CHECK_THROWS_AS(pack(b, l), ConfigError);

    // zero vector maps to all-zero blocks
    StateBlocks z = unpack(std::vector<double>(l.total_len(), 0.0), l);
    CHECK(z.lambda_mem == 0.0);
    CHECK(z.c_n2 == 0.0);
    for (double v : z.c_v_agdl) CHECK(v == 0.0);
}

#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "pemsim/config.hpp"
#include "pemsim/csv.hpp"
#include "pemsim/errors.hpp"
#include "pemsim/scenario.hpp"

using namespace pemsim;

TEST_CASE("current profile") {
    auto p = CurrentProfile::parse("0:0,10:0.5,500:1.5", 0.01);
    CHECK(p.at(0.0) == doctest::Approx(0.0));
    CHECK(p.at(9.999) == doctest::Approx(0.0));
    CHECK(p.at(10.005) == doctest::Approx(0.25e4)); // mid-ramp
    CHECK(p.at(10.02) == doctest::Approx(0.5e4));
    CHECK(p.at(499.0) == doctest::Approx(0.5e4));
    CHECK(p.at(1000.0) == doctest::Approx(1.5e4));

    auto bp = p.breakpoints(1000.0);
    REQUIRE(bp.size() == 4);
    CHECK(bp[0] == doctest::Approx(10.0));
    CHECK(bp[1] == doctest::Approx(10.01));
    CHECK(bp[2] == doctest::Approx(500.0));
    CHECK(bp[3] == doctest::Approx(500.01));

    // ideal steps have no ramp breakpoints
    auto q = CurrentProfile::parse("0:0.1,50:0.2", 0.0);
    CHECK(q.at(50.0) == doctest::Approx(0.2e4));
    CHECK(q.breakpoints(100.0).size() == 1);

    CHECK_THROWS_AS(CurrentProfile::parse("5:0.1", 0.0), ConfigError);
    CHECK_THROWS_AS(CurrentProfile::parse("0:0.1,0:0.2", 0.0), ConfigError);
    CHECK_THROWS_AS(CurrentProfile::parse("0:-0.1", 0.0), ConfigError);
    CHECK_THROWS_AS(CurrentProfile::parse("0;0.1", 0.0), ConfigError);
}

TEST_CASE("delta U max") {
    PolarizationCurve sim;
    for (double i = 1.0; i <= 5.0; i += 1.0) {
        PolarizationPoint pt;
        pt.i_fc = i * 1e3;
        pt.U_cell = 1.0 - 0.05 * i;
        pt.converged = true;
        sim.points.push_back(pt);
    }
    // identical samples -> zero deviation
    std::vector<CurvePoint> exact;
    for (const auto& p : sim.points) exact.push_back({p.i_fc, p.U_cell});
    CHECK(delta_u_max(sim, exact) == doctest::Approx(0.0).epsilon(1e-12));

    // a uniform +1 percent offset reads as exactly 1
    std::vector<CurvePoint> offset;
    for (const auto& p : sim.points) offset.push_back({p.i_fc, p.U_cell / 1.01});
    CHECK(delta_u_max(sim, offset) == doctest::Approx(1.0).epsilon(1e-9));

    // hand-computed interpolated case: i = 1500 -> U_sim = 0.925
    std::vector<CurvePoint> mid{{1.5e3, 0.9}};
    CHECK(delta_u_max(sim, mid) == doctest::Approx((0.925 - 0.9) / 0.9 * 100.0).epsilon(1e-9));

    // no overlap is an error
    std::vector<CurvePoint> outside{{9e3, 0.5}};
    CHECK_THROWS_AS(delta_u_max(sim, outside), ModelError);
}

TEST_CASE("curve csv round trip") {
    namespace fs = std::filesystem;
    const auto path = fs::temp_directory_path() / "pemsim_curve_test.csv";
    std::vector<CurvePoint> pts{{0.1e4, 0.95}, {0.5e4, 0.82}, {1.5e4, 0.61}};
    write_curve_csv(path.string(), pts, {{"P_des_bar", 2.0}});
    auto file = read_curve_csv(path.string());
    REQUIRE(file.points.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(file.points[k].i_fc == doctest::Approx(pts[k].i_fc).epsilon(1e-9));
        CHECK(file.points[k].U_cell == doctest::Approx(pts[k].U_cell).epsilon(1e-12));
    }
    REQUIRE(file.metadata.count("P_des_bar") == 1);
    CHECK(file.metadata.at("P_des_bar") == doctest::Approx(2.0));
    fs::remove(path);

    // header enforcement
    const auto bad = fs::temp_directory_path() / "pemsim_bad_curve.csv";
    {
        std::FILE* fp = std::fopen(bad.string().c_str(), "w");
        std::fprintf(fp, "current,voltage\n0.1,0.9\n");
        std::fclose(fp);
    }
    CHECK_THROWS_AS(read_curve_csv(bad.string()), ConfigError);
    fs::remove(bad);
}

TEST_CASE("config parsing") {
    // defaults load and validate
    auto cfg = parse_config("");
    CHECK(cfg.params.geometry.n_cell == 5);
    CHECK(cfg.oc.T_fc == doctest::Approx(347.15));

    // overrides by symbol name
    auto cfg2 = parse_config("[geometry]\nn_gdl = 4\n[operating]\nP_c_des = 2.5e5\n"
                             "[kinetics]\na_slim = 0.06\n");
    CHECK(cfg2.params.geometry.n_gdl == 4);
    CHECK(cfg2.oc.P_c_des == doctest::Approx(2.5e5));
    CHECK(cfg2.params.kinetics.a_slim == doctest::Approx(0.06));

    // unknown key / section / malformed value are errors
    CHECK_THROWS_AS(parse_config("[geometry]\nH_bogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[nope]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[geometry]\nA_act = banana\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("A_act = 1\n"), ConfigError);

    // invalid physics rejected through validation
    CHECK_THROWS_AS(parse_config("[operating]\nS_a = 0.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[porous]\neps_gdl = 0.05\n"), ConfigError);
}

TEST_CASE("config hash stability") {
    auto a = parse_config("");
    auto b = parse_config("# comment only\n");
    CHECK(config_hash(a) == config_hash(b));
    auto c = parse_config("[operating]\nP_c_des = 2.5e5\n");
    CHECK(config_hash(a) != config_hash(c));
    // dump -> parse -> dump is a fixed point
    auto d = parse_config(dump_config(c));
    CHECK(dump_config(d) == dump_config(c));
}

TEST_CASE("calibration parameter application") {
    auto p = ParameterSet::eh31();
    apply_free_parameter(p, "i0_c_ref", 5.0);
    apply_free_parameter(p, "eps_gdl", 0.66);
    apply_free_parameter(p, "a_switch", 0.7);
    CHECK(p.kinetics.i0_c_ref == doctest::Approx(5.0));
    CHECK(p.porous.eps_gdl == doctest::Approx(0.66));
    CHECK(p.kinetics.a_switch == doctest::Approx(0.7));
    CHECK_THROWS_AS(apply_free_parameter(p, "bogus", 1.0), ConfigError);
    CHECK(CalibrationProblem::default_free_parameters().size() == 12);
}

TEST_CASE("constant zero profile holds the fixed point") {
    auto params = ParameterSet::eh31();
    params.kinetics.kappa_co = 0.0;
    params.geometry.n_gdl = 2;
    OperatingConditions oc = OperatingConditions::eh31();
    oc.P_a_des = oc.P_c_des = params.ambient.P_ext;
    oc.Phi_a_des = oc.Phi_c_des = 0.5;
    CellModel model(params, oc);

    TransientOptions topts;
    topts.output_dt = 20.0;
    topts.collect_derived = false;
    auto res = run_transient(model, CurrentProfile::constant(0.0), 100.0, topts);
    REQUIRE(!res.failed);
    REQUIRE(res.times.size() >= 2);
    const auto& y0 = res.states.front();
    const auto& yT = res.states.back();
    const auto scales = model.layout().state_scales();
    for (std::size_t i = 0; i < y0.size(); ++i) {
        INFO("state ", model.layout().state_name(i));
        CHECK(std::abs(yT[i] - y0[i]) < 1e-6 * scales[i]);
    }
}

#include <cmath>
#include <vector>

#include "doctest.h"
#include "pemsim/errors.hpp"
#include "pemsim/ode.hpp"

using namespace pemsim;

namespace {

RhsFn decay = [](double, std::span<const double> y, std::span<double> d) {
    for (std::size_t i = 0; i < y.size(); ++i) d[i] = -y[i];
};

IntegratorConfig tight() {
    IntegratorConfig cfg;
    cfg.rtol = 1e-6;
    cfg.atol = {1e-10};
    return cfg;
}

} // namespace

TEST_CASE("exponential decay") {
    std::vector<double> y0{1.0};
    auto tr = integrate(decay, y0, 0.0, 1.0, std::vector<double>{1.0}, tight());
    CHECK(tr.final_state[0] == doctest::Approx(std::exp(-1.0)).epsilon(10 * 1e-6));
    CHECK(tr.times.size() == 1);
    CHECK(tr.states[0][0] == doctest::Approx(tr.final_state[0]).epsilon(1e-12));
}

TEST_CASE("stiff diagonal system") {
    RhsFn stiff = [](double, std::span<const double> y, std::span<double> d) {
        d[0] = -1.0 * y[0];
        d[1] = -1e6 * y[1];
    };
    std::vector<double> y0{1.0, 1.0};
    auto tr = integrate(stiff, y0, 0.0, 1.0, {}, tight());
    CHECK(tr.final_state[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-4));
    CHECK(std::abs(tr.final_state[1]) < 1e-8); // e^-1e6 is zero for all purposes
    // an explicit method would need ~1e6 steps; the implicit one must not
    CHECK(tr.stats.steps < 2000);
}

TEST_CASE("dense output interpolation") {
    std::vector<double> y0{1.0};
    std::vector<double> out;
    for (double t = 0.1; t <= 0.95; t += 0.1) out.push_back(t);
    auto tr = integrate(decay, y0, 0.0, 1.0, out, tight());
    REQUIRE(tr.times.size() == out.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        CHECK(tr.states[k][0] == doctest::Approx(std::exp(-out[k])).epsilon(1e-4));
    }
}

TEST_CASE("finite difference jacobian") {
    // linear rhs: J = A exactly (to FD accuracy)
    RhsFn lin = [](double, std::span<const double> y, std::span<double> d) {
        d[0] = -2.0 * y[0] + 1.0 * y[1];
        d[1] = 0.5 * y[0] - 3.0 * y[1];
    };
    std::vector<double> y{1.0, 2.0};
    std::vector<double> floor{1.0, 1.0};
    auto J = jacobian_fd(lin, 0.0, y, std::sqrt(1e-16), floor);
    CHECK(J(0, 0) == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(J(0, 1) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(J(1, 0) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(J(1, 1) == doctest::Approx(-3.0).epsilon(1e-6));

    // a column of an ignored variable is zero
    RhsFn partial = [](double, std::span<const double> y_, std::span<double> d) {
        d[0] = -y_[0];
        d[1] = -y_[0];
    };
    auto J2 = jacobian_fd(partial, 0.0, y, std::sqrt(1e-16), floor);
    CHECK(J2(0, 1) == doctest::Approx(0.0));
    CHECK(J2(1, 1) == doctest::Approx(0.0));

    // non-finite columns are named
    RhsFn bad = [](double, std::span<const double> y_, std::span<double> d) {
        d[0] = (y_[1] > 1.0) ? std::numeric_limits<double>::quiet_NaN() : -y_[0];
        d[1] = -y_[1];
    };
    std::vector<double> yb{0.0, 1.0};
    CHECK_THROWS_AS(jacobian_fd(bad, 0.0, yb, 1e-2, floor,
                                [](std::size_t i) { return "state_" + std::to_string(i); }),
                    ModelError);
}

TEST_CASE("order of accuracy on fixed steps") {
    auto run = [&](int order, double dt) {
        IntegratorConfig cfg;
        cfg.rtol = 1e-12; // irrelevant in fixed mode
        cfg.atol = {1e-14};
        cfg.force_order = order;
        cfg.fixed_dt = dt;
        std::vector<double> y0{1.0};
        auto tr = integrate(decay, y0, 0.0, 1.0, {}, cfg);
        return std::abs(tr.final_state[0] - std::exp(-1.0));
    };
    for (int k : {1, 2}) {
        const double e1 = run(k, 1.0 / 64.0);
        const double e2 = run(k, 1.0 / 128.0);
        const double ratio = e1 / e2;
        INFO("order ", k, " error ratio ", ratio);
        CHECK(ratio > std::pow(2.0, k) * 0.8);
        CHECK(ratio < std::pow(2.0, k) * 1.35);
    }
}

TEST_CASE("projection keeps states inside bounds") {
    // equilibrium sits a hair below zero, the way roundoff drives s slightly
    // negative; the projection must absorb it without upsetting the history
    RhsFn pull = [](double, std::span<const double> y, std::span<double> d) {
        d[0] = -(y[0] + 1e-12);
    };
    ProjectFn clamp = [](double, std::span<double> y) {
        if (y[0] < 0.0) y[0] = 0.0;
    };
    std::vector<double> y0{1.0};
    bool ever_negative = false;
    AcceptFn watch = [&](double, std::span<const double> y) {
        ever_negative = ever_negative || y[0] < 0.0;
        return true;
    };
    IntegratorConfig cfg;
    cfg.rtol = 1e-6;
    cfg.atol = {1e-9};
    auto tr = integrate(pull, y0, 0.0, 60.0, {}, cfg, clamp, watch);
    CHECK(!ever_negative);
    CHECK(tr.final_state[0] >= 0.0);
    CHECK(tr.final_state[0] < 1e-8);
}

TEST_CASE("deterministic repetition") {
    RhsFn rhs = [](double t, std::span<const double> y, std::span<double> d) {
        d[0] = -y[0] + std::sin(t);
        d[1] = -50.0 * (y[1] - y[0]);
    };
    std::vector<double> y0{1.0, 0.0};
    std::vector<double> out{0.5, 1.0, 1.5, 2.0};
    auto a = integrate(rhs, y0, 0.0, 2.0, out, tight());
    auto b = integrate(rhs, y0, 0.0, 2.0, out, tight());
    CHECK(a.final_state == b.final_state); // bit identical
    for (std::size_t k = 0; k < out.size(); ++k) CHECK(a.states[k] == b.states[k]);
    CHECK(a.stats.steps == b.stats.steps);
}

TEST_CASE("steady state driver") {
    // relaxation toward a constant: returns the constant
    RhsFn relax = [](double, std::span<const double> y, std::span<double> d) {
        d[0] = -(y[0] - 3.0);
    };
    SteadyOptions opts;
    opts.t_max = 200.0;
    opts.check_interval = 1.0;
    opts.rate_tol = 1e-6;
    opts.ode = tight();
    std::vector<double> y0{0.0};
    auto res = steady_state(relax, y0, opts);
    CHECK(res.converged);
    CHECK(res.y[0] == doctest::Approx(3.0).epsilon(1e-5));

    // already steady: returns immediately
    std::vector<double> y_eq{3.0};
    auto res2 = steady_state(relax, y_eq, opts);
    CHECK(res2.converged);
    CHECK(res2.t_end == doctest::Approx(0.0));

    // divergence raises a solver failure
    RhsFn blow = [](double, std::span<const double> y, std::span<double> d) {
        d[0] = y[0];
    };
    std::vector<double> y1{1.0};
    SteadyOptions opts2 = opts;
    opts2.divergence_factor = 1e3;
    CHECK_THROWS_AS(steady_state(blow, y1, opts2), SolverFailure);

    // a system that never settles times out with converged = false
    RhsFn osc = [](double t, std::span<const double> y, std::span<double> d) {
        (void)y;
        d[0] = std::cos(t);
    };
    SteadyOptions opts3 = opts;
    opts3.t_max = 20.0;
    auto res3 = steady_state(osc, y0, opts3);
    CHECK(!res3.converged);
}

TEST_CASE("first order relaxation matches the closed form") {
    RhsFn relax = [](double, std::span<const double> y, std::span<double> d) {
        d[0] = (1.0 - y[0]) / 1.0;
    };
    std::vector<double> y0{0.0};
    std::vector<double> out{0.25, 0.5, 1.0, 2.0};
    auto tr = integrate(relax, y0, 0.0, 2.0, out, tight());
    for (std::size_t k = 0; k < out.size(); ++k) {
        CHECK(tr.states[k][0]
              == doctest::Approx(1.0 - std::exp(-out[k])).epsilon(1e-5));
    }
}

TEST_CASE("early stop through the inspector") {
    std::vector<double> y0{1.0};
    AcceptFn stopper = [](double t, std::span<const double>) { return t < 0.3; };
    auto tr = integrate(decay, y0, 0.0, 10.0, {}, tight(), {}, stopper);
    CHECK(tr.stopped_early);
    CHECK(tr.final_time < 10.0);
    CHECK(tr.final_time >= 0.3);
}

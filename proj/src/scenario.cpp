#include "pemsim/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "pemsim/errors.hpp"

namespace pemsim {

// --- current profile -------------------------------------------------------

double CurrentProfile::at(double t) const {
    if (segments.empty()) return 0.0;
    if (t <= segments.front().t_start) return segments.front().i_fc;
    std::size_t k = 0;
    while (k + 1 < segments.size() && t >= segments[k + 1].t_start) ++k;
    const double i_target = segments[k].i_fc;
    if (k == 0 || ramp_duration <= 0.0) return i_target;
    const double dt = t - segments[k].t_start;
    if (dt >= ramp_duration) return i_target;
    const double i_prev = segments[k - 1].i_fc;
    return i_prev + (i_target - i_prev) * dt / ramp_duration;
}

std::vector<double> CurrentProfile::breakpoints(double duration) const {
    std::vector<double> bp;
    for (std::size_t k = 1; k < segments.size(); ++k) {
        const double t = segments[k].t_start;
        if (t > 0 && t < duration) {
            bp.push_back(t);
            if (ramp_duration > 0 && t + ramp_duration < duration) {
                bp.push_back(t + ramp_duration);
            }
        }
    }
    return bp;
}

void CurrentProfile::validate() const {
    if (segments.empty()) throw ConfigError("current profile needs at least one segment");
    if (segments.front().t_start != 0.0) {
        throw ConfigError("current profile must start at t = 0");
    }
    for (std::size_t k = 0; k < segments.size(); ++k) {
        if (segments[k].i_fc < 0) throw ConfigError("current profile: i_fc must be >= 0");
        if (k > 0 && !(segments[k].t_start > segments[k - 1].t_start)) {
            throw ConfigError("current profile: segment times must be strictly increasing");
        }
    }
}

CurrentProfile CurrentProfile::constant(double i_fc) {
    CurrentProfile p;
    p.segments.push_back({0.0, i_fc});
    return p;
}

CurrentProfile CurrentProfile::parse(const std::string& text, double ramp_duration) {
    CurrentProfile p;
    p.ramp_duration = ramp_duration;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw ConfigError("current profile: expected 't:i' pairs, got '" + item + "'");
        }
        try {
            const double t = std::stod(item.substr(0, colon));
            const double i_acm2 = std::stod(item.substr(colon + 1));
            p.segments.push_back({t, i_acm2 * 1e4});
        } catch (const ConfigError&) {
            throw;
        } catch (...) {
            throw ConfigError("current profile: non-numeric entry '" + item + "'");
        }
    }
    p.validate();
    return p;
}

// --- shared helpers ---------------------------------------------------------

namespace {

IntegratorConfig fill_ode_defaults(const CellModel& model, IntegratorConfig cfg) {
    if (cfg.atol.empty()) cfg.atol = model.layout().default_atol();
    if (cfg.jac_floor.empty()) cfg.jac_floor = model.layout().state_scales();
    if (!cfg.state_name) {
        const auto* layout = &model.layout();
        cfg.state_name = [layout](std::size_t i) { return layout->state_name(i); };
    }
    return cfg;
}

ProjectFn make_projection(const CellModel& model) {
    const auto* L = &model.layout();
    const double a_t = model.params().bop.A_T;
    return [L, a_t](double, std::span<double> y) {
        for (std::size_t i = L->s_begin(); i < L->s_end(); ++i) {
            y[i] = std::clamp(y[i], 0.0, 0.999);
        }
        y[L->a_bp_c()] = std::clamp(y[L->a_bp_c()], 0.0, a_t);
    };
}

// Flags flooding (s > 0.99) and manifold condensation (Phi > 1.05) on
// accepted states; records each condition once.
struct StateWatch {
    const CellModel* model;
    std::vector<SimulationEvent>* events;
    bool flooding_seen = false;
    bool condensation_seen = false;

    bool operator()(double t, std::span<const double> y) {
        const auto& L = model->layout();
        if (!flooding_seen) {
            for (std::size_t i = L.s_begin(); i < L.s_end(); ++i) {
                if (y[i] > 0.99) {
                    events->push_back({t, "flooding: " + L.state_name(i) + " above 0.99"});
                    flooding_seen = true;
                    break;
                }
            }
        }
        if (!condensation_seen) {
            for (std::size_t idx : {L.phi_asm(), L.phi_aem(), L.phi_csm(), L.phi_cem()}) {
                if (y[idx] > 1.05) {
                    events->push_back({t, "manifold condensation: " + L.state_name(idx)
                                              + " above 1.05"});
                    condensation_seen = true;
                    break;
                }
            }
        }
        return true;
    }
};

SteadyOptions fill_steady_defaults(const CellModel& model, SteadyOptions opts) {
    opts.ode = fill_ode_defaults(model, opts.ode);
    if (opts.scale.empty()) opts.scale = model.layout().state_scales();
    return opts;
}

} // namespace

// --- transient ---------------------------------------------------------------

SimulationResult run_transient(const CellModel& model, const CurrentProfile& profile,
                               double duration, const TransientOptions& opts) {
    profile.validate();
    if (!(duration > 0)) throw ConfigError("run_transient: duration must be > 0");

    SimulationResult res;
    IntegratorConfig ode = fill_ode_defaults(model, opts.ode);
    const ProjectFn project = make_projection(model);
    StateWatch watch{&model, &res.events};

    RhsFn rhs = [&model, &profile](double t, std::span<const double> y, std::span<double> dydt) {
        model.rhs(t, y, profile.at(t), dydt);
    };
    AcceptFn inspect = [&watch](double t, std::span<const double> y) { return watch(t, y); };

    // Segment boundaries: integrator restarts with order reset at each one.
    std::vector<double> bounds = profile.breakpoints(duration);
    bounds.push_back(duration);

    std::vector<double> out_times;
    for (double t = 0.0; t <= duration + 1e-9; t += opts.output_dt) {
        out_times.push_back(std::min(t, duration));
    }
    if (out_times.back() < duration - 1e-9) out_times.push_back(duration);

    auto record_output = [&](double t, const std::vector<double>& y) {
        res.times.push_back(t);
        res.states.push_back(y);
        const double i_now = profile.at(t);
        res.i_fc.push_back(i_now);
        if (opts.collect_derived) {
            res.derived.push_back(model.derived(y, i_now));
            res.U_cell.push_back(res.derived.back().voltage.U_cell);
        } else {
            res.U_cell.push_back(model.voltage(y, i_now).U_cell);
        }
    };

    std::vector<double> y = model.initial_state();
    double t0 = 0.0;
    std::size_t out_idx = 0;
    try {
        for (double t1 : bounds) {
            if (!(t1 > t0)) continue;
            std::vector<double> seg_out;
            while (out_idx < out_times.size() && out_times[out_idx] <= t1 + 1e-9) {
                seg_out.push_back(out_times[out_idx]);
                ++out_idx;
            }
            Trajectory tr = integrate(rhs, y, t0, t1, seg_out, ode, project, inspect);
            res.stats.steps += tr.stats.steps;
            res.stats.rejected_steps += tr.stats.rejected_steps;
            res.stats.rhs_evals += tr.stats.rhs_evals;
            res.stats.jac_evals += tr.stats.jac_evals;
            res.stats.lu_factorizations += tr.stats.lu_factorizations;
            for (std::size_t k = 0; k < tr.times.size(); ++k) {
                record_output(tr.times[k], tr.states[k]);
            }
            y = tr.final_state;
            t0 = t1;
        }
    } catch (const SolverFailure& e) {
        res.failed = true;
        res.failure_time = e.failure_time();
        res.failure_message = e.what();
    } catch (const ModelError& e) {
        res.failed = true;
        res.failure_time = t0;
        res.failure_message = e.what();
    }
    return res;
}

// --- polarization --------------------------------------------------------------

PolarizationCurve polarization_curve(const CellModel& model, const std::vector<double>& i_grid,
                                     const PolarizationOptions& opts) {
    for (std::size_t k = 1; k < i_grid.size(); ++k) {
        if (!(i_grid[k] > i_grid[k - 1])) {
            throw ConfigError("polarization grid must be strictly increasing");
        }
    }
    SteadyOptions steady = fill_steady_defaults(model, opts.steady);
    const ProjectFn project = make_projection(model);

    PolarizationCurve curve;
    std::vector<double> y = model.initial_state();
    for (double i_fc : i_grid) {
        PolarizationPoint pt;
        pt.i_fc = i_fc;
        RhsFn rhs = [&model, i_fc](double t, std::span<const double> s, std::span<double> d) {
            model.rhs(t, s, i_fc, d);
        };
        try {
            SteadyResult sr = steady_state(rhs, y, steady, project);
            pt.breakdown = model.voltage(sr.y, i_fc);
            pt.U_cell = pt.breakdown.U_cell;
            pt.converged = sr.converged;
            if (opts.warm_start) y = sr.y;
        } catch (const SolverFailure&) {
            pt.converged = false;
        } catch (const ModelError&) {
            pt.converged = false; // starvation at this current
        }
        curve.points.push_back(pt);
        if (!pt.converged && !opts.warm_start) y = model.initial_state();
    }
    return curve;
}

double delta_u_max(const PolarizationCurve& sim, const std::vector<CurvePoint>& exp_points) {
    std::vector<PolarizationPoint> pts;
    for (const auto& p : sim.points) {
        if (p.converged) pts.push_back(p);
    }
    if (pts.size() < 2) throw ModelError("delta_u_max: need at least two converged points");
    double worst = -1.0;
    for (const auto& e : exp_points) {
        if (e.i_fc < pts.front().i_fc - 1e-9 || e.i_fc > pts.back().i_fc + 1e-9) continue;
        std::size_t k = 0;
        while (k + 2 < pts.size() && pts[k + 1].i_fc < e.i_fc) ++k;
        const double w = (e.i_fc - pts[k].i_fc) / (pts[k + 1].i_fc - pts[k].i_fc);
        const double u_sim = pts[k].U_cell + w * (pts[k + 1].U_cell - pts[k].U_cell);
        if (e.U_cell <= 0) throw ModelError("delta_u_max: experimental voltage must be > 0");
        worst = std::max(worst, std::abs(u_sim - e.U_cell) / e.U_cell * 100.0);
    }
    if (worst < 0) {
        throw ModelError("delta_u_max: no experimental point overlaps the simulated range");
    }
    return worst;
}

// --- calibration -----------------------------------------------------------------

std::vector<CalibrationProblem::FreeParameter> CalibrationProblem::default_free_parameters() {
    return {
        {"i0_c_ref", 0.1, 100.0}, {"kappa_co", 0.1, 100.0}, {"kappa_c", 0.2, 3.0},
        {"tau", 1.0, 4.0},        {"eps_mc", 0.15, 0.6},    {"R_e", 5e-8, 5e-6},
        {"e", 3.0, 5.5},          {"eps_c", 0.0, 0.6},      {"eps_gdl", 0.5, 0.9},
        {"a_slim", 0.01, 0.3},    {"b_slim", 0.01, 0.3},    {"a_switch", 0.3, 0.95},
    };
}

void apply_free_parameter(ParameterSet& params, const std::string& name, double value) {
    if (name == "i0_c_ref") params.kinetics.i0_c_ref = value;
    else if (name == "kappa_co") params.kinetics.kappa_co = value;
    else if (name == "kappa_c") params.kinetics.kappa_c = value;
    else if (name == "tau") params.membrane.tau = value;
    else if (name == "eps_mc") params.membrane.eps_mc = value;
    else if (name == "R_e") params.kinetics.R_e = value;
    else if (name == "e") params.porous.e = value;
    else if (name == "eps_c") params.porous.eps_c = value;
    else if (name == "eps_gdl") params.porous.eps_gdl = value;
    else if (name == "a_slim") params.kinetics.a_slim = value;
    else if (name == "b_slim") params.kinetics.b_slim = value;
    else if (name == "a_switch") params.kinetics.a_switch = value;
    else throw ConfigError("unknown calibration parameter '" + name + "'");
}

namespace {

double evaluate_candidate(const CalibrationProblem& problem, const std::vector<double>& x,
                          const CalibrationOptions& opts) {
    constexpr double kPenalty = 1e3;
    ParameterSet params = problem.base;
    for (std::size_t j = 0; j < x.size(); ++j) {
        apply_free_parameter(params, problem.free_parameters[j].name, x[j]);
    }
    double objective = 0.0;
    for (const auto& curve : problem.curves) {
        try {
            CellModel model(params, curve.oc);
            std::vector<double> grid;
            for (const auto& p : curve.points) grid.push_back(p.i_fc);
            std::sort(grid.begin(), grid.end());
            grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
            PolarizationOptions popts;
            popts.steady = opts.steady;
            PolarizationCurve sim = polarization_curve(model, grid, popts);
            for (const auto& p : sim.points) {
                if (!p.converged) return kPenalty;
            }
            objective = std::max(objective, delta_u_max(sim, curve.points));
        } catch (const std::exception&) {
            return kPenalty;
        }
    }
    return objective;
}

} // namespace

CalibrationResult calibrate(const CalibrationProblem& problem, const CalibrationOptions& opts) {
    if (problem.curves.size() < 2) {
        throw ConfigError("calibration requires at least two experimental curves");
    }
    const auto& fp = problem.free_parameters;
    if (fp.empty()) throw ConfigError("calibration requires at least one free parameter");
    for (const auto& f : fp) {
        if (!(f.lower < f.upper) || !std::isfinite(f.lower) || !std::isfinite(f.upper)) {
            throw ConfigError("calibration bounds for '" + f.name + "' are not sane");
        }
    }

    const std::size_t dim = fp.size();
    const int pop_n = std::max(opts.population, 5);
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<std::vector<double>> pop(pop_n, std::vector<double>(dim));
    for (auto& x : pop) {
        for (std::size_t j = 0; j < dim; ++j) {
            x[j] = fp[j].lower + unit(rng) * (fp[j].upper - fp[j].lower);
        }
    }

    int workers = opts.workers > 0 ? opts.workers
                                   : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, pop_n));

    CalibrationResult result;
    auto evaluate_all = [&](const std::vector<std::vector<double>>& xs,
                            std::vector<double>& out) {
        out.assign(xs.size(), 0.0);
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const std::size_t k = next.fetch_add(1);
                if (k >= xs.size()) break;
                out[k] = evaluate_candidate(problem, xs[k], opts);
            }
        };
        std::vector<std::thread> threads;
        for (int w = 1; w < workers; ++w) threads.emplace_back(worker);
        worker();
        for (auto& th : threads) th.join();
        result.evaluations += static_cast<int>(xs.size());
    };

    std::vector<double> cost;
    evaluate_all(pop, cost);

    auto best_of = [&]() {
        std::size_t b = 0;
        for (std::size_t k = 1; k < pop.size(); ++k) {
            if (cost[k] < cost[b]) b = k;
        }
        return b;
    };
    std::size_t best = best_of();
    result.trace.push_back(cost[best]);

    std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_dim(0, dim - 1);

    bool reached_target = cost[best] <= opts.target_objective;
    for (int gen = 0; gen < opts.max_generations && !reached_target; ++gen) {
        // DE/rand/1/bin trial vectors, drawn deterministically before the
        // parallel evaluation so results are seed-reproducible.
        std::vector<std::vector<double>> trials(pop.size(), std::vector<double>(dim));
        for (std::size_t k = 0; k < pop.size(); ++k) {
            std::size_t a, b, c;
            do { a = pick(rng); } while (a == k);
            do { b = pick(rng); } while (b == k || b == a);
            do { c = pick(rng); } while (c == k || c == a || c == b);
            const std::size_t j_forced = pick_dim(rng);
            for (std::size_t j = 0; j < dim; ++j) {
                double v;
                if (j == j_forced || unit(rng) < opts.crossover) {
                    v = pop[a][j] + opts.diff_weight * (pop[b][j] - pop[c][j]);
                } else {
                    v = pop[k][j];
                }
                trials[k][j] = std::clamp(v, fp[j].lower, fp[j].upper);
            }
        }
        std::vector<double> trial_cost;
        evaluate_all(trials, trial_cost);
        for (std::size_t k = 0; k < pop.size(); ++k) {
            if (trial_cost[k] <= cost[k]) {
                pop[k] = trials[k];
                cost[k] = trial_cost[k];
            }
        }
        best = best_of();
        result.trace.push_back(cost[best]);
        reached_target = cost[best] <= opts.target_objective;
    }

    result.best_values = pop[best];
    result.objective = cost[best];
    result.budget_exhausted = !reached_target && opts.target_objective > 0.0;
    result.best_params = problem.base;
    for (std::size_t j = 0; j < dim; ++j) {
        apply_free_parameter(result.best_params, fp[j].name, result.best_values[j]);
    }
    return result;
}

} // namespace pemsim

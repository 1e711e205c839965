#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pemsim {

using RhsFn = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;
// Clamp hook applied to every accepted state (bound projection).
using ProjectFn = std::function<void(double t, std::span<double> y)>;
// Inspector for accepted states; return false to stop the integration early.
using AcceptFn = std::function<bool(double t, std::span<const double> y)>;

struct IntegratorConfig {
    double rtol = 1e-6;
    std::vector<double> atol;       // one entry (broadcast) or one per state
    std::vector<double> jac_floor;  // FD perturbation floors; per-state scales.
                                    // Defaults to atol when empty.
    int max_order = 5;              // 1..5
    double initial_dt = 0.0;        // 0 = choose automatically
    double max_dt = std::numeric_limits<double>::infinity();
    int newton_max_iters = 4;
    int max_consecutive_failures = 60;

    // Test hooks: pin the order and/or disable adaptivity.
    int force_order = 0;
    double fixed_dt = 0.0;

    // Optional state naming for diagnostics.
    std::function<std::string(std::size_t)> state_name;
};

struct IntegratorStats {
    long steps = 0;
    long rejected_steps = 0;
    long rhs_evals = 0;
    long jac_evals = 0;
    long lu_factorizations = 0;
};

struct Trajectory {
    std::vector<double> times;               // requested output times reached
    std::vector<std::vector<double>> states; // interpolated states at those times
    std::vector<double> final_state;
    double final_time = 0;
    bool stopped_early = false;              // an AcceptFn returned false
    IntegratorStats stats;
};

// Dense finite-difference Jacobian: column j uses the step
// h_j = rel_step * max(|y_j|, floor_j). Throws ModelError naming the state
// when a column comes out non-finite.
Eigen::MatrixXd jacobian_fd(const RhsFn& rhs, double t, std::span<const double> y,
                            double rel_step, std::span<const double> floor,
                            const std::function<std::string(std::size_t)>& state_name = {},
                            IntegratorStats* stats = nullptr);

// Implicit multistep integration (BDF family, variable order 1..5, adaptive
// quasi-constant step) from t0 to t1. States are reported at output_times by
// polynomial interpolation of the method's own history. Throws SolverFailure
// when the step size underflows.
Trajectory integrate(const RhsFn& rhs, std::span<const double> y0, double t0, double t1,
                     std::span<const double> output_times, const IntegratorConfig& cfg,
                     const ProjectFn& project = {}, const AcceptFn& on_accept = {});

struct SteadyOptions {
    double t_max = 500.0;
    double check_interval = 5.0;
    double rate_tol = 1e-4;     // max |dy_i/dt| / max(|y_i|, scale_i) in 1/s
    int dwell = 2;              // consecutive passing checks required
    std::vector<double> scale;  // magnitude floors per state (defaults to 1)
    double divergence_factor = 1e7;
    IntegratorConfig ode;
};

struct SteadyResult {
    std::vector<double> y;
    bool converged = false;
    double t_end = 0;
    IntegratorStats stats;
};

// Integrates with frozen inputs until the weighted state rates stay below
// rate_tol for `dwell` consecutive checks, or until t_max.
SteadyResult steady_state(const RhsFn& rhs, std::span<const double> y0,
                          const SteadyOptions& opts, const ProjectFn& project = {});

} // namespace pemsim

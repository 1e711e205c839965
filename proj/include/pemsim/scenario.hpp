#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pemsim/csv.hpp"
#include "pemsim/derived.hpp"
#include "pemsim/ode.hpp"
#include "pemsim/system.hpp"

namespace pemsim {

// Piecewise-constant current demand with optional linear ramps between
// plateaus. Segment times are absolute, the first must start at 0.
struct CurrentProfile {
    struct Segment {
        double t_start; // s
        double i_fc;    // A m^-2
    };
    std::vector<Segment> segments;
    double ramp_duration = 0.01; // s; 0 = ideal step

    double at(double t) const;
    // Integrator restart points: every plateau start and ramp end in (0, duration).
    std::vector<double> breakpoints(double duration) const;
    void validate() const;

    static CurrentProfile constant(double i_fc);
    // "t1:i1,t2:i2,..." with t in seconds and i in A cm^-2.
    static CurrentProfile parse(const std::string& text, double ramp_duration = 0.01);
};

struct SimulationEvent {
    double t;
    std::string what;
};

struct SimulationResult {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::vector<DerivedQuantities> derived;
    std::vector<double> i_fc;    // applied current at each output time
    std::vector<double> U_cell;  // cell voltage at each output time
    IntegratorStats stats;
    std::vector<SimulationEvent> events; // flooding / manifold condensation notices
    bool failed = false;
    double failure_time = 0;
    std::string failure_message;
};

struct TransientOptions {
    double output_dt = 1.0;
    IntegratorConfig ode;       // atol filled from the layout when empty
    bool collect_derived = true;
};

// Integrates the cell over `profile` for `duration` seconds, restarting the
// integrator at each profile breakpoint. Solver failures are reported in the
// result with all output rows accumulated so far.
SimulationResult run_transient(const CellModel& model, const CurrentProfile& profile,
                               double duration, const TransientOptions& opts = {});

struct PolarizationPoint {
    double i_fc = 0;   // A m^-2
    double U_cell = 0; // V
    bool converged = false;
    VoltageBreakdown breakdown;
};

struct PolarizationCurve {
    std::vector<PolarizationPoint> points;
};

struct PolarizationOptions {
    SteadyOptions steady;  // scale/atol filled from the layout when empty
    bool warm_start = true;
};

// Settles the cell at each grid current and records the voltage. Points that
// fail to settle or starve are flagged, not fatal.
PolarizationCurve polarization_curve(const CellModel& model, const std::vector<double>& i_grid,
                                     const PolarizationOptions& opts = {});

// Maximum relative voltage deviation (percent) between a simulated curve and
// experimental samples, interpolating the simulation linearly in current.
// Experimental points outside the simulated range are ignored; throws
// ModelError when no overlap remains.
double delta_u_max(const PolarizationCurve& sim, const std::vector<CurvePoint>& exp_points);

struct CalibrationProblem {
    ParameterSet base;
    OperatingConditions base_oc;
    struct Curve {
        OperatingConditions oc;
        std::vector<CurvePoint> points;
    };
    std::vector<Curve> curves; // at least two

    struct FreeParameter {
        std::string name; // config symbol, e.g. "i0_c_ref"
        double lower;
        double upper;
    };
    std::vector<FreeParameter> free_parameters;

    // The undetermined parameters with physically motivated default bounds.
    static std::vector<FreeParameter> default_free_parameters();
};

struct CalibrationOptions {
    std::uint64_t seed = 1;
    int population = 16;
    int max_generations = 40;
    double target_objective = 0.0; // stop early when best <= target (percent)
    int workers = 0;               // 0 = hardware concurrency
    double diff_weight = 0.7;      // DE F
    double crossover = 0.9;        // DE CR
    SteadyOptions steady;
};

struct CalibrationResult {
    ParameterSet best_params;
    std::vector<double> best_values; // free-parameter values, problem order
    double objective = 0;            // percent
    std::vector<double> trace;       // best objective per generation
    int evaluations = 0;
    bool budget_exhausted = false;
};

// Bounded, seeded differential evolution on the free parameters, minimizing
// the worst per-curve delta_u_max. Candidate evaluations run in parallel.
CalibrationResult calibrate(const CalibrationProblem& problem, const CalibrationOptions& opts);

// Applies a named free parameter to a ParameterSet (config symbol names).
void apply_free_parameter(ParameterSet& params, const std::string& name, double value);

} // namespace pemsim

#include "pemsim/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pemsim/errors.hpp"

namespace pemsim {

namespace {

constexpr int MAX_ORDER = 5;
constexpr double MIN_FACTOR = 0.2;
constexpr double MAX_FACTOR = 10.0;

using Eigen::MatrixXd;
using Eigen::VectorXd;

double rms_norm(const VectorXd& v) {
    if (v.size() == 0) return 0.0;
    return std::sqrt(v.squaredNorm() / static_cast<double>(v.size()));
}

struct Coeffs {
    double gamma[MAX_ORDER + 2];
    double alpha[MAX_ORDER + 2];
    double error_const[MAX_ORDER + 2];
    Coeffs() {
        // NDF-flavored BDF constants; kappa = 0 would give the classic BDF.
        const double kappa[MAX_ORDER + 1] = {0.0, -0.1850, -1.0 / 9.0, -0.0823, -0.0415, 0.0};
        gamma[0] = 0.0;
        for (int k = 1; k <= MAX_ORDER + 1; ++k) {
            gamma[k] = gamma[k - 1] + 1.0 / k;
        }
        for (int k = 0; k <= MAX_ORDER; ++k) {
            alpha[k] = (1.0 - kappa[k]) * gamma[k];
            error_const[k] = kappa[k] * gamma[k] + 1.0 / (k + 1.0);
        }
        alpha[MAX_ORDER + 1] = gamma[MAX_ORDER + 1];
        error_const[MAX_ORDER + 1] = 1.0 / (MAX_ORDER + 2.0);
    }
};

const Coeffs kCoeffs;

// Newton-backward basis value: prod_{r=0}^{m-1} (s + r) / (r + 1).
double newton_basis(double s, int m) {
    double p = 1.0;
    for (int r = 0; r < m; ++r) p *= (s + r) / (r + 1);
    return p;
}

// Rescales the backward-difference array to a step h' = factor * h so it
// represents the same interpolating polynomial.
void change_step(std::vector<VectorXd>& D, int order, double factor) {
    const int m = order + 1;
    MatrixXd T = MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) {
        // D'[j] = sum_i (-1)^i C(j,i) P(t_n - i * factor * h)
        std::vector<double> binom(j + 1);
        binom[0] = 1.0;
        for (int i = 1; i <= j; ++i) {
            binom[i] = binom[i - 1] * (j - i + 1) / i;
        }
        for (int col = 0; col < m; ++col) {
            double acc = 0.0;
            for (int i = 0; i <= j; ++i) {
                const double sign = (i % 2 == 0) ? 1.0 : -1.0;
                acc += sign * binom[i] * newton_basis(-i * factor, col);
            }
            T(j, col) = acc;
        }
    }
    const std::size_t n = D[0].size();
    std::vector<VectorXd> nd(m, VectorXd::Zero(n));
    for (int j = 0; j < m; ++j) {
        for (int col = 0; col < m; ++col) {
            if (T(j, col) != 0.0) nd[j] += T(j, col) * D[col];
        }
    }
    for (int j = 0; j < m; ++j) D[j] = std::move(nd[j]);
}

struct NewtonResult {
    bool converged = false;
    int iterations = 0;
    VectorXd y;
    VectorXd d;
};

} // namespace

Eigen::MatrixXd jacobian_fd(const RhsFn& rhs, double t, std::span<const double> y,
                            double rel_step, std::span<const double> floor,
                            const std::function<std::string(std::size_t)>& state_name,
                            IntegratorStats* stats) {
    const std::size_t n = y.size();
    MatrixXd J(n, n);
    std::vector<double> f0(n), yp(y.begin(), y.end()), fp(n);
    rhs(t, yp, f0);
    if (stats) stats->rhs_evals += 1 + static_cast<long>(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double fl = floor.empty() ? 1.0 : floor[std::min(j, floor.size() - 1)];
        const double h = rel_step * std::max(std::abs(y[j]), fl);
        const double saved = yp[j];
        yp[j] = saved + h;
        rhs(t, yp, fp);
        yp[j] = saved;
        bool finite = true;
        for (std::size_t i = 0; i < n; ++i) {
            J(i, j) = (fp[i] - f0[i]) / h;
            finite = finite && std::isfinite(J(i, j));
        }
        if (!finite) {
            std::ostringstream os;
            os << "non-finite Jacobian column for state '"
               << (state_name ? state_name(j) : std::to_string(j)) << "' at t = " << t;
            throw ModelError(os.str());
        }
    }
    return J;
}

namespace {

// Solves d = c f(t, y_pred + d) - psi by Newton iteration on (I - cJ).
NewtonResult solve_bdf_system(const RhsFn& rhs, double t_new, const VectorXd& y_pred, double c,
                              const VectorXd& psi, const Eigen::PartialPivLU<MatrixXd>& lu,
                              const VectorXd& scale, double tol, int max_iter,
                              IntegratorStats& stats) {
    NewtonResult res;
    const std::size_t n = y_pred.size();
    res.y = y_pred;
    res.d = VectorXd::Zero(n);
    std::vector<double> f(n);
    double dy_norm_old = -1.0;
    for (int k = 0; k < max_iter; ++k) {
        res.iterations = k + 1;
        rhs(t_new, std::span<const double>(res.y.data(), n), f);
        ++stats.rhs_evals;
        bool finite = true;
        for (double v : f) finite = finite && std::isfinite(v);
        if (!finite) break;

        VectorXd g = c * Eigen::Map<const VectorXd>(f.data(), n) - psi - res.d;
        VectorXd dy = lu.solve(g);
        const double dy_norm = rms_norm(dy.cwiseQuotient(scale));
        double rate = -1.0;
        if (dy_norm_old >= 0.0 && dy_norm_old > 0.0) rate = dy_norm / dy_norm_old;
        if (rate >= 0.0 && (rate >= 1.0 ||
                            std::pow(rate, max_iter - k) / (1.0 - rate) * dy_norm > tol)) {
            break;
        }
        res.y += dy;
        res.d += dy;
        if (dy_norm == 0.0 || (rate >= 0.0 && rate / (1.0 - rate) * dy_norm < tol)) {
            res.converged = true;
            break;
        }
        dy_norm_old = dy_norm;
    }
    return res;
}

std::vector<double> broadcast(const std::vector<double>& v, std::size_t n, double fallback) {
    std::vector<double> out(n, fallback);
    if (v.size() == 1) {
        std::fill(out.begin(), out.end(), v[0]);
    } else if (v.size() == n) {
        out = v;
    }
    return out;
}

} // namespace

Trajectory integrate(const RhsFn& rhs, std::span<const double> y0, double t0, double t1,
                     std::span<const double> output_times, const IntegratorConfig& cfg,
                     const ProjectFn& project, const AcceptFn& on_accept) {
    const std::size_t n = y0.size();
    Trajectory traj;
    if (!(t1 > t0)) throw SolverFailure("integrate: t1 must exceed t0", t0);

    const std::vector<double> atol = broadcast(cfg.atol, n, 1e-9);
    const std::vector<double> jac_floor = cfg.jac_floor.empty()
                                              ? atol
                                              : broadcast(cfg.jac_floor, n, 1e-9);
    const Eigen::Map<const VectorXd> atol_v(atol.data(), n);
    const double rtol = cfg.rtol;
    const double newton_tol = std::max(10.0 * std::numeric_limits<double>::epsilon() / rtol,
                                       std::min(0.03, std::sqrt(rtol)));
    const bool fixed_mode = cfg.fixed_dt > 0.0;
    const int max_order = std::clamp(cfg.force_order > 0 ? cfg.force_order : cfg.max_order,
                                     1, MAX_ORDER);

    VectorXd y = Eigen::Map<const VectorXd>(y0.data(), n);
    std::vector<double> f0(n);
    rhs(t0, y0, f0);
    ++traj.stats.rhs_evals;
    for (double v : f0) {
        if (!std::isfinite(v)) {
            throw SolverFailure("integrate: right-hand side non-finite at the initial state", t0);
        }
    }

    // Initial step size (error-based when not fixed).
    double h;
    if (fixed_mode) {
        h = cfg.fixed_dt;
    } else if (cfg.initial_dt > 0.0) {
        h = cfg.initial_dt;
    } else {
        const VectorXd sc = atol_v + rtol * y.cwiseAbs();
        const double d0 = rms_norm(y.cwiseQuotient(sc));
        const double d1 = rms_norm(Eigen::Map<const VectorXd>(f0.data(), n).cwiseQuotient(sc));
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, (t1 - t0) / 10.0);
        std::vector<double> y1(n), f1(n);
        for (std::size_t i = 0; i < n; ++i) y1[i] = y[i] + h0 * f0[i];
        rhs(t0 + h0, y1, f1);
        ++traj.stats.rhs_evals;
        VectorXd df(n);
        for (std::size_t i = 0; i < n; ++i) df[i] = (f1[i] - f0[i]) / h0;
        const double d2 = rms_norm(df.cwiseQuotient(sc));
        double h1;
        if (d1 <= 1e-15 && d2 <= 1e-15) {
            h1 = std::max(1e-6, h0 * 1e-3);
        } else {
            h1 = std::pow(0.01 / std::max(d1, d2), 0.5);
        }
        h = std::min({100.0 * h0, h1, cfg.max_dt, t1 - t0});
    }
    h = std::min({h, cfg.max_dt, t1 - t0});

    // Backward-difference history.
    std::vector<VectorXd> D(MAX_ORDER + 3, VectorXd::Zero(n));
    D[0] = y;
    D[1] = h * Eigen::Map<const VectorXd>(f0.data(), n);
    int order = 1;
    int n_equal_steps = 0;

    MatrixXd J;
    bool have_jac = false;
    bool current_jac = false;
    Eigen::PartialPivLU<MatrixXd> lu;
    double c_lu = 0.0;
    bool lu_valid = false;

    double t = t0;
    std::size_t out_idx = 0;
    // Emit any output exactly at t0.
    while (out_idx < output_times.size() && output_times[out_idx] <= t0) {
        traj.times.push_back(output_times[out_idx]);
        traj.states.emplace_back(y0.begin(), y0.end());
        ++out_idx;
    }

    auto refresh_jac = [&](double t_at, const VectorXd& y_at) {
        J = jacobian_fd(rhs, t_at, std::span<const double>(y_at.data(), n),
                        std::sqrt(std::numeric_limits<double>::epsilon()), jac_floor,
                        cfg.state_name, &traj.stats);
        ++traj.stats.jac_evals;
        have_jac = true;
        current_jac = true;
        lu_valid = false;
    };

    int consecutive_failures = 0;

    while (t < t1 * (1.0 - 1e-14)) {
        const double min_step = 16.0 * std::numeric_limits<double>::epsilon()
                                * std::max(std::abs(t), 1.0);
        if (h < min_step && !fixed_mode) {
            throw SolverFailure("integrate: step size underflow (stiffness failure)", t);
        }
        if (consecutive_failures > cfg.max_consecutive_failures) {
            throw SolverFailure("integrate: too many consecutive rejected steps", t);
        }

        double t_new = t + h;
        if (t_new > t1) {
            t_new = t1;
            const double factor = (t_new - t) / h;
            if (std::abs(factor - 1.0) > 1e-14) {
                change_step(D, order, factor);
                n_equal_steps = 0;
                lu_valid = false;
            }
            h = t_new - t;
        }

        // Predictor and weights.
        VectorXd y_pred = VectorXd::Zero(n);
        for (int j = 0; j <= order; ++j) y_pred += D[j];
        const VectorXd scale = atol_v + rtol * y_pred.cwiseAbs();
        VectorXd psi = VectorXd::Zero(n);
        for (int j = 1; j <= order; ++j) psi += kCoeffs.gamma[j] * D[j];
        psi /= kCoeffs.alpha[order];
        const double c = h / kCoeffs.alpha[order];

        if (!have_jac) refresh_jac(t, y);

        NewtonResult nr;
        bool newton_done = false;
        while (!newton_done) {
            if (!lu_valid || c_lu != c) {
                lu.compute(MatrixXd::Identity(n, n) - c * J);
                ++traj.stats.lu_factorizations;
                c_lu = c;
                lu_valid = true;
            }
            nr = solve_bdf_system(rhs, t_new, y_pred, c, psi, lu, scale, newton_tol,
                                  cfg.newton_max_iters, traj.stats);
            if (nr.converged) break;
            if (!current_jac) {
                refresh_jac(t_new, y_pred);
            } else {
                newton_done = true; // give up at this step size
            }
        }

        if (!nr.converged) {
            if (fixed_mode) {
                throw SolverFailure("integrate: Newton failed in fixed-step mode", t);
            }
            ++traj.stats.rejected_steps;
            ++consecutive_failures;
            change_step(D, order, 0.5);
            h *= 0.5;
            n_equal_steps = 0;
            lu_valid = false;
            continue;
        }

        const double safety = 0.9 * (2.0 * cfg.newton_max_iters + 1.0)
                              / (2.0 * cfg.newton_max_iters + nr.iterations);
        const double error_norm =
            rms_norm((kCoeffs.error_const[order] * nr.d).cwiseQuotient(scale));
        if (!fixed_mode && (!std::isfinite(error_norm) || error_norm > 1.0)) {
            ++traj.stats.rejected_steps;
            ++consecutive_failures;
            double factor = std::isfinite(error_norm)
                                ? std::max(MIN_FACTOR,
                                           safety * std::pow(error_norm, -1.0 / (order + 1)))
                                : MIN_FACTOR;
            change_step(D, order, factor);
            h *= factor;
            n_equal_steps = 0;
            lu_valid = false;
            continue;
        }

        // Accept the step.
        consecutive_failures = 0;
        ++traj.stats.steps;
        VectorXd y_new = nr.y;
        if (project) {
            project(t_new, std::span<double>(y_new.data(), n));
        }
        VectorXd d = y_new - y_pred;
        ++n_equal_steps;
        D[order + 2] = d - D[order + 1];
        D[order + 1] = d;
        for (int i = order; i >= 0; --i) D[i] += D[i + 1];
        t = t_new;
        y = y_new;
        current_jac = false;

        // Dense output over (t - h, t].
        while (out_idx < output_times.size() && output_times[out_idx] <= t + 1e-14) {
            const double ts = std::min(output_times[out_idx], t);
            VectorXd p = D[0];
            double basis = 1.0;
            for (int j = 1; j <= order; ++j) {
                basis *= (ts - (t - (j - 1) * h)) / (j * h);
                p += D[j] * basis;
            }
            traj.times.push_back(output_times[out_idx]);
            traj.states.emplace_back(p.data(), p.data() + n);
            ++out_idx;
        }

        if (on_accept) {
            if (!on_accept(t, std::span<const double>(y.data(), n))) {
                traj.stopped_early = true;
                break;
            }
        }
        if (t >= t1 * (1.0 - 1e-14)) break;

        if (fixed_mode) {
            if (order < max_order && n_equal_steps > order) ++order;
            continue;
        }
        if (n_equal_steps < order + 1) continue;

        // Consider an order change once enough equal steps accumulated.
        double err_m_norm = std::numeric_limits<double>::infinity();
        if (order > 1) {
            err_m_norm = rms_norm((kCoeffs.error_const[order - 1] * D[order])
                                      .cwiseQuotient(scale));
        }
        double err_p_norm = std::numeric_limits<double>::infinity();
        if (order < max_order) {
            err_p_norm = rms_norm((kCoeffs.error_const[order + 1] * D[order + 2])
                                      .cwiseQuotient(scale));
        }
        auto to_factor = [](double norm, int ord) {
            if (norm == 0.0) return MAX_FACTOR;
            if (!std::isfinite(norm)) return 0.0;
            return std::pow(norm, -1.0 / (ord + 1));
        };
        const double f_m = to_factor(err_m_norm, order - 1);
        const double f_k = to_factor(error_norm, order);
        const double f_p = to_factor(err_p_norm, order + 1);
        int delta = 0;
        double best = f_k;
        if (f_m > best) { best = f_m; delta = -1; }
        if (f_p > best) { best = f_p; delta = 1; }
        order += delta;

        double factor = std::min(MAX_FACTOR, safety * best);
        factor = std::min(factor, cfg.max_dt / h);
        if (std::abs(factor - 1.0) > 1e-12) {
            change_step(D, order, factor);
            h *= factor;
            n_equal_steps = 0;
            lu_valid = false;
        }
    }

    traj.final_time = t;
    traj.final_state.assign(y.data(), y.data() + n);
    return traj;
}

SteadyResult steady_state(const RhsFn& rhs, std::span<const double> y0,
                          const SteadyOptions& opts, const ProjectFn& project) {
    const std::size_t n = y0.size();
    const std::vector<double> scale = broadcast(opts.scale, n, 1.0);
    std::vector<double> f(n);

    auto max_rate = [&](double t, std::span<const double> y) {
        rhs(t, y, f);
        double r = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            r = std::max(r, std::abs(f[i]) / std::max(std::abs(y[i]), scale[i]));
        }
        return r;
    };

    SteadyResult res;
    if (max_rate(0.0, y0) < opts.rate_tol) {
        res.y.assign(y0.begin(), y0.end());
        res.converged = true;
        res.t_end = 0.0;
        return res;
    }

    double y0_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        y0_norm = std::max(y0_norm, std::abs(y0[i]) / scale[i]);
    }
    const double diverge = opts.divergence_factor * std::max(y0_norm, 1.0);

    double next_check = opts.check_interval;
    int hits = 0;
    AcceptFn check = [&](double t, std::span<const double> y) {
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(y[i]) / scale[i] > diverge) {
                throw SolverFailure("steady_state: solution diverged", t);
            }
        }
        if (t + 1e-12 < next_check) return true;
        next_check = t + opts.check_interval;
        if (max_rate(t, y) < opts.rate_tol) {
            if (++hits >= opts.dwell) return false;
        } else {
            hits = 0;
        }
        return true;
    };

    Trajectory tr = integrate(rhs, y0, 0.0, opts.t_max, {}, opts.ode, project, check);
    res.y = tr.final_state;
    res.converged = tr.stopped_early;
    res.t_end = tr.final_time;
    res.stats = tr.stats;
    return res;
}

} // namespace pemsim

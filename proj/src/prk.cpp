#include <vlint/prk.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace vlint {

void solver_config::validate() const
{
    if (!(newton_tol > 0.0)) {
        throw invalid_argument("solver_config: newton_tol must be positive");
    }
    if (max_newton_iters < 1) {
        throw invalid_argument("solver_config: max_newton_iters must be at least 1");
    }
}

matrix stage_positions(const partitioned_tableau& tab, double h, std::span<const double> q, const matrix& qdots)
{
    const std::size_t s = tab.s;
    const std::size_t n = q.size();
    matrix stages(s, n);
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t mu = 0; mu < n; ++mu) {
            double acc = 0.0;
            for (std::size_t j = 0; j < s; ++j) {
                acc += tab.a(i, j) * qdots(j, mu);
            }
            stages(i, mu) = q[mu] + h * acc;
        }
    }
    return stages;
}

namespace {

// Dα(Q)ᵀ v − DH(Q), the momentum rate of the DAE.
vector momentum_rate(const matrix& da, std::span<const double> v, std::span<const double> dh)
{
    const std::size_t n = dh.size();
    vector out(n);
    for (std::size_t mu = 0; mu < n; ++mu) {
        double acc = 0.0;
        for (std::size_t nu = 0; nu < n; ++nu) {
            acc += da(nu, mu) * v[nu];
        }
        out[mu] = acc - dh[mu];
    }
    return out;
}

struct stage_values {
    matrix positions;
    std::vector<matrix> d_alpha;
    matrix rates; // s×n momentum rates
};

stage_values evaluate_stages(const velocity_linear_system& sys, const partitioned_tableau& tab, double h,
                             const phase_point& x, const matrix& qdots)
{
    stage_values v{stage_positions(tab, h, x.q, qdots), {}, matrix(tab.s, sys.n)};
    v.d_alpha.reserve(tab.s);
    for (std::size_t j = 0; j < tab.s; ++j) {
        const auto qj = v.positions.row(j);
        v.d_alpha.push_back(sys.d_alpha(qj));
        const auto rate = momentum_rate(v.d_alpha.back(), qdots.row(j), sys.dh(qj));
        std::copy(rate.begin(), rate.end(), v.rates.row(j).begin());
    }
    return v;
}

matrix residual_from(const velocity_linear_system& sys, const partitioned_tableau& tab, double h,
                     const phase_point& x, const stage_values& v)
{
    const std::size_t s = tab.s;
    const std::size_t n = sys.n;
    matrix r(s, n);
    for (std::size_t i = 0; i < s; ++i) {
        const auto a = sys.alpha(v.positions.row(i));
        for (std::size_t mu = 0; mu < n; ++mu) {
            double acc = 0.0;
            for (std::size_t j = 0; j < s; ++j) {
                acc += tab.a_bar(i, j) * v.rates(j, mu);
            }
            r(i, mu) = a[mu] - x.p[mu] - h * acc;
        }
    }
    return r;
}

matrix jacobian_from(const velocity_linear_system& sys, const partitioned_tableau& tab, double h,
                     const matrix& qdots, const stage_values& v, jacobian_mode mode)
{
    const std::size_t s = tab.s;
    const std::size_t n = sys.n;
    matrix jac(s * n, s * n);

    std::vector<matrix> d_alpha_t;
    d_alpha_t.reserve(s);
    for (const auto& da : v.d_alpha) {
        d_alpha_t.push_back(da.transpose());
    }

    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t m = 0; m < s; ++m) {
            if (tab.a(i, m) != 0.0) {
                jac.add_block(i * n, m * n, v.d_alpha[i], h * tab.a(i, m));
            }
            if (tab.a_bar(i, m) != 0.0) {
                jac.add_block(i * n, m * n, d_alpha_t[m], -h * tab.a_bar(i, m));
            }
        }
    }

    if (mode == jacobian_mode::exact) {
        for (std::size_t j = 0; j < s; ++j) {
            const auto qj = v.positions.row(j);
            const matrix curvature = sys.d2_alpha_vp(qj, qdots.row(j)) - sys.d2h(qj);
            for (std::size_t i = 0; i < s; ++i) {
                if (tab.a_bar(i, j) == 0.0) {
                    continue;
                }
                for (std::size_t m = 0; m < s; ++m) {
                    const double w = tab.a_bar(i, j) * tab.a(j, m);
                    if (w != 0.0) {
                        jac.add_block(i * n, m * n, curvature, -h * h * w);
                    }
                }
            }
        }
    }
    return jac;
}

void require_consistent_enough(const velocity_linear_system& sys, double h, const phase_point& x)
{
    const double bound = 10.0 * std::abs(h) * (1.0 + norm_inf(x.q));
    const double gap = constraint_residual(sys, x);
    if (!(gap <= bound)) {
        std::ostringstream msg;
        msg << sys.name << ": state too far from the constraint p = alpha(q): |p - alpha(q)| = " << gap
            << " exceeds " << bound;
        throw inconsistent_state(msg.str());
    }
}

double w_condition_at(const velocity_linear_system& sys, const partitioned_tableau& tab, const matrix& positions)
{
    try {
        return condition_estimate(w_matrix(sys, tab, positions));
    } catch (const error&) {
        return std::numeric_limits<double>::infinity();
    }
}

} // namespace

matrix stage_residual(const velocity_linear_system& sys, const partitioned_tableau& tab, double h,
                      const phase_point& x, const matrix& qdots)
{
    return residual_from(sys, tab, h, x, evaluate_stages(sys, tab, h, x, qdots));
}

matrix stage_jacobian(const velocity_linear_system& sys, const partitioned_tableau& tab, double h,
                      const phase_point& x, const matrix& qdots, jacobian_mode mode)
{
    return jacobian_from(sys, tab, h, qdots, evaluate_stages(sys, tab, h, x, qdots), mode);
}

matrix w_matrix(const velocity_linear_system& sys, const partitioned_tableau& tab, const matrix& q_stages)
{
    const std::size_t s = tab.s;
    const std::size_t n = sys.n;
    matrix w(s * n, s * n);
    for (std::size_t j = 0; j < s; ++j) {
        const matrix da = sys.d_alpha(q_stages.row(j));
        const matrix da_t = da.transpose();
        for (std::size_t i = 0; i < s; ++i) {
            w.add_block(i * n, j * n, da_t, tab.a_bar(i, j));
            w.add_block(i * n, j * n, da, -tab.a(i, j));
        }
    }
    return w;
}

stage_solution solve_stages(const velocity_linear_system& sys, const partitioned_tableau& tab, double h,
                            const phase_point& x, const solver_config& cfg)
{
    cfg.validate();
    if (h == 0.0 || !std::isfinite(h)) {
        throw invalid_argument("solve_stages: step size must be finite and nonzero");
    }
    require_consistent_enough(sys, h, x);

    const std::size_t s = tab.s;
    const std::size_t n = sys.n;
    const double tol = cfg.newton_tol * std::abs(h);

    matrix qdots(s, n);
    if (cfg.initial_guess == initial_guess_mode::el_field) {
        const auto f = el_vector_field(sys, x.q);
        for (std::size_t i = 0; i < s; ++i) {
            std::copy(f.begin(), f.end(), qdots.row(i).begin());
        }
    }

    stage_solve_report report;
    stage_values values = evaluate_stages(sys, tab, h, x, qdots);
    matrix residual = residual_from(sys, tab, h, x, values);
    report.final_residual = max_abs(residual);

    auto fail = [&](const std::string& why) {
        report.converged = false;
        report.w_condition = w_condition_at(sys, tab, values.positions);
        std::ostringstream msg;
        msg << sys.name << "/" << tab.name << ": Newton failed at t = " << x.t << " with h = " << h << " after "
            << report.iterations << " iterations (residual " << report.final_residual << ", W condition "
            << *report.w_condition << "): " << why;
        throw newton_divergence(msg.str(), report);
    };

    // At least one correction is always applied, so the accepted iterate has
    // been through a full Newton update.
    while (report.iterations == 0 || !(report.final_residual <= tol)) {
        if (report.iterations >= cfg.max_newton_iters) {
            fail("iteration limit reached");
        }
        const matrix jac = jacobian_from(sys, tab, h, qdots, values, cfg.jacobian);
        vector delta;
        try {
            delta = lu_decomposition(jac).solve(residual.entries());
        } catch (const singular_matrix& e) {
            std::ostringstream msg;
            msg << sys.name << "/" << tab.name << ": singular stage Jacobian at t = " << x.t << " with h = " << h
                << " (" << e.what() << ")";
            throw singular_stage_jacobian(msg.str());
        }
        auto dst = qdots.entries();
        for (std::size_t k = 0; k < dst.size(); ++k) {
            dst[k] -= delta[k];
        }
        ++report.iterations;
        values = evaluate_stages(sys, tab, h, x, qdots);
        residual = residual_from(sys, tab, h, x, values);
        report.final_residual = max_abs(residual);
        if (!std::isfinite(report.final_residual)) {
            fail("non-finite residual");
        }
    }
    report.converged = true;
    if (cfg.record_w_condition) {
        report.w_condition = w_condition_at(sys, tab, values.positions);
    }

    return {std::move(qdots), std::move(values.rates), report};
}

step_result prk_step(const velocity_linear_system& sys, const partitioned_tableau& tab, double h,
                     const phase_point& x, const solver_config& cfg)
{
    auto sol = solve_stages(sys, tab, h, x, cfg);
    const std::size_t n = sys.n;
    phase_point next{x.t + h, x.q, x.p};
    for (std::size_t mu = 0; mu < n; ++mu) {
        double dq = 0.0;
        double dp = 0.0;
        for (std::size_t j = 0; j < tab.s; ++j) {
            dq += tab.b[j] * sol.qdots(j, mu);
            dp += tab.b[j] * sol.pdots(j, mu);
        }
        next.q[mu] += h * dq;
        next.p[mu] += h * dp;
    }
    return {std::move(next), sol.report};
}

trajectory integrate(const velocity_linear_system& sys, const partitioned_tableau& tab, const phase_point& x0,
                     double h, std::size_t steps, const solver_config& cfg)
{
    trajectory traj;
    traj.samples.reserve(steps + 1);
    traj.reports.reserve(steps);
    traj.samples.push_back(x0);
    for (std::size_t k = 0; k < steps; ++k) {
        auto [next, report] = prk_step(sys, tab, h, traj.samples.back(), cfg);
        // Time from the step count, so that long runs do not accumulate t += h.
        next.t = x0.t + static_cast<double>(k + 1) * h;
        traj.samples.push_back(std::move(next));
        traj.reports.push_back(report);
    }
    return traj;
}

} // namespace vlint

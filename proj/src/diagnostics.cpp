#include <vlint/diagnostics.hpp>

#include <algorithm>
#include <cmath>
#include <future>

#include <vlint/errors.hpp>

namespace vlint {

namespace {

struct endpoint_run {
    std::optional<phase_point> state;
    std::string failure;
};

endpoint_run integrate_to(const velocity_linear_system& sys, const partitioned_tableau& tab,
                          std::span<const double> q0, double t_final, double h, const solver_config& cfg)
{
    const double ratio = t_final / h;
    const double nearest = std::round(ratio);
    const auto steps = static_cast<std::size_t>(
        std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio) ? nearest : std::ceil(ratio));

    phase_point x = consistent_init(sys, q0);
    try {
        for (std::size_t k = 0; k < steps; ++k) {
            const double t = static_cast<double>(k) * h;
            const double step = (k + 1 == steps) ? t_final - t : h;
            x = prk_step(sys, tab, step, x, cfg).state;
            for (double v : x.q) {
                if (!std::isfinite(v)) {
                    throw domain_error("non-finite state");
                }
            }
        }
    } catch (const error& e) {
        return {std::nullopt, e.what()};
    }
    x.t = t_final;
    return {std::move(x), {}};
}

double max_diff(std::span<const double> a, std::span<const double> b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

} // namespace

std::vector<double> dividing_step_sizes(double t_final, double h_max, double h_min, std::size_t count)
{
    if (!(t_final > 0.0 && h_max >= h_min && h_min > 0.0) || count < 2) {
        throw invalid_argument("dividing_step_sizes: need t_final > 0, h_max >= h_min > 0 and count >= 2");
    }
    const double n_lo = std::log(t_final / h_max);
    const double n_hi = std::log(t_final / h_min);
    // Smallest even N with T/N <= h_max.
    const long n_min = 2 * static_cast<long>(std::ceil(0.5 * t_final / h_max * (1.0 - 1e-12)));
    std::vector<double> out;
    long previous = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const double frac = static_cast<double>(i) / static_cast<double>(count - 1);
        // Even N: a (-1)^N parasitic component then has the same sign in every run.
        long n = std::max(2L, 2 * std::lround(0.5 * std::exp(n_lo + frac * (n_hi - n_lo))));
        n = std::max(n, n_min);
        if (n <= previous) {
            n = previous + 2;
        }
        previous = n;
        out.push_back(t_final / static_cast<double>(n));
    }
    return out;
}

double fit_order(std::span<const double> step_sizes, std::span<const double> errors)
{
    if (step_sizes.size() != errors.size()) {
        throw invalid_argument("fit_order: step_sizes and errors differ in length");
    }
    if (step_sizes.size() < 2) {
        throw fewer_than_two_points("fit_order: at least two points are required");
    }
    const auto m = static_cast<double>(step_sizes.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < step_sizes.size(); ++i) {
        if (!(step_sizes[i] > 0.0) || !(errors[i] > 0.0)) {
            throw invalid_argument("fit_order: step sizes and errors must be positive");
        }
        sx += std::log(step_sizes[i]);
        sy += std::log(errors[i]);
    }
    const double mx = sx / m;
    const double my = sy / m;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < step_sizes.size(); ++i) {
        const double dx = std::log(step_sizes[i]) - mx;
        sxy += dx * (std::log(errors[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0) {
        throw invalid_argument("fit_order: step sizes must not all be equal");
    }
    return sxy / sxx;
}

std::pair<std::size_t, std::size_t> select_fit_range(std::span<const std::optional<double>> errors, double floor)
{
    std::pair<std::size_t, std::size_t> best{0, 0};
    std::size_t i = 0;
    while (i < errors.size()) {
        if (!errors[i] || !(*errors[i] > floor)) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < errors.size() && errors[j] && *errors[j] > floor && *errors[j] < *errors[j - 1]) {
            ++j;
        }
        if (j - i >= 2 && j - i > best.second - best.first) {
            best = {i, j};
        }
        i = j;
    }
    return best;
}

convergence_report run_convergence(const velocity_linear_system& sys, const partitioned_tableau& tab,
                                   std::span<const double> q0, double t_final, std::span<const double> step_sizes,
                                   const reference_endpoint& reference, const convergence_options& opts)
{
    for (std::size_t i = 1; i < step_sizes.size(); ++i) {
        if (!(step_sizes[i] < step_sizes[i - 1])) {
            throw invalid_argument("run_convergence: step sizes must be strictly decreasing");
        }
    }
    if (!step_sizes.empty() && !(step_sizes.back() > 0.0)) {
        throw invalid_argument("run_convergence: step sizes must be positive");
    }

    convergence_report report;
    report.method_id = tab.name;
    report.model_id = sys.name;
    report.t_final = t_final;
    report.step_sizes.assign(step_sizes.begin(), step_sizes.end());

    std::vector<endpoint_run> runs(step_sizes.size());
    if (opts.parallel) {
        std::vector<std::future<endpoint_run>> jobs;
        for (double h : step_sizes) {
            jobs.push_back(std::async(std::launch::async,
                                      [&, h] { return integrate_to(sys, tab, q0, t_final, h, opts.solver); }));
        }
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            runs[i] = jobs[i].get();
        }
    } else {
        for (std::size_t i = 0; i < step_sizes.size(); ++i) {
            runs[i] = integrate_to(sys, tab, q0, t_final, step_sizes[i], opts.solver);
        }
    }

    for (auto& run : runs) {
        if (run.state) {
            const double eq = max_diff(run.state->q, reference.q);
            const double ep = max_diff(run.state->p, reference.p);
            if (std::isfinite(eq)) {
                report.errors.emplace_back(eq);
                report.errors_p.emplace_back(ep);
                report.failures.emplace_back();
                continue;
            }
            run.failure = "non-finite endpoint";
        }
        report.errors.emplace_back();
        report.errors_p.emplace_back();
        report.failures.push_back(run.failure);
    }

    report.fit_range = select_fit_range(report.errors, opts.error_floor);
    const auto [first, last] = report.fit_range;
    if (last - first >= 2) {
        std::vector<double> hs, es;
        for (std::size_t i = first; i < last; ++i) {
            hs.push_back(report.step_sizes[i]);
            es.push_back(*report.errors[i]);
        }
        report.fitted_order = fit_order(hs, es);
    }
    return report;
}

drift_report run_drift(const velocity_linear_system& sys, const partitioned_tableau& tab,
                       std::span<const double> q0, double h, double t_final, std::size_t max_samples,
                       const solver_config& cfg)
{
    if (!(h > 0.0) || !(t_final > 0.0)) {
        throw invalid_argument("run_drift: need h > 0 and t_final > 0");
    }
    if (max_samples < 2) {
        throw invalid_argument("run_drift: max_samples must be at least 2");
    }

    drift_report rep;
    rep.method_id = tab.name;
    rep.model_id = sys.name;
    rep.h = h;
    rep.t_final = t_final;

    const auto steps = static_cast<std::size_t>(std::llround(std::ceil(t_final / h - 1e-9)));
    const std::size_t stride = (steps + max_samples - 2) / (max_samples - 1);

    phase_point x = consistent_init(sys, q0);
    const double h_initial = sys.hamiltonian(x.q);

    // Running least-squares fit of H against t.
    double count = 0.0, mean_t = 0.0, mean_h = 0.0, cov = 0.0, var_t = 0.0;
    auto observe = [&](std::size_t k, const phase_point& state) {
        const double hv = sys.hamiltonian(state.q);
        const double cr = constraint_residual(sys, state);
        count += 1.0;
        const double dt = state.t - mean_t;
        mean_t += dt / count;
        mean_h += (hv - mean_h) / count;
        cov += dt * (hv - mean_h);
        var_t += dt * (state.t - mean_t);
        rep.max_abs_hamiltonian_deviation = std::max(rep.max_abs_hamiltonian_deviation, std::abs(hv - h_initial));
        rep.max_constraint_residual = std::max(rep.max_constraint_residual, cr);
        if (k % stride == 0 || k == steps) {
            rep.sample_times.push_back(state.t);
            rep.hamiltonian_values.push_back(hv);
            rep.constraint_residuals.push_back(cr);
        }
    };

    observe(0, x);
    std::size_t k = 0;
    try {
        for (; k < steps; ++k) {
            const double step = (k + 1 == steps) ? t_final - static_cast<double>(k) * h : h;
            auto next = prk_step(sys, tab, step, x, cfg).state;
            next.t = (k + 1 == steps) ? t_final : static_cast<double>(k + 1) * h;
            x = std::move(next);
            observe(k + 1, x);
        }
    } catch (const error& e) {
        rep.terminated_early = true;
        rep.failure = e.what();
        if (rep.sample_times.empty() || rep.sample_times.back() != x.t) {
            // Keep the last good state visible in the thinned series.
            rep.sample_times.push_back(x.t);
            rep.hamiltonian_values.push_back(sys.hamiltonian(x.q));
            rep.constraint_residuals.push_back(constraint_residual(sys, x));
        }
    }
    rep.reached_time = x.t;
    rep.linear_drift_rate = var_t > 0.0 ? cov / var_t : 0.0;
    return rep;
}

double poisson_map_check(const velocity_linear_system& sys, const partitioned_tableau& tab, double h,
                         std::span<const double> q, const solver_config& cfg, std::optional<double> fd_eps)
{
    if (!sys.linear_alpha) {
        throw unsupported_system("poisson_map_check: " + sys.name + " has no constant linear_alpha");
    }
    const auto step_map = [&](std::span<const double> x) {
        return prk_step(sys, tab, h, consistent_init(sys, x), cfg).state.q;
    };
    const matrix jac = fd_jacobian(step_map, q, fd_eps);
    const matrix structure = lu_decomposition(*sys.linear_alpha).inverse();
    const matrix defect = jac * structure * jac.transpose() - structure;
    return norm_inf(defect);
}

} // namespace vlint

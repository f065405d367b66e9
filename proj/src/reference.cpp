#include <vlint/reference.hpp>

#include <cmath>
#include <memory>

#include <vlint/errors.hpp>

namespace vlint {

explicit_tableau verner6()
{
    explicit_tableau t;
    t.name = "verner6";
    t.s = 8;
    t.order = 6;
    t.c = {0.0, 1.0 / 6.0, 4.0 / 15.0, 2.0 / 3.0, 5.0 / 6.0, 1.0, 1.0 / 15.0, 1.0};
    t.a = matrix(8, 8);
    auto& a = t.a;
    a(1, 0) = 1.0 / 6.0;
    a(2, 0) = 4.0 / 75.0;
    a(2, 1) = 16.0 / 75.0;
    a(3, 0) = 5.0 / 6.0;
    a(3, 1) = -8.0 / 3.0;
    a(3, 2) = 5.0 / 2.0;
    a(4, 0) = -165.0 / 64.0;
    a(4, 1) = 55.0 / 6.0;
    a(4, 2) = -425.0 / 64.0;
    a(4, 3) = 85.0 / 96.0;
    a(5, 0) = 12.0 / 5.0;
    a(5, 1) = -8.0;
    a(5, 2) = 4015.0 / 612.0;
    a(5, 3) = -11.0 / 36.0;
    a(5, 4) = 88.0 / 255.0;
    a(6, 0) = -8263.0 / 15000.0;
    a(6, 1) = 124.0 / 75.0;
    a(6, 2) = -643.0 / 680.0;
    a(6, 3) = -81.0 / 250.0;
    a(6, 4) = 2484.0 / 10625.0;
    a(7, 0) = 3501.0 / 1720.0;
    a(7, 1) = -300.0 / 43.0;
    a(7, 2) = 297275.0 / 52632.0;
    a(7, 3) = -319.0 / 2322.0;
    a(7, 4) = 24068.0 / 84065.0;
    a(7, 6) = 3850.0 / 26703.0;
    t.b = {3.0 / 40.0, 0.0, 875.0 / 2244.0, 23.0 / 72.0, 264.0 / 1955.0, 0.0, 125.0 / 11592.0, 43.0 / 616.0};
    return t;
}

explicit_tableau classical_rk4()
{
    explicit_tableau t;
    t.name = "rk4";
    t.s = 4;
    t.order = 4;
    t.c = {0.0, 0.5, 0.5, 1.0};
    t.a = matrix(4, 4);
    t.a(1, 0) = 0.5;
    t.a(2, 1) = 0.5;
    t.a(3, 2) = 1.0;
    t.b = {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0};
    return t;
}

ode_field poisson_field(const velocity_linear_system& sys)
{
    if (sys.linear_alpha) {
        auto lu = std::make_shared<const lu_decomposition>(*sys.linear_alpha);
        return [lu, dh = sys.dh](std::span<const double> q) { return lu->solve(dh(q)); };
    }
    return [sys](std::span<const double> q) { return el_vector_field(sys, q); };
}

vector erk_step(const ode_field& f, const explicit_tableau& tab, double h, std::span<const double> q)
{
    const std::size_t n = q.size();
    std::vector<vector> k;
    k.reserve(tab.s);
    vector stage(n);
    for (std::size_t i = 0; i < tab.s; ++i) {
        for (std::size_t mu = 0; mu < n; ++mu) {
            double acc = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                acc += tab.a(i, j) * k[j][mu];
            }
            stage[mu] = q[mu] + h * acc;
        }
        k.push_back(f(stage));
    }
    vector out(q.begin(), q.end());
    for (std::size_t mu = 0; mu < n; ++mu) {
        double acc = 0.0;
        for (std::size_t i = 0; i < tab.s; ++i) {
            acc += tab.b[i] * k[i][mu];
        }
        out[mu] += h * acc;
    }
    return out;
}

vector erk_step(const velocity_linear_system& sys, const explicit_tableau& tab, double h, double /*t*/,
                std::span<const double> q)
{
    for (std::size_t i = 0; i < tab.s; ++i) {
        for (std::size_t j = i; j < tab.s; ++j) {
            if (tab.a(i, j) != 0.0) {
                throw invalid_argument("erk_step: tableau '" + tab.name + "' is not explicit");
            }
        }
    }
    return erk_step([&sys](std::span<const double> x) { return el_vector_field(sys, x); }, tab, h, q);
}

trajectory reference_solution(const velocity_linear_system& sys, std::span<const double> q0, double t_final,
                              double h_ref, std::size_t max_samples, const explicit_tableau& tab)
{
    if (!(h_ref > 0.0) || !(t_final >= 0.0)) {
        throw invalid_argument("reference_solution: need h_ref > 0 and t_final >= 0");
    }
    if (max_samples < 2) {
        throw invalid_argument("reference_solution: max_samples must be at least 2");
    }
    const auto field = poisson_field(sys);

    auto steps = static_cast<std::size_t>(std::ceil(t_final / h_ref - 1e-9));
    const std::size_t stride = steps == 0 ? 1 : (steps + max_samples - 2) / (max_samples - 1);

    trajectory traj;
    auto record = [&](double t, const vector& q) { traj.samples.push_back({t, q, sys.alpha(q)}); };

    vector q(q0.begin(), q0.end());
    record(0.0, q);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * h_ref;
        const double h = (k + 1 == steps) ? t_final - t : h_ref;
        q = erk_step(field, tab, h, q);
        if (k + 1 == steps || (k + 1) % stride == 0) {
            record(k + 1 == steps ? t_final : t + h, q);
        }
    }
    return traj;
}

} // namespace vlint

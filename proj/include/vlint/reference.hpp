#pragma once

#include <functional>
#include <string>

#include <vlint/linalg.hpp>
#include <vlint/system.hpp>

namespace vlint {

/// Explicit Runge-Kutta coefficients (strictly lower-triangular a).
struct explicit_tableau {
    std::string name;
    std::size_t s = 0;
    matrix a;
    vector b;
    vector c;
    int order = 0;
};

/// Verner's 6(5) pair, propagating with the sixth-order weights.
explicit_tableau verner6();
/// The classical fourth-order method.
explicit_tableau classical_rk4();

using ode_field = std::function<vector(std::span<const double>)>;

/// q̇ = M(q)⁻¹ DH(q) for `sys`. For linear_alpha systems Λ is factored once.
ode_field poisson_field(const velocity_linear_system& sys);

/// One explicit step of q̇ = f(q).
vector erk_step(const ode_field& f, const explicit_tableau& tab, double h, std::span<const double> q);

/// One explicit step of q̇ = el_vector_field(q). The field is autonomous; `t`
/// is accepted for interface symmetry and ignored.
vector erk_step(const velocity_linear_system& sys, const explicit_tableau& tab, double h, double t,
                std::span<const double> q);

/// Fixed-step explicit integration of the Poisson ODE from q0 to t_final.
/// The last step is shortened to land on t_final. Momenta are filled with
/// p(t) = α(q(t)). At most `max_samples` evenly thinned samples are kept,
/// always including both endpoints.
trajectory reference_solution(const velocity_linear_system& sys, std::span<const double> q0, double t_final,
                              double h_ref = 1e-6, std::size_t max_samples = 1001,
                              const explicit_tableau& tab = verner6());

} // namespace vlint

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <vlint/prk.hpp>
#include <vlint/system.hpp>
#include <vlint/tableaus.hpp>

namespace vlint {

/// Endpoint errors of fixed-step runs against a reference, one entry per
/// step size. Failed runs leave their error entries empty.
struct convergence_report {
    std::string method_id;
    std::string model_id;
    double t_final = 0.0;
    std::vector<double> step_sizes;
    std::vector<std::optional<double>> errors;   ///< ‖q_num(T) − q_ref(T)‖∞
    std::vector<std::optional<double>> errors_p; ///< ‖p_num(T) − p_ref(T)‖∞
    std::vector<std::string> failures;           ///< empty string on success
    std::optional<double> fitted_order;
    std::pair<std::size_t, std::size_t> fit_range{0, 0}; ///< half-open index range
};

struct drift_report {
    std::string method_id;
    std::string model_id;
    double h = 0.0;
    double t_final = 0.0;
    std::vector<double> sample_times;
    std::vector<double> hamiltonian_values;
    std::vector<double> constraint_residuals;
    /// Least-squares slope of H against t over every step.
    double linear_drift_rate = 0.0;
    double max_abs_hamiltonian_deviation = 0.0; ///< max_k |H(q_k) − H(q_0)| over every step
    double max_constraint_residual = 0.0;       ///< over every step
    double reached_time = 0.0;
    bool terminated_early = false;
    std::string failure;
};

/// Sample of the reference solution at the final time.
struct reference_endpoint {
    vector q;
    vector p;
};

struct convergence_options {
    /// Errors at or below this level are treated as reference noise and kept
    /// out of the order fit.
    double error_floor = 1e-12;
    solver_config solver{};
    /// Run the step sizes on separate threads. Results do not depend on it.
    bool parallel = true;
};

/// Integrates from consistent_init(q0) to t_final with each step size and
/// compares the endpoint with `reference`. A step size that does not divide
/// t_final gets a shortened last step. Solver failures are recorded per
/// step size, never thrown.
convergence_report run_convergence(const velocity_linear_system& sys, const partitioned_tableau& tab,
                                   std::span<const double> q0, double t_final, std::span<const double> step_sizes,
                                   const reference_endpoint& reference, const convergence_options& opts = {});

/// Step sizes t_final / N for `count` integers N spaced logarithmically
/// between t_final / h_max and t_final / h_min, strictly decreasing. N is
/// rounded to an even number no smaller than t_final / h_max.
std::vector<double> dividing_step_sizes(double t_final, double h_max, double h_min, std::size_t count);

/// Least-squares slope of log(error) against log(h). Throws
/// fewer_than_two_points.
double fit_order(std::span<const double> step_sizes, std::span<const double> errors);

/// Longest contiguous index range [first, last) over which errors are
/// present, above `floor`, and strictly decrease with h. Ties go to the
/// range with the larger step sizes. Returns {0, 0} when no range has two
/// points.
std::pair<std::size_t, std::size_t> select_fit_range(std::span<const std::optional<double>> errors, double floor);

/// Long run recording H(q_k) and ‖p_k − α(q_k)‖∞ at no more than
/// max_samples evenly thinned steps. A solver failure ends the run early
/// and is recorded.
drift_report run_drift(const velocity_linear_system& sys, const partitioned_tableau& tab,
                       std::span<const double> q0, double h, double t_final, std::size_t max_samples,
                       const solver_config& cfg = {});

/// ‖J Λ⁻¹ Jᵀ − Λ⁻¹‖∞ (largest absolute row sum), where J is the central
/// difference Jacobian of q ↦ prk_step(consistent_init(q)).q. Requires
/// linear_alpha; throws unsupported_system otherwise.
double poisson_map_check(const velocity_linear_system& sys, const partitioned_tableau& tab, double h,
                         std::span<const double> q, const solver_config& cfg = {},
                         std::optional<double> fd_eps = {});

} // namespace vlint

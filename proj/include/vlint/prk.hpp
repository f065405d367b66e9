#pragma once

#include <string>
#include <utility>

#include <vlint/errors.hpp>
#include <vlint/linalg.hpp>
#include <vlint/system.hpp>
#include <vlint/tableaus.hpp>

namespace vlint {

enum class jacobian_mode {
    exact,     ///< includes the second-derivative terms D(Dαᵀv) − D²H
    simplified ///< drops them
};

enum class initial_guess_mode {
    el_field, ///< every stage velocity starts at el_vector_field(q)
    zero
};

struct solver_config {
    /// Max-norm tolerance on the stage residual, scaled by |h|.
    double newton_tol = 1e-12;
    int max_newton_iters = 50;
    jacobian_mode jacobian = jacobian_mode::exact;
    initial_guess_mode initial_guess = initial_guess_mode::el_field;
    /// Fill StageSolveReport::w_condition on every step, not only on failure.
    bool record_w_condition = false;

    void validate() const;
};

/// Newton did not bring the residual below tolerance.
class newton_divergence : public error {
public:
    newton_divergence(const std::string& what, stage_solve_report report) : error(what), report_(std::move(report)) {}
    [[nodiscard]] const stage_solve_report& report() const noexcept { return report_; }

private:
    stage_solve_report report_;
};

/// LU failure of the Newton matrix.
class singular_stage_jacobian : public error {
public:
    using error::error;
};

/// ‖p − α(q)‖∞ > 10·|h|·(1 + ‖q‖∞) on entry to a step.
class inconsistent_state : public error {
public:
    using error::error;
};

/// Stage positions Q_i = q + h Σ_j a_ij qdot_j, one row per stage.
matrix stage_positions(const partitioned_tableau& tab, double h, std::span<const double> q, const matrix& qdots);

/// R_i = α(Q_i) − p − h Σ_j ā_ij (Dα(Q_j)ᵀ qdot_j − DH(Q_j)); `qdots` and
/// the result are s×n with one stage per row.
matrix stage_residual(const velocity_linear_system& sys, const partitioned_tableau& tab, double h,
                      const phase_point& x, const matrix& qdots);

/// ∂R/∂qdot as an (s·n)×(s·n) matrix; block (i, m) is
///   h a_im Dα(Q_i) − h ā_im Dα(Q_m)ᵀ − h² Σ_j ā_ij a_jm B_j,
/// with B_j = D(Dαᵀ qdot_j)(Q_j) − D²H(Q_j). Simplified mode omits B_j.
matrix stage_jacobian(const velocity_linear_system& sys, const partitioned_tableau& tab, double h,
                      const phase_point& x, const matrix& qdots, jacobian_mode mode = jacobian_mode::exact);

/// W = (Ā ⊗ I){Dαᵀ} − (A ⊗ I){Dα} at the stage points ξ_i (rows of q_stages).
matrix w_matrix(const velocity_linear_system& sys, const partitioned_tableau& tab, const matrix& q_stages);

struct stage_solution {
    matrix qdots; ///< s×n
    matrix pdots; ///< s×n
    stage_solve_report report;
};

/// Solves the stage equations for the stage velocities by Newton iteration,
/// then recovers ṗ_i = Dα(Q_i)ᵀ qdot_i − DH(Q_i).
///
/// Throws newton_divergence, singular_stage_jacobian or inconsistent_state.
stage_solution solve_stages(const velocity_linear_system& sys, const partitioned_tableau& tab, double h,
                            const phase_point& x, const solver_config& cfg = {});

struct step_result {
    phase_point state;
    stage_solve_report report;
};

/// One step: q̄ = q + h Σ b_j qdot_j, p̄ = p + h Σ b_j pdot_j, t̄ = t + h.
step_result prk_step(const velocity_linear_system& sys, const partitioned_tableau& tab, double h,
                     const phase_point& x, const solver_config& cfg = {});

/// Fixed-step integration from x0 for `steps` steps of size h. Samples
/// every step and keeps the per-step reports. Solver errors propagate.
trajectory integrate(const velocity_linear_system& sys, const partitioned_tableau& tab, const phase_point& x0,
                     double h, std::size_t steps, const solver_config& cfg = {});

} // namespace vlint

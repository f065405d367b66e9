#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <vlint/linalg.hpp>

namespace vlint {

/// A Lagrangian linear in velocities, L(q, q̇) = α(q)·q̇ − H(q).
///
/// Every derivative is supplied analytically by the model. The second
/// derivatives of α enter only through the contraction
/// d2_alpha_vp(q, v)(μ, ν) = Σ_β ∂²α_β/∂q^μ∂q^ν · v^β.
struct velocity_linear_system {
    std::string name;
    std::size_t n = 0;

    std::function<vector(std::span<const double>)> alpha;
    std::function<matrix(std::span<const double>)> d_alpha;
    std::function<matrix(std::span<const double>, std::span<const double>)> d2_alpha_vp;
    std::function<double(std::span<const double>)> hamiltonian;
    std::function<vector(std::span<const double>)> dh;
    std::function<matrix(std::span<const double>)> d2h;

    /// Λ with α(q) = −½Λq, when α is exactly linear.
    std::optional<matrix> linear_alpha;
};

struct phase_point {
    double t = 0.0;
    vector q;
    vector p;
};

/// Newton record of one implicit step.
struct stage_solve_report {
    int iterations = 0;
    double final_residual = 0.0;
    std::optional<double> w_condition;
    bool converged = false;
};

struct trajectory {
    std::vector<phase_point> samples;
    std::vector<stage_solve_report> reports;

    [[nodiscard]] const phase_point& back() const { return samples.back(); }
    [[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
};

inline constexpr double default_consistency_tol = 1e-10;

/// M(q) = Dα(q)ᵀ − Dα(q).
matrix mass_matrix(const velocity_linear_system& sys, std::span<const double> q);

/// q̇ solving M(q)·q̇ = DH(q). Throws singular_mass_matrix.
vector el_vector_field(const velocity_linear_system& sys, std::span<const double> q);

/// Residuals (p − α(q), ṗ − Dα(q)ᵀq̇ + DH(q)) of the index-1 DAE.
std::pair<vector, vector> dae_residual(const velocity_linear_system& sys, const phase_point& x,
                                       std::span<const double> qdot, std::span<const double> pdot);

/// (t = 0, q0, α(q0)).
phase_point consistent_init(const velocity_linear_system& sys, std::span<const double> q0);

/// ‖p − α(q)‖∞.
double constraint_residual(const velocity_linear_system& sys, const phase_point& x);

bool is_consistent(const velocity_linear_system& sys, const phase_point& x, double tol = default_consistency_tol);

/// Throws invalid_argument if the system bundle is incomplete or n is odd.
void validate(const velocity_linear_system& sys);

} // namespace vlint

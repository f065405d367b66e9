#pragma once

#include <string_view>
#include <vector>

#include <vlint/system.hpp>

namespace vlint {

/// Planar Kepler problem in the phase variables q = (x, y, p_x, p_y).
struct kepler_params {
    double e = 0.5;      ///< eccentricity
    double a_axis = 1.0; ///< semi-major axis
    double h0 = -0.5;    ///< Hamiltonian offset

    void validate() const;
};

struct vortex_params {
    std::vector<double> gammas{4.0, 2.0}; ///< circulations Γ_i
    double h0 = 0.0;

    void validate() const;
};

struct lotka_volterra_params {
    double h0 = 2.0;
};

/// α(q) = (½q³, ½q⁴, −½q¹, −½q²),
/// H(q) = ½((q³)² + (q⁴)²) − 1/√((q¹)² + (q²)²) − h0.
velocity_linear_system kepler_system(const kepler_params& p = {});

/// Pericenter state ((1 − e)a, 0, 0, √((1 + e)/(1 − e)) / √a), unit gravitational parameter.
vector kepler_pericenter(const kepler_params& p = {});

/// K planar point vortices, q = (x_1, y_1, ..., x_K, y_K),
/// α = ½Γ_i(−y_i, x_i) per vortex,
/// H = (1/4π) Σ_{i<j} Γ_i Γ_j log(|r_i − r_j|²) − h0.
velocity_linear_system vortex_system(const vortex_params& p = {});

/// Two vortices separated by d on the x axis with the center of vorticity
/// at the origin.
vector vortex_pair_initial(const vortex_params& p, double d);

/// Rotation rate ω = (Γ₁ + Γ₂)/(2π d²) of a vortex pair.
double vortex_pair_omega(const vortex_params& p, double d);

/// Closed-form positions of a vortex pair started by vortex_pair_initial.
/// Throws invalid_argument unless K = 2.
vector vortex_exact(const vortex_params& p, double d, double t);

/// Lotka-Volterra in q = (u, v): α = (log(v)/u + v, u),
/// H = u − log u + v − 2 log v − h0. Domain u, v > 0.
velocity_linear_system lotka_volterra_system(const lotka_volterra_params& p = {});

/// α = (y/2, −x/2), H ≡ 0; the exact flow is the identity.
velocity_linear_system toy_system();

/// "kepler", "vortex2", "lotka_volterra", "toy" with default parameters.
velocity_linear_system model_by_id(std::string_view id);

const std::vector<std::string>& model_ids();

} // namespace vlint

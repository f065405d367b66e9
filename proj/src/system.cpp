#include <vlint/system.hpp>

#include <algorithm>
#include <cmath>

#include <vlint/errors.hpp>

namespace vlint {

matrix mass_matrix(const velocity_linear_system& sys, std::span<const double> q)
{
    const matrix da = sys.d_alpha(q);
    const std::size_t n = da.rows();
    matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = da(j, i) - da(i, j);
        }
    }
    return m;
}

vector el_vector_field(const velocity_linear_system& sys, std::span<const double> q)
{
    const auto m = mass_matrix(sys, q);
    const auto dh = sys.dh(q);
    try {
        return lu_decomposition(m).solve(dh);
    } catch (const singular_matrix& e) {
        throw singular_mass_matrix(sys.name + ": mass matrix is singular (" + e.what() + ")");
    }
}

std::pair<vector, vector> dae_residual(const velocity_linear_system& sys, const phase_point& x,
                                       std::span<const double> qdot, std::span<const double> pdot)
{
    const std::size_t n = sys.n;
    const auto a = sys.alpha(x.q);
    const auto da = sys.d_alpha(x.q);
    const auto dh = sys.dh(x.q);

    vector r1(n), r2(n);
    for (std::size_t mu = 0; mu < n; ++mu) {
        r1[mu] = x.p[mu] - a[mu];
        double acc = 0.0;
        for (std::size_t nu = 0; nu < n; ++nu) {
            acc += da(nu, mu) * qdot[nu];
        }
        r2[mu] = pdot[mu] - acc + dh[mu];
    }
    return {std::move(r1), std::move(r2)};
}

phase_point consistent_init(const velocity_linear_system& sys, std::span<const double> q0)
{
    return {0.0, vector(q0.begin(), q0.end()), sys.alpha(q0)};
}

double constraint_residual(const velocity_linear_system& sys, const phase_point& x)
{
    const auto a = sys.alpha(x.q);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(x.p[i] - a[i]));
    }
    return m;
}

bool is_consistent(const velocity_linear_system& sys, const phase_point& x, double tol)
{
    return constraint_residual(sys, x) <= tol;
}

void validate(const velocity_linear_system& sys)
{
    if (sys.n == 0 || sys.n % 2 != 0) {
        throw invalid_argument(sys.name + ": phase dimension must be even and positive");
    }
    if (!sys.alpha || !sys.d_alpha || !sys.d2_alpha_vp || !sys.hamiltonian || !sys.dh || !sys.d2h) {
        throw invalid_argument(sys.name + ": incomplete system definition");
    }
    if (sys.linear_alpha && (sys.linear_alpha->rows() != sys.n || !sys.linear_alpha->square())) {
        throw invalid_argument(sys.name + ": linear_alpha has the wrong shape");
    }
}

} // namespace vlint

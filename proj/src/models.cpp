#include <vlint/models.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <vlint/errors.hpp>

namespace vlint {

namespace {

matrix linear_d_alpha(const matrix& lambda) { return -0.5 * lambda; }

vector linear_alpha_of(const matrix& lambda, std::span<const double> q)
{
    auto a = lambda * q;
    for (auto& v : a) {
        v *= -0.5;
    }
    return a;
}

void install_linear_alpha(velocity_linear_system& sys, matrix lambda)
{
    sys.alpha = [lambda](std::span<const double> q) { return linear_alpha_of(lambda, q); };
    sys.d_alpha = [da = linear_d_alpha(lambda)](std::span<const double>) { return da; };
    sys.d2_alpha_vp = [n = sys.n](std::span<const double>, std::span<const double>) { return matrix(n, n); };
    sys.linear_alpha = std::move(lambda);
}

double kepler_radius(std::span<const double> q)
{
    const double r2 = q[0] * q[0] + q[1] * q[1];
    if (!(r2 > 0.0) || !std::isfinite(r2)) {
        throw domain_error("kepler: position at the origin (potential singularity)");
    }
    return std::sqrt(r2);
}

void require_positive(double u, double v)
{
    if (!(u > 0.0) || !(v > 0.0)) {
        throw domain_error("lotka_volterra: state outside u > 0, v > 0 (u = " + std::to_string(u) +
                           ", v = " + std::to_string(v) + ")");
    }
}

} // namespace

void kepler_params::validate() const
{
    if (!(e >= 0.0 && e < 1.0)) {
        throw invalid_argument("kepler: eccentricity must lie in [0, 1)");
    }
    if (!(a_axis > 0.0)) {
        throw invalid_argument("kepler: semi-major axis must be positive");
    }
}

void vortex_params::validate() const
{
    if (gammas.size() < 2) {
        throw invalid_argument("vortex: at least two vortices required");
    }
    for (double g : gammas) {
        if (g == 0.0 || !std::isfinite(g)) {
            throw invalid_argument("vortex: circulations must be finite and nonzero");
        }
    }
}

velocity_linear_system kepler_system(const kepler_params& p)
{
    p.validate();
    velocity_linear_system sys;
    sys.name = "kepler";
    sys.n = 4;

    // Antisymmetric part of the canonical one-form p_x dx + p_y dy.
    matrix lambda(4, 4);
    lambda(0, 2) = -1.0;
    lambda(1, 3) = -1.0;
    lambda(2, 0) = 1.0;
    lambda(3, 1) = 1.0;
    install_linear_alpha(sys, std::move(lambda));

    const double h0 = p.h0;
    sys.hamiltonian = [h0](std::span<const double> q) {
        const double r = kepler_radius(q);
        return 0.5 * (q[2] * q[2] + q[3] * q[3]) - 1.0 / r - h0;
    };
    sys.dh = [](std::span<const double> q) {
        const double r = kepler_radius(q);
        const double r3 = r * r * r;
        return vector{q[0] / r3, q[1] / r3, q[2], q[3]};
    };
    sys.d2h = [](std::span<const double> q) {
        const double r = kepler_radius(q);
        const double r3 = r * r * r;
        const double r5 = r3 * r * r;
        matrix m(4, 4);
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                m(i, j) = (i == j ? 1.0 / r3 : 0.0) - 3.0 * q[i] * q[j] / r5;
            }
        }
        m(2, 2) = 1.0;
        m(3, 3) = 1.0;
        return m;
    };
    return sys;
}

vector kepler_pericenter(const kepler_params& p)
{
    p.validate();
    return {(1.0 - p.e) * p.a_axis, 0.0, 0.0, std::sqrt((1.0 + p.e) / ((1.0 - p.e) * p.a_axis))};
}

velocity_linear_system vortex_system(const vortex_params& p)
{
    p.validate();
    const std::size_t k = p.gammas.size();
    velocity_linear_system sys;
    sys.name = k == 2 ? "vortex2" : "vortex" + std::to_string(k);
    sys.n = 2 * k;

    matrix lambda(sys.n, sys.n);
    for (std::size_t i = 0; i < k; ++i) {
        lambda(2 * i, 2 * i + 1) = p.gammas[i];
        lambda(2 * i + 1, 2 * i) = -p.gammas[i];
    }
    install_linear_alpha(sys, std::move(lambda));

    const auto gammas = p.gammas;
    const double h0 = p.h0;
    const double coupling = 1.0 / (4.0 * std::numbers::pi);

    auto separation = [](std::span<const double> q, std::size_t i, std::size_t j) {
        const double dx = q[2 * i] - q[2 * j];
        const double dy = q[2 * i + 1] - q[2 * j + 1];
        const double r2 = dx * dx + dy * dy;
        if (!(r2 > 0.0) || !std::isfinite(r2)) {
            throw domain_error("vortex: vortices " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                               " coincide");
        }
        return std::array<double, 3>{dx, dy, r2};
    };

    sys.hamiltonian = [=](std::span<const double> q) {
        double h = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) {
                h += gammas[i] * gammas[j] * std::log(separation(q, i, j)[2]);
            }
        }
        return coupling * h - h0;
    };
    sys.dh = [=](std::span<const double> q) {
        vector g(2 * k, 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) {
                const auto [dx, dy, r2] = separation(q, i, j);
                const double w = coupling * gammas[i] * gammas[j] * 2.0 / r2;
                g[2 * i] += w * dx;
                g[2 * i + 1] += w * dy;
                g[2 * j] -= w * dx;
                g[2 * j + 1] -= w * dy;
            }
        }
        return g;
    };
    sys.d2h = [=](std::span<const double> q) {
        matrix m(2 * k, 2 * k);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) {
                const auto [dx, dy, r2] = separation(q, i, j);
                const double w = coupling * gammas[i] * gammas[j];
                const double r4 = r2 * r2;
                // Hessian of log(dx² + dy²) in (dx, dy).
                matrix local{{2.0 / r2 - 4.0 * dx * dx / r4, -4.0 * dx * dy / r4},
                             {-4.0 * dx * dy / r4, 2.0 / r2 - 4.0 * dy * dy / r4}};
                local *= w;
                m.add_block(2 * i, 2 * i, local);
                m.add_block(2 * j, 2 * j, local);
                m.add_block(2 * i, 2 * j, local, -1.0);
                m.add_block(2 * j, 2 * i, local, -1.0);
            }
        }
        return m;
    };
    return sys;
}

vector vortex_pair_initial(const vortex_params& p, double d) { return vortex_exact(p, d, 0.0); }

double vortex_pair_omega(const vortex_params& p, double d)
{
    if (p.gammas.size() != 2) {
        throw invalid_argument("vortex pair: exactly two circulations required");
    }
    return (p.gammas[0] + p.gammas[1]) / (2.0 * std::numbers::pi * d * d);
}

vector vortex_exact(const vortex_params& p, double d, double t)
{
    p.validate();
    if (p.gammas.size() != 2) {
        throw invalid_argument("vortex_exact: closed form available only for two vortices");
    }
    const double g1 = p.gammas[0];
    const double g2 = p.gammas[1];
    const double wt = vortex_pair_omega(p, d) * t;
    const double c = std::cos(wt);
    const double s = std::sin(wt);
    const double r1 = g2 * d / (g1 + g2);
    const double r2 = -g1 * d / (g1 + g2);
    return {r1 * c, r1 * s, r2 * c, r2 * s};
}

velocity_linear_system lotka_volterra_system(const lotka_volterra_params& p)
{
    velocity_linear_system sys;
    sys.name = "lotka_volterra";
    sys.n = 2;
    sys.alpha = [](std::span<const double> q) {
        require_positive(q[0], q[1]);
        return vector{std::log(q[1]) / q[0] + q[1], q[0]};
    };
    sys.d_alpha = [](std::span<const double> q) {
        const double u = q[0];
        const double v = q[1];
        require_positive(u, v);
        return matrix{{-std::log(v) / (u * u), 1.0 / (u * v) + 1.0}, {1.0, 0.0}};
    };
    // Only α₁ is nonlinear, so the contraction is w₁ times its Hessian.
    sys.d2_alpha_vp = [](std::span<const double> q, std::span<const double> w) {
        const double u = q[0];
        const double v = q[1];
        require_positive(u, v);
        const double off = -1.0 / (u * u * v);
        matrix m{{2.0 * std::log(v) / (u * u * u), off}, {off, -1.0 / (u * v * v)}};
        m *= w[0];
        return m;
    };
    const double h0 = p.h0;
    sys.hamiltonian = [h0](std::span<const double> q) {
        require_positive(q[0], q[1]);
        return q[0] - std::log(q[0]) + q[1] - 2.0 * std::log(q[1]) - h0;
    };
    sys.dh = [](std::span<const double> q) {
        require_positive(q[0], q[1]);
        return vector{1.0 - 1.0 / q[0], 1.0 - 2.0 / q[1]};
    };
    sys.d2h = [](std::span<const double> q) {
        require_positive(q[0], q[1]);
        return matrix{{1.0 / (q[0] * q[0]), 0.0}, {0.0, 2.0 / (q[1] * q[1])}};
    };
    return sys;
}

velocity_linear_system toy_system()
{
    velocity_linear_system sys;
    sys.name = "toy";
    sys.n = 2;
    install_linear_alpha(sys, matrix{{0.0, -1.0}, {1.0, 0.0}});
    sys.hamiltonian = [](std::span<const double>) { return 0.0; };
    sys.dh = [](std::span<const double>) { return vector{0.0, 0.0}; };
    sys.d2h = [](std::span<const double>) { return matrix(2, 2); };
    return sys;
}

const std::vector<std::string>& model_ids()
{
    static const std::vector<std::string> ids{"kepler", "vortex2", "lotka_volterra", "toy"};
    return ids;
}

velocity_linear_system model_by_id(std::string_view id)
{
    if (id == "kepler") {
        return kepler_system();
    }
    if (id == "vortex2") {
        return vortex_system();
    }
    if (id == "lotka_volterra") {
        return lotka_volterra_system();
    }
    if (id == "toy") {
        return toy_system();
    }
    throw unknown_identifier("unknown model '" + std::string(id) + "'");
}

} // namespace vlint

#include <doctest.h>

#include <cmath>

#include <vlint/errors.hpp>
#include <vlint/models.hpp>
#include <vlint/system.hpp>

using namespace vlint;

TEST_CASE("mass matrix of the Kepler system is Lambda")
{
    const auto sys = kepler_system();
    const auto m = mass_matrix(sys, kepler_pericenter());
    const matrix expected{{0, 0, -1, 0}, {0, 0, 0, -1}, {1, 0, 0, 0}, {0, 1, 0, 0}};
    CHECK(m == expected);
    CHECK(m == *sys.linear_alpha);
}

TEST_CASE("mass matrix of the toy system")
{
    // alpha = (y/2, -x/2): D alpha = [[0, 1/2], [-1/2, 0]], M = D alphaᵀ - D alpha.
    const auto sys = toy_system();
    const auto m = mass_matrix(sys, vector{0.3, -1.2});
    CHECK(m == matrix{{0.0, -1.0}, {1.0, 0.0}});
}

TEST_CASE("mass matrix is zero for constant alpha and antisymmetric in general")
{
    auto sys = toy_system();
    sys.alpha = [](std::span<const double>) { return vector{1.0, 2.0}; };
    sys.d_alpha = [](std::span<const double>) { return matrix(2, 2); };
    CHECK(mass_matrix(sys, vector{1.0, 1.0}) == matrix(2, 2));
    CHECK_THROWS_AS(el_vector_field(sys, vector{1.0, 1.0}), singular_mass_matrix);

    const auto lv = lotka_volterra_system();
    for (const vector q : {vector{1.0, 1.0}, vector{0.4, 3.1}, vector{2.5, 0.2}}) {
        const auto m = mass_matrix(lv, q);
        CHECK((m + m.transpose()) == matrix(2, 2));
    }
}

TEST_CASE("el_vector_field")
{
    const auto toy = toy_system();
    CHECK(el_vector_field(toy, vector{3.0, -4.0}) == vector{0.0, 0.0});

    const auto lv = lotka_volterra_system();
    const auto eq = el_vector_field(lv, vector{1.0, 2.0});
    CHECK(std::abs(eq[0]) == 0.0);
    CHECK(std::abs(eq[1]) == 0.0);

    const auto f11 = el_vector_field(lv, vector{1.0, 1.0});
    CHECK(f11[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(std::abs(f11[1]) < 1e-15);

    // u' = u(v - 2), v' = v(1 - u) at a generic point.
    const double u = 0.7, v = 2.9;
    const auto f = el_vector_field(lv, vector{u, v});
    CHECK(f[0] == doctest::Approx(u * (v - 2.0)).epsilon(1e-13));
    CHECK(f[1] == doctest::Approx(v * (1.0 - u)).epsilon(1e-13));

    // M f = DH.
    const auto kep = kepler_system();
    const vector q{0.3, -0.8, 0.6, 0.2};
    const auto fk = el_vector_field(kep, q);
    const auto mf = mass_matrix(kep, q) * fk;
    const auto dh = kep.dh(q);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(mf[i] - dh[i]) <= 1e-12 * std::max(1.0, std::abs(dh[i])));
    }
}

TEST_CASE("consistent_init and dae_residual")
{
    const auto kep = kepler_system();
    const auto q0 = kepler_pericenter();
    CHECK(q0[0] == 0.5);
    CHECK(std::abs(q0[3] - 1.7320508075688772) < 1e-15);
    const auto x = consistent_init(kep, q0);
    CHECK(x.t == 0.0);
    const auto expected_p = (-0.5) * *kep.linear_alpha * std::span<const double>(q0);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(x.p[i] == expected_p[i]);
    }
    const auto qdot = el_vector_field(kep, q0);
    auto pdot = kep.d_alpha(q0).transpose() * std::span<const double>(qdot);
    const auto dh = kep.dh(q0);
    for (std::size_t i = 0; i < 4; ++i) {
        pdot[i] -= dh[i];
    }
    const auto [r1, r2] = dae_residual(kep, x, qdot, pdot);
    CHECK(norm_inf(r1) == 0.0);
    CHECK(norm_inf(r2) <= 1e-14);
    CHECK(is_consistent(kep, x));
    CHECK(constraint_residual(kep, x) == 0.0);

    const auto toy = toy_system();
    const auto xt = consistent_init(toy, vector{2.0, 6.0});
    CHECK(xt.p == vector{3.0, -1.0});

    const auto lv = lotka_volterra_system();
    const auto xl = consistent_init(lv, vector{1.0, 1.0});
    CHECK(xl.p == vector{1.0, 1.0});
    // Equilibrium with a perturbed momentum.
    phase_point off = consistent_init(lv, vector{1.0, 2.0});
    off.p[0] += 1.0;
    const auto [e1, e2] = dae_residual(lv, off, vector{0.0, 0.0}, vector{0.0, 0.0});
    CHECK(e1 == vector{1.0, 0.0});
    CHECK(norm_inf(e2) == 0.0);
    CHECK_FALSE(is_consistent(lv, off));
    CHECK(constraint_residual(lv, off) == 1.0);
}

TEST_CASE("validate rejects malformed systems")
{
    for (const auto& id : model_ids()) {
        CHECK_NOTHROW(validate(model_by_id(id)));
    }
    auto odd = toy_system();
    odd.n = 3;
    CHECK_THROWS_AS(validate(odd), invalid_argument);
    auto no_h = toy_system();
    no_h.hamiltonian = nullptr;
    CHECK_THROWS_AS(validate(no_h), invalid_argument);
}

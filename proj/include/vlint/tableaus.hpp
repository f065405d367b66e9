#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <vlint/linalg.hpp>

namespace vlint {

/// Coefficients of an s-stage partitioned Runge-Kutta method: `a` drives
/// the position stages and `a_bar` the momentum stages. A non-partitioned
/// method has a_bar == a.
struct partitioned_tableau {
    std::string name;
    std::size_t s = 0;
    matrix a;
    matrix a_bar;
    vector b;
    vector c;
    int classical_order = 0;
    bool stiffly_accurate = false;

    [[nodiscard]] bool partitioned() const { return !(a == a_bar); }
};

/// s-stage Gauss collocation, s in 1..3.
partitioned_tableau gauss(int s);
/// s-stage Radau IIA, s in 2..3.
partitioned_tableau radau_iia(int s);
/// s-stage Lobatto IIIA (positions) paired with Lobatto IIIB (momenta), s in 2..4.
partitioned_tableau lobatto_iiia_iiib(int s);

/// ā_ij = b_j − (b_j / b_i)·a_ji, the unique ā making (a, ā, b) satisfy
/// b_i ā_ij + b_j a_ji = b_i b_j. Throws zero_weight if some b_i is zero.
matrix conjugate_tableau(const matrix& a, std::span<const double> b);

/// max_ij |b_i ā_ij + b_j a_ji − b_i b_j|.
double check_symplecticity(const partitioned_tableau& t);

struct order_condition_residual {
    std::string id; ///< "B3", "C2", ...
    double residual = 0.0;
};

/// Simplifying conditions B(k): Σ b_i c_i^{k−1} = 1/k and
/// C(k): Σ_j a_ij c_j^{k−1} = c_i^k / k for k = 1..up_to. The C residual is
/// the maximum over stages. B entries come first.
std::vector<order_condition_residual> check_order_conditions(const partitioned_tableau& t, int up_to);

/// `a_sj == b_j` for every j.
bool is_stiffly_accurate(const matrix& a, std::span<const double> b);

/// Lookup by identifier: "gauss1".."gauss3", "radau_iia2", "radau_iia3",
/// "lobatto2".."lobatto4". Throws unknown_identifier.
partitioned_tableau tableau_by_id(std::string_view id);

/// Identifiers accepted by tableau_by_id, in canonical order.
const std::vector<std::string>& tableau_ids();

} // namespace vlint

#include <vlint/tableaus.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include <vlint/errors.hpp>

namespace vlint {

namespace {

partitioned_tableau make(std::string name, matrix a, matrix a_bar, vector b, vector c, int order)
{
    partitioned_tableau t;
    t.name = std::move(name);
    t.s = b.size();
    t.stiffly_accurate = is_stiffly_accurate(a, b);
    t.a = std::move(a);
    t.a_bar = std::move(a_bar);
    t.b = std::move(b);
    t.c = std::move(c);
    t.classical_order = order;
    return t;
}

} // namespace

bool is_stiffly_accurate(const matrix& a, std::span<const double> b)
{
    const std::size_t s = b.size();
    if (s == 0 || a.rows() != s) {
        return false;
    }
    for (std::size_t j = 0; j < s; ++j) {
        if (a(s - 1, j) != b[j]) {
            return false;
        }
    }
    return true;
}

partitioned_tableau gauss(int s)
{
    switch (s) {
    case 1: {
        matrix a{{0.5}};
        return make("gauss1", a, a, {1.0}, {0.5}, 2);
    }
    case 2: {
        const double r3 = std::sqrt(3.0);
        matrix a{{0.25, 0.25 - r3 / 6.0}, {0.25 + r3 / 6.0, 0.25}};
        return make("gauss2", a, a, {0.5, 0.5}, {0.5 - r3 / 6.0, 0.5 + r3 / 6.0}, 4);
    }
    case 3: {
        const double r15 = std::sqrt(15.0);
        matrix a{{5.0 / 36.0, 2.0 / 9.0 - r15 / 15.0, 5.0 / 36.0 - r15 / 30.0},
                 {5.0 / 36.0 + r15 / 24.0, 2.0 / 9.0, 5.0 / 36.0 - r15 / 24.0},
                 {5.0 / 36.0 + r15 / 30.0, 2.0 / 9.0 + r15 / 15.0, 5.0 / 36.0}};
        return make("gauss3", a, a, {5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0}, {0.5 - r15 / 10.0, 0.5, 0.5 + r15 / 10.0},
                    6);
    }
    default:
        throw unsupported_stage_count("gauss: stage count " + std::to_string(s) + " not in 1..3");
    }
}

partitioned_tableau radau_iia(int s)
{
    switch (s) {
    case 2: {
        matrix a{{5.0 / 12.0, -1.0 / 12.0}, {0.75, 0.25}};
        return make("radau_iia2", a, a, {0.75, 0.25}, {1.0 / 3.0, 1.0}, 3);
    }
    case 3: {
        const double r6 = std::sqrt(6.0);
        matrix a{{(88.0 - 7.0 * r6) / 360.0, (296.0 - 169.0 * r6) / 1800.0, (-2.0 + 3.0 * r6) / 225.0},
                 {(296.0 + 169.0 * r6) / 1800.0, (88.0 + 7.0 * r6) / 360.0, (-2.0 - 3.0 * r6) / 225.0},
                 {(16.0 - r6) / 36.0, (16.0 + r6) / 36.0, 1.0 / 9.0}};
        vector b{(16.0 - r6) / 36.0, (16.0 + r6) / 36.0, 1.0 / 9.0};
        return make("radau_iia3", a, a, b, {(4.0 - r6) / 10.0, (4.0 + r6) / 10.0, 1.0}, 5);
    }
    default:
        throw unsupported_stage_count("radau_iia: stage count " + std::to_string(s) + " not in 2..3");
    }
}

partitioned_tableau lobatto_iiia_iiib(int s)
{
    switch (s) {
    case 2: {
        matrix a{{0.0, 0.0}, {0.5, 0.5}};
        matrix a_bar{{0.5, 0.0}, {0.5, 0.0}};
        return make("lobatto2", a, a_bar, {0.5, 0.5}, {0.0, 1.0}, 2);
    }
    case 3: {
        matrix a{{0.0, 0.0, 0.0}, {5.0 / 24.0, 1.0 / 3.0, -1.0 / 24.0}, {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}};
        matrix a_bar{{1.0 / 6.0, -1.0 / 6.0, 0.0}, {1.0 / 6.0, 1.0 / 3.0, 0.0}, {1.0 / 6.0, 5.0 / 6.0, 0.0}};
        return make("lobatto3", a, a_bar, {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}, {0.0, 0.5, 1.0}, 4);
    }
    case 4: {
        const double r5 = std::sqrt(5.0);
        matrix a{{0.0, 0.0, 0.0, 0.0},
                 {(11.0 + r5) / 120.0, (25.0 - r5) / 120.0, (25.0 - 13.0 * r5) / 120.0, (-1.0 + r5) / 120.0},
                 {(11.0 - r5) / 120.0, (25.0 + 13.0 * r5) / 120.0, (25.0 + r5) / 120.0, (-1.0 - r5) / 120.0},
                 {1.0 / 12.0, 5.0 / 12.0, 5.0 / 12.0, 1.0 / 12.0}};
        matrix a_bar{{1.0 / 12.0, (-1.0 - r5) / 24.0, (-1.0 + r5) / 24.0, 0.0},
                     {1.0 / 12.0, (25.0 + r5) / 120.0, (25.0 - 13.0 * r5) / 120.0, 0.0},
                     {1.0 / 12.0, (25.0 + 13.0 * r5) / 120.0, (25.0 - r5) / 120.0, 0.0},
                     {1.0 / 12.0, (11.0 - r5) / 24.0, (11.0 + r5) / 24.0, 0.0}};
        return make("lobatto4", a, a_bar, {1.0 / 12.0, 5.0 / 12.0, 5.0 / 12.0, 1.0 / 12.0},
                    {0.0, (5.0 - r5) / 10.0, (5.0 + r5) / 10.0, 1.0}, 6);
    }
    default:
        throw unsupported_stage_count("lobatto_iiia_iiib: stage count " + std::to_string(s) + " not in 2..4");
    }
}

matrix conjugate_tableau(const matrix& a, std::span<const double> b)
{
    const std::size_t s = b.size();
    if (a.rows() != s || a.cols() != s) {
        throw invalid_argument("conjugate_tableau: shape mismatch");
    }
    for (std::size_t i = 0; i < s; ++i) {
        if (b[i] == 0.0) {
            throw zero_weight("conjugate_tableau: weight b_" + std::to_string(i + 1) + " is zero");
        }
    }
    matrix a_bar(s, s);
    for (std::size_t i = 0; i < s; ++i) {
        for (std::size_t j = 0; j < s; ++j) {
            a_bar(i, j) = b[j] - (b[j] / b[i]) * a(j, i);
        }
    }
    return a_bar;
}

double check_symplecticity(const partitioned_tableau& t)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < t.s; ++i) {
        for (std::size_t j = 0; j < t.s; ++j) {
            const double r = t.b[i] * t.a_bar(i, j) + t.b[j] * t.a(j, i) - t.b[i] * t.b[j];
            worst = std::max(worst, std::abs(r));
        }
    }
    return worst;
}

std::vector<order_condition_residual> check_order_conditions(const partitioned_tableau& t, int up_to)
{
    std::vector<order_condition_residual> out;
    for (int k = 1; k <= up_to; ++k) {
        double sum = 0.0;
        for (std::size_t i = 0; i < t.s; ++i) {
            sum += t.b[i] * std::pow(t.c[i], k - 1);
        }
        out.push_back({"B" + std::to_string(k), std::abs(sum - 1.0 / k)});
    }
    for (int k = 1; k <= up_to; ++k) {
        double worst = 0.0;
        for (std::size_t i = 0; i < t.s; ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < t.s; ++j) {
                sum += t.a(i, j) * std::pow(t.c[j], k - 1);
            }
            worst = std::max(worst, std::abs(sum - std::pow(t.c[i], k) / k));
        }
        out.push_back({"C" + std::to_string(k), worst});
    }
    return out;
}

const std::vector<std::string>& tableau_ids()
{
    static const std::vector<std::string> ids{"gauss1",     "gauss2",   "gauss3",   "radau_iia2",
                                              "radau_iia3", "lobatto2", "lobatto3", "lobatto4"};
    return ids;
}

partitioned_tableau tableau_by_id(std::string_view id)
{
    auto stages = [&](std::string_view prefix) -> int {
        const auto digits = id.substr(prefix.size());
        int s = 0;
        const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), s);
        if (ec != std::errc{} || end != digits.data() + digits.size()) {
            throw unknown_identifier("unknown method '" + std::string(id) + "'");
        }
        return s;
    };
    if (id.starts_with("gauss") && id.size() == 6) {
        return gauss(stages("gauss"));
    }
    if (id.starts_with("radau_iia") && id.size() == 10) {
        return radau_iia(stages("radau_iia"));
    }
    if (id.starts_with("lobatto") && id.size() == 8) {
        return lobatto_iiia_iiib(stages("lobatto"));
    }
    throw unknown_identifier("unknown method '" + std::string(id) + "'");
}

} // namespace vlint

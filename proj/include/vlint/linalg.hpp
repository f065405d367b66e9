#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace vlint {

using vector = std::vector<double>;

/// Dense row-major matrix of doubles.
class matrix {
public:
    matrix() = default;
    matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
    matrix(std::initializer_list<std::initializer_list<double>> rows);

    static matrix identity(std::size_t n);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept
    {
        return {data_.data() + i * cols_, cols_};
    }

    [[nodiscard]] std::span<const double> entries() const noexcept { return data_; }
    [[nodiscard]] std::span<double> entries() noexcept { return data_; }

    [[nodiscard]] matrix transpose() const;

    /// Writes `block` into this matrix with its top-left corner at (r0, c0).
    void set_block(std::size_t r0, std::size_t c0, const matrix& block);
    /// Adds `scale * block` into this matrix at (r0, c0).
    void add_block(std::size_t r0, std::size_t c0, const matrix& block, double scale = 1.0);

    matrix& operator+=(const matrix& other);
    matrix& operator-=(const matrix& other);
    matrix& operator*=(double s);

    friend bool operator==(const matrix&, const matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

matrix operator+(matrix a, const matrix& b);
matrix operator-(matrix a, const matrix& b);
matrix operator*(double s, matrix a);
matrix operator*(const matrix& a, const matrix& b);
vector operator*(const matrix& a, std::span<const double> x);

/// Kronecker product a ⊗ b.
matrix kron(const matrix& a, const matrix& b);

double norm_inf(std::span<const double> x) noexcept;
/// Largest absolute entry.
double max_abs(const matrix& a) noexcept;
/// Maximum absolute column sum.
double norm_1(const matrix& a) noexcept;
/// Maximum absolute row sum.
double norm_inf(const matrix& a) noexcept;

/// LU factorization with partial pivoting, PA = LU.
///
/// Elimination fails with singular_matrix when a pivot drops below
/// `pivot_rel_tol * max|a|`.
class lu_decomposition {
public:
    static constexpr double default_pivot_rel_tol = 1e-13;

    explicit lu_decomposition(matrix a, double pivot_rel_tol = default_pivot_rel_tol);

    [[nodiscard]] std::size_t size() const noexcept { return lu_.rows(); }
    [[nodiscard]] vector solve(std::span<const double> b) const;
    [[nodiscard]] matrix inverse() const;

private:
    matrix lu_;
    std::vector<std::size_t> perm_;
};

vector lu_solve(const matrix& a, std::span<const double> b);

/// ‖a‖₁·‖a⁻¹‖₁, or +∞ when `a` is singular.
double condition_estimate(const matrix& a);

using vector_function = std::function<vector(std::span<const double>)>;

/// Central-difference Jacobian of f at x. The default step is 1e-6·(1 + ‖x‖∞).
matrix fd_jacobian(const vector_function& f, std::span<const double> x, std::optional<double> eps = {});

} // namespace vlint

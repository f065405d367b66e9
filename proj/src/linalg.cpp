#include <vlint/linalg.hpp>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include <vlint/errors.hpp>

namespace vlint {

matrix::matrix(std::size_t rows, std::size_t cols, double fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

matrix::matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries))
{
    if (data_.size() != rows_ * cols_) {
        throw invalid_argument("matrix: entry count does not match the shape");
    }
}

matrix::matrix(std::initializer_list<std::initializer_list<double>> rows)
{
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw invalid_argument("matrix: ragged initializer");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

matrix matrix::identity(std::size_t n)
{
    matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

matrix matrix::transpose() const
{
    matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

void matrix::set_block(std::size_t r0, std::size_t c0, const matrix& block)
{
    assert(r0 + block.rows() <= rows_ && c0 + block.cols() <= cols_);
    for (std::size_t i = 0; i < block.rows(); ++i) {
        for (std::size_t j = 0; j < block.cols(); ++j) {
            (*this)(r0 + i, c0 + j) = block(i, j);
        }
    }
}

void matrix::add_block(std::size_t r0, std::size_t c0, const matrix& block, double scale)
{
    assert(r0 + block.rows() <= rows_ && c0 + block.cols() <= cols_);
    for (std::size_t i = 0; i < block.rows(); ++i) {
        for (std::size_t j = 0; j < block.cols(); ++j) {
            (*this)(r0 + i, c0 + j) += scale * block(i, j);
        }
    }
}

matrix& matrix::operator+=(const matrix& other)
{
    assert(rows_ == other.rows_ && cols_ == other.cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] += other.data_[k];
    }
    return *this;
}

matrix& matrix::operator-=(const matrix& other)
{
    assert(rows_ == other.rows_ && cols_ == other.cols_);
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] -= other.data_[k];
    }
    return *this;
}

matrix& matrix::operator*=(double s)
{
    for (auto& v : data_) {
        v *= s;
    }
    return *this;
}

matrix operator+(matrix a, const matrix& b) { return a += b; }
matrix operator-(matrix a, const matrix& b) { return a -= b; }
matrix operator*(double s, matrix a) { return a *= s; }

matrix operator*(const matrix& a, const matrix& b)
{
    if (a.cols() != b.rows()) {
        throw invalid_argument("matrix product: inner dimensions differ");
    }
    matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

vector operator*(const matrix& a, std::span<const double> x)
{
    if (a.cols() != x.size()) {
        throw invalid_argument("matrix-vector product: dimension mismatch");
    }
    vector y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            acc += a(i, j) * x[j];
        }
        y[i] = acc;
    }
    return y;
}

matrix kron(const matrix& a, const matrix& b)
{
    matrix k(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            k.add_block(i * b.rows(), j * b.cols(), b, a(i, j));
        }
    }
    return k;
}

double norm_inf(std::span<const double> x) noexcept
{
    double m = 0.0;
    for (double v : x) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double max_abs(const matrix& a) noexcept { return norm_inf(a.entries()); }

double norm_1(const matrix& a) noexcept
{
    double m = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            s += std::abs(a(i, j));
        }
        m = std::max(m, s);
    }
    return m;
}

double norm_inf(const matrix& a) noexcept
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (double v : a.row(i)) {
            s += std::abs(v);
        }
        m = std::max(m, s);
    }
    return m;
}

lu_decomposition::lu_decomposition(matrix a, double pivot_rel_tol) : lu_(std::move(a))
{
    if (!lu_.square()) {
        throw invalid_argument("lu_decomposition: matrix is not square");
    }
    const std::size_t n = lu_.rows();
    perm_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        perm_[i] = i;
    }
    const double threshold = pivot_rel_tol * max_abs(lu_);

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(lu_(i, k)) > best) {
                best = std::abs(lu_(i, k));
                p = i;
            }
        }
        if (!(best > threshold) || best == 0.0) {
            std::ostringstream msg;
            msg << "singular matrix: pivot " << best << " at column " << k << " below threshold " << threshold;
            throw singular_matrix(msg.str());
        }
        if (p != k) {
            std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(p).begin());
            std::swap(perm_[k], perm_[p]);
        }
        const double pivot = lu_(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = lu_(i, k) / pivot;
            lu_(i, k) = f;
            if (f == 0.0) {
                continue;
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                lu_(i, j) -= f * lu_(k, j);
            }
        }
    }
}

vector lu_decomposition::solve(std::span<const double> b) const
{
    const std::size_t n = size();
    if (b.size() != n) {
        throw invalid_argument("lu_decomposition::solve: dimension mismatch");
    }
    vector x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = b[perm_[i]];
        for (std::size_t j = 0; j < i; ++j) {
            acc -= lu_(i, j) * x[j];
        }
        x[i] = acc;
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double acc = x[ii];
        for (std::size_t j = ii + 1; j < n; ++j) {
            acc -= lu_(ii, j) * x[j];
        }
        x[ii] = acc / lu_(ii, ii);
    }
    return x;
}

matrix lu_decomposition::inverse() const
{
    const std::size_t n = size();
    matrix inv(n, n);
    vector e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        const auto col = solve(e);
        for (std::size_t i = 0; i < n; ++i) {
            inv(i, j) = col[i];
        }
        e[j] = 0.0;
    }
    return inv;
}

vector lu_solve(const matrix& a, std::span<const double> b) { return lu_decomposition(a).solve(b); }

double condition_estimate(const matrix& a)
{
    try {
        const lu_decomposition lu(a);
        return norm_1(a) * norm_1(lu.inverse());
    } catch (const singular_matrix&) {
        return std::numeric_limits<double>::infinity();
    }
}

matrix fd_jacobian(const vector_function& f, std::span<const double> x, std::optional<double> eps)
{
    const double step = eps.value_or(1e-6 * (1.0 + norm_inf(x)));
    if (!(step > 0.0)) {
        throw invalid_argument("fd_jacobian: step must be positive");
    }
    vector xp(x.begin(), x.end());
    matrix jac;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double hi = x[j] + step;
        const double lo = x[j] - step;
        xp[j] = hi;
        const auto fp = f(xp);
        xp[j] = lo;
        const auto fm = f(xp);
        xp[j] = x[j];
        // Divide by the spacing actually sampled, not the nominal 2*step.
        const double width = hi - lo;
        if (j == 0) {
            jac = matrix(fp.size(), x.size());
        }
        for (std::size_t i = 0; i < fp.size(); ++i) {
            jac(i, j) = (fp[i] - fm[i]) / width;
        }
    }
    return jac;
}

} // namespace vlint

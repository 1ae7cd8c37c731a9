#include "lldpd/linalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lldpd {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> row_major)
    : rows_(rows), cols_(cols), data_(row_major) {
    if (data_.size() != rows * cols) {
        throw std::invalid_argument("Matrix: initializer size does not match shape");
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::column(const std::vector<double>& v) {
    Matrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) {
        m(i, 0) = v[i];
    }
    return m;
}

Matrix Matrix::symmetric2(double a11, double a12, double a22) {
    return Matrix(2, 2, {a11, a12, a12, a22});
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            t(c, r) = (*this)(r, c);
        }
    }
    return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) {
        throw std::invalid_argument("Matrix product: shape mismatch");
    }
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        for (std::size_t j = 0; j < b.cols_; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols_; ++k) {
                s += a(i, k) * b(k, j);
            }
            out(i, j) = s;
        }
    }
    return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
        throw std::invalid_argument("Matrix sum: shape mismatch");
    }
    Matrix out = a;
    for (std::size_t i = 0; i < out.data_.size(); ++i) {
        out.data_[i] += b.data_[i];
    }
    return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    return a + (-1.0) * b;
}

Matrix operator*(double s, const Matrix& a) {
    Matrix out = a;
    for (double& v : out.data_) {
        v *= s;
    }
    return out;
}

double condition_number(const Matrix& a) {
    if (a.rows() != a.cols() || a.rows() == 0 || a.rows() > 2) {
        throw std::invalid_argument("condition_number: expects a 1x1 or 2x2 matrix");
    }
    if (a.rows() == 1) {
        return a(0, 0) == 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
    }
    // Singular values from the eigenvalues of AᵀA.
    const double frob2 = a(0, 0) * a(0, 0) + a(0, 1) * a(0, 1) + a(1, 0) * a(1, 0) + a(1, 1) * a(1, 1);
    const double det = std::abs(a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0));
    if (det == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double disc = std::sqrt(std::max(frob2 * frob2 - 4.0 * det * det, 0.0));
    const double s_max2 = 0.5 * (frob2 + disc);
    // s_min² = det² / s_max² avoids cancellation in (frob2 - disc).
    const double s_min2 = det * det / s_max2;
    return std::sqrt(s_max2 / s_min2);
}

Matrix inverse(const Matrix& a) {
    const double cond = condition_number(a);
    if (!(cond <= kMaxConditionNumber)) {
        throw std::domain_error("inverse: matrix is singular or ill-conditioned (cond = " +
                                std::to_string(cond) + ")");
    }
    if (a.rows() == 1) {
        return Matrix(1, 1, {1.0 / a(0, 0)});
    }
    const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    return Matrix(2, 2, {a(1, 1) / det, -a(0, 1) / det, -a(1, 0) / det, a(0, 0) / det});
}

Vec2 symmetric_eigenvalues(const Matrix& a) {
    if (a.rows() != 2 || a.cols() != 2) {
        throw std::invalid_argument("symmetric_eigenvalues: expects a 2x2 matrix");
    }
    const double mean = 0.5 * (a(0, 0) + a(1, 1));
    const double half_diff = 0.5 * (a(0, 0) - a(1, 1));
    const double radius = std::hypot(half_diff, a(0, 1));
    return {mean - radius, mean + radius};
}

double quadratic_form(const Matrix& x, const Matrix& a) {
    if (x.cols() != 1 || a.rows() != x.rows() || a.cols() != x.rows()) {
        throw std::invalid_argument("quadratic_form: shape mismatch");
    }
    return (x.transpose() * a * x)(0, 0);
}

}  // namespace lldpd

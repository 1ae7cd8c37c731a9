#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace lldpd {

using Vec2 = std::array<double, 2>;

/// Small dense row-major matrix. Every matrix in this library is at most
/// 2×2, so storage is a plain vector and products are naive loops.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> row_major);

    static Matrix identity(std::size_t n);
    static Matrix column(const std::vector<double>& v);
    static Matrix symmetric2(double a11, double a12, double a22);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    [[nodiscard]] Matrix transpose() const;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator+(const Matrix& a, const Matrix& b);
    friend Matrix operator-(const Matrix& a, const Matrix& b);
    friend Matrix operator*(double s, const Matrix& a);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Largest accepted 2-norm condition number for inversion.
inline constexpr double kMaxConditionNumber = 1e12;

/// 2-norm condition number of a 1×1 or 2×2 matrix (infinity when singular).
double condition_number(const Matrix& a);

/// Inverse of a 1×1 or 2×2 matrix via the cofactor formula. Throws
/// std::domain_error when the condition number exceeds kMaxConditionNumber.
Matrix inverse(const Matrix& a);

/// Eigenvalues of a symmetric 2×2 matrix, ascending.
Vec2 symmetric_eigenvalues(const Matrix& a);

/// xᵀ A x for a column vector x stored as an n×1 matrix; returns a scalar.
double quadratic_form(const Matrix& x, const Matrix& a);

}  // namespace lldpd

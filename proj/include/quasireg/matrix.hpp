#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "quasireg/error.hpp"

namespace quasireg {

using Vector = std::vector<double>;

/// Dense row-major matrix of finite doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix column(std::span<const double> values);
    static Matrix diagonal(std::span<const double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    Vector col(std::size_t j) const;
    void set_col(std::size_t j, std::span<const double> values);

    std::span<const double> entries() const noexcept { return data_; }

    Matrix transposed() const;
    bool all_finite() const noexcept;
    /// Max absolute row sum.
    double norm_inf() const noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
Vector operator*(const Matrix& a, std::span<const double> x);

/// Aᵀ·A without forming the transpose.
Matrix gram(const Matrix& a);
/// Aᵀ·x.
Vector transpose_times(const Matrix& a, std::span<const double> x);
/// Outer product u·vᵀ.
Matrix outer(std::span<const double> u, std::span<const double> v);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);
Vector axpy(double alpha, std::span<const double> x, std::span<const double> y);  // alpha*x + y
Vector subtract(std::span<const double> a, std::span<const double> b);

/// Largest |A(i,j) - A(j,i)| relative to ‖A‖∞.
double asymmetry(const Matrix& a);

}  // namespace quasireg

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qcog/errors.hpp"

namespace qcog::numerics {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Hermitian inner product, conjugate-linear in `a` and linear in `b`:
/// sum_k conj(a_k) * b_k. Throws DomainError on length mismatch.
Complex inner_product(std::span<const Complex> a, std::span<const Complex> b);

/// Euclidean length sqrt(<a|a>).
double norm(std::span<const Complex> a);

/// Throws DomainError if any entry is NaN or infinite.
void require_finite(std::span<const Complex> a);

/// Dense real matrix, row-major.
class DenseMatrix {
public:
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    double& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

/// Solves M x = rhs for square M by Gaussian elimination with scaled partial
/// pivoting, followed by iterative refinement until the relative residual
/// ||M x - rhs|| / ||rhs|| is at most 1e-8. Throws SingularMatrixError when a
/// scaled pivot falls below 1e-13 or the residual bound cannot be met.
std::vector<double> solve_dense_linear(const DenseMatrix& m, std::span<const double> rhs);

/// Residual bound guaranteed by solve_dense_linear.
inline constexpr double kSolveResidualBound = 1e-8;

/// Scaled-pivot threshold below which a system is reported singular.
inline constexpr double kSingularPivotThreshold = 1e-13;

}  // namespace qcog::numerics

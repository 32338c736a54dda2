#include "qcog/numerics.hpp"

#include <cmath>

namespace qcog::numerics {

Complex inner_product(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw DomainError("inner_product: length mismatch (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + ")");
    }
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < a.size(); ++k) {
        acc += std::conj(a[k]) * b[k];
    }
    return acc;
}

double norm(std::span<const Complex> a) {
    double acc = 0.0;
    for (const Complex& z : a) {
        acc += std::norm(z);
    }
    return std::sqrt(acc);
}

void require_finite(std::span<const Complex> a) {
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (!std::isfinite(a[k].real()) || !std::isfinite(a[k].imag())) {
            throw DomainError("non-finite entry at position " + std::to_string(k));
        }
    }
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (rows == 0 || cols == 0) {
        throw DomainError("DenseMatrix: dimensions must be at least 1x1");
    }
}

namespace {

// LU factorization with scaled partial pivoting. perm[i] is the original row
// stored in factored row i.
struct LuFactors {
    DenseMatrix lu;
    std::vector<std::size_t> perm;
};

LuFactors factorize(const DenseMatrix& m) {
    const std::size_t n = m.rows();
    LuFactors f{m, {}};
    f.perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;

    std::vector<double> scale(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            scale[i] = std::max(scale[i], std::abs(m.at(i, j)));
        }
        if (scale[i] == 0.0) {
            throw SingularMatrixError("singular matrix: zero row " + std::to_string(i));
        }
    }

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot_row = k;
        double best = 0.0;
        for (std::size_t i = k; i < n; ++i) {
            const double cand = std::abs(f.lu.at(i, k)) / scale[f.perm[i]];
            if (cand > best) {
                best = cand;
                pivot_row = i;
            }
        }
        if (best < kSingularPivotThreshold) {
            throw SingularMatrixError("singular matrix: scaled pivot " + std::to_string(best) +
                                      " at column " + std::to_string(k));
        }
        if (pivot_row != k) {
            std::swap(f.perm[pivot_row], f.perm[k]);
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(f.lu.at(pivot_row, j), f.lu.at(k, j));
            }
        }
        const double pivot = f.lu.at(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double factor = f.lu.at(i, k) / pivot;
            f.lu.at(i, k) = factor;
            for (std::size_t j = k + 1; j < n; ++j) {
                f.lu.at(i, j) -= factor * f.lu.at(k, j);
            }
        }
    }
    return f;
}

std::vector<double> lu_solve(const LuFactors& f, std::span<const double> rhs) {
    const std::size_t n = f.lu.rows();
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rhs[f.perm[i]];
    for (std::size_t i = 1; i < n; ++i) {
        double acc = x[i];
        for (std::size_t j = 0; j < i; ++j) acc -= f.lu.at(i, j) * x[j];
        x[i] = acc;
    }
    for (std::size_t i = n; i-- > 0;) {
        double acc = x[i];
        for (std::size_t j = i + 1; j < n; ++j) acc -= f.lu.at(i, j) * x[j];
        x[i] = acc / f.lu.at(i, i);
    }
    return x;
}

std::vector<double> residual_of(const DenseMatrix& m, std::span<const double> x,
                                std::span<const double> rhs) {
    const std::size_t n = m.rows();
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = rhs[i];
        for (std::size_t j = 0; j < n; ++j) acc -= m.at(i, j) * x[j];
        r[i] = acc;
    }
    return r;
}

double norm2(std::span<const double> v) {
    double acc = 0.0;
    for (double e : v) acc += e * e;
    return std::sqrt(acc);
}

}  // namespace

std::vector<double> solve_dense_linear(const DenseMatrix& m, std::span<const double> rhs) {
    if (m.rows() != m.cols()) {
        throw DomainError("solve_dense_linear: matrix is not square");
    }
    if (rhs.size() != m.rows()) {
        throw DomainError("solve_dense_linear: rhs length does not match matrix");
    }
    const LuFactors f = factorize(m);
    std::vector<double> x = lu_solve(f, rhs);

    const double rhs_norm = norm2(rhs);
    // Fixed-precision iterative refinement; the monomial interpolation systems
    // routed through here are ill-conditioned enough to need it.
    for (int pass = 0; pass < 4; ++pass) {
        const std::vector<double> r = residual_of(m, x, rhs);
        if (norm2(r) <= kSolveResidualBound * rhs_norm) {
            return x;
        }
        const std::vector<double> dx = lu_solve(f, r);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += dx[i];
    }
    if (norm2(residual_of(m, x, rhs)) > kSolveResidualBound * rhs_norm) {
        throw SingularMatrixError("solve_dense_linear: residual bound 1e-8 not met");
    }
    return x;
}

}  // namespace qcog::numerics

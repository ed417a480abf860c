#ifndef WHTRIM_LINALG_HPP
#define WHTRIM_LINALG_HPP

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "whtrim/errors.hpp"

namespace whtrim {

// Dense row-major matrix of doubles. Kept deliberately small: only the
// operations the rest of the library needs.
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static Matrix identity(std::size_t n);

    bool operator==(const Matrix& o) const = default;
};

Matrix multiply(const Matrix& x, const Matrix& y);
Matrix transpose(const Matrix& x);
Matrix scale(const Matrix& x, double s);

// Square 0/1 matrix stored as a sorted coordinate list (row-major order).
struct SparseMatrix {
    std::size_t dim = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> entries;

    std::size_t nnz() const { return entries.size(); }
    Matrix densify() const;
    // y = S x
    std::vector<double> apply(const std::vector<double>& x) const;
    // y = S^T x
    std::vector<double> apply_transpose(const std::vector<double>& x) const;

    bool operator==(const SparseMatrix& o) const = default;
};

// All eigenvalues of a real square matrix (dim <= 2000): Householder
// reduction to Hessenberg form followed by the implicitly shifted
// double-step QR iteration. Throws NoConvergence after 30*dim sweeps.
std::vector<std::complex<double>> eigenvalues(const Matrix& m);

// Largest |eigenvalue|; 0 for an empty matrix.
double spectral_radius(const Matrix& m);

// Largest |eigenvalue| of a 0/1 sparse matrix by power iteration
// (relative tolerance 1e-10), with a dense eigensolver fallback for
// dim <= 2000 when the iteration stalls.
double spectral_radius(const SparseMatrix& s);

// Operator 2-norm (largest singular value) by power iteration on A^T A.
// Relative tolerance 1e-10, iteration cap 1e4, NoConvergence on stall.
double operator_norm2(const Matrix& m);
double operator_norm2(const SparseMatrix& s);

// Kronecker products. The result dimension (rows and cols) is capped at
// 20000; beyond that SizeBudgetExceeded is thrown before allocating.
Matrix kronecker(const Matrix& x, const Matrix& y);
Matrix kronecker(const SparseMatrix& x, const Matrix& y);

// Dominant eigenvalue of a primitive non-negative matrix together with the
// right eigenvectors of S^T (x) and of S (y), both 1-normalized and
// strictly positive. Power iteration, relative tolerance 1e-10, cap 1e6.
struct PerronPair {
    double lambda = 0.0;
    std::vector<double> x;  // Perron vector of S^T
    std::vector<double> y;  // Perron vector of S
};
PerronPair perron_pair(const SparseMatrix& s);

}  // namespace whtrim

#endif

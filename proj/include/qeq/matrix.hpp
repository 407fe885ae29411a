#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace qeq {

using cplx = std::complex<double>;

struct dim_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense row-major complex matrix. Zero-dimensional shapes (0xN, Nx0) are
/// legal and behave as empty sums/products.
class ComplexMatrix {
 public:
  ComplexMatrix() : rows_(0), cols_(0) {}
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols, cplx(0.0, 0.0)) {}

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zero(std::size_t rows, std::size_t cols) {
    return ComplexMatrix(rows, cols);
  }
  /// Matrix unit E_ij of size n: 1 at (i,j), 0 elsewhere.
  static ComplexMatrix unit(std::size_t n, std::size_t i, std::size_t j);
  /// Permutation matrix P with P[perm[j], j] = 1.
  static ComplexMatrix permutation(const std::vector<std::size_t>& perm);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  cplx& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const cplx& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  const std::vector<cplx>& entries() const { return entries_; }

  ComplexMatrix operator*(const ComplexMatrix& rhs) const;
  ComplexMatrix operator+(const ComplexMatrix& rhs) const;
  ComplexMatrix operator-(const ComplexMatrix& rhs) const;
  ComplexMatrix scaled(cplx factor) const;
  ComplexMatrix adjoint() const;
  cplx trace() const;

  bool operator==(const ComplexMatrix& rhs) const {
    return rows_ == rhs.rows_ && cols_ == rhs.cols_ && entries_ == rhs.entries_;
  }

  /// Largest |entry| of this - rhs; shapes must agree.
  double max_abs_diff(const ComplexMatrix& rhs) const;
  double max_abs() const;

  std::string show(int precision = 6) const;

 private:
  std::size_t rows_, cols_;
  std::vector<cplx> entries_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b);

/// True iff U†U and UU† are within tol of the identity (max-entry norm).
/// Throws dim_error on non-square input.
bool is_unitary(const ComplexMatrix& u, double tol = 1e-9);

bool is_hermitian(const ComplexMatrix& m, double tol = 1e-9);

/// Eigenvalues of a Hermitian matrix via cyclic Jacobi rotations,
/// ascending order. Intended for the small dimensions used here.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

/// Minimum eigenvalue estimate of a Hermitian matrix. Uses a shifted power
/// iteration and falls back to the Jacobi solver when the estimate lands
/// too close to the decision threshold to trust.
double min_eigenvalue(const ComplexMatrix& m, double threshold = 1e-7);

/// Positive semidefinite within tol: Hermitian and min eigenvalue >= -tol.
bool is_psd(const ComplexMatrix& m, double tol = 1e-7);

/// Density matrix check: Hermitian, PSD, trace <= 1 + tol.
bool is_density(const ComplexMatrix& m, double tol = 1e-7);

}  // namespace qeq

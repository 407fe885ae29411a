#include "qeq/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qeq {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::unit(std::size_t n, std::size_t i, std::size_t j) {
  ComplexMatrix m(n, n);
  m.at(i, j) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::permutation(const std::vector<std::size_t>& perm) {
  ComplexMatrix m(perm.size(), perm.size());
  for (std::size_t j = 0; j < perm.size(); ++j) m.at(perm[j], j) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw dim_error("matrix product shape mismatch");
  ComplexMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      cplx a = at(i, k);
      if (a == cplx(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) {
        out.at(i, j) += a * rhs.at(k, j);
      }
    }
  }
  return out;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw dim_error("matrix sum shape mismatch");
  ComplexMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = entries_[i] + rhs.entries_[i];
  return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw dim_error("matrix diff shape mismatch");
  ComplexMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = entries_[i] - rhs.entries_[i];
  return out;
}

ComplexMatrix ComplexMatrix::scaled(cplx factor) const {
  ComplexMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = entries_[i] * factor;
  return out;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out.at(j, i) = std::conj(at(i, j));
  return out;
}

cplx ComplexMatrix::trace() const {
  if (!is_square()) throw dim_error("trace of non-square matrix");
  cplx t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += at(i, i);
  return t;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw dim_error("max_abs_diff shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    m = std::max(m, std::abs(entries_[i] - rhs.entries_[i]));
  return m;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& e : entries_) m = std::max(m, std::abs(e));
  return m;
}

std::string ComplexMatrix::show(int precision) const {
  std::ostringstream os;
  os.precision(precision);
  os << rows_ << "x" << cols_ << " [";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i == 0 ? "[" : " [");
    for (std::size_t j = 0; j < cols_; ++j) {
      const cplx& e = at(i, j);
      os << e.real();
      if (e.imag() != 0.0) os << (e.imag() > 0 ? "+" : "") << e.imag() << "i";
      if (j + 1 < cols_) os << ", ";
    }
    os << "]";
    if (i + 1 < rows_) os << "\n";
  }
  os << "]";
  return os.str();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      cplx f = a.at(i, j);
      if (f == cplx(0.0, 0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out.at(i * b.rows() + k, j * b.cols() + l) = f * b.at(k, l);
    }
  return out;
}

ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) out.at(a.rows() + i, a.cols() + j) = b.at(i, j);
  return out;
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (!u.is_square()) throw dim_error("is_unitary on non-square matrix");
  ComplexMatrix id = ComplexMatrix::identity(u.rows());
  ComplexMatrix ad = u.adjoint();
  return (ad * u).max_abs_diff(id) <= tol && (u * ad).max_abs_diff(id) <= tol;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (!m.is_square()) return false;
  return m.max_abs_diff(m.adjoint()) <= tol;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  if (!m.is_square()) throw dim_error("eigenvalues of non-square matrix");
  std::size_t n = m.rows();
  ComplexMatrix a = m;
  // Cyclic Jacobi with complex Givens rotations. Off-diagonal mass shrinks
  // quadratically; a handful of sweeps suffices at these sizes.
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a.at(p, q));
    if (off < 1e-26) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        cplx apq = a.at(p, q);
        if (std::abs(apq) < 1e-300) continue;
        double app = a.at(p, p).real();
        double aqq = a.at(q, q).real();
        // Phase out the pivot, then apply the real Jacobi rotation.
        cplx phase = apq / std::abs(apq);
        double tau = (aqq - app) / (2.0 * std::abs(apq));
        double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        cplx sp = s * phase;
        for (std::size_t k = 0; k < n; ++k) {
          cplx akp = a.at(k, p), akq = a.at(k, q);
          a.at(k, p) = c * akp - std::conj(sp) * akq;
          a.at(k, q) = sp * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          cplx apk = a.at(p, k), aqk = a.at(q, k);
          a.at(p, k) = c * apk - sp * aqk;
          a.at(q, k) = std::conj(sp) * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eigs(n);
  for (std::size_t i = 0; i < n; ++i) eigs[i] = a.at(i, i).real();
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

namespace {

// Largest eigenvalue of a Hermitian PSD-shifted matrix by power iteration.
double power_max_eig(const ComplexMatrix& m, int iters) {
  std::size_t n = m.rows();
  if (n == 0) return 0.0;
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = cplx(1.0 + 0.3 * double(i % 7), 0.17 * double(i % 5));
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    std::vector<cplx> w(n, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) w[i] += m.at(i, j) * v[j];
    double norm = 0.0;
    for (const auto& x : w) norm += std::norm(x);
    norm = std::sqrt(norm);
    if (norm < 1e-300) return 0.0;
    for (auto& x : w) x /= norm;
    // Rayleigh quotient.
    cplx rq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cplx acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += m.at(i, j) * w[j];
      rq += std::conj(w[i]) * acc;
    }
    double next = rq.real();
    if (it > 10 && std::abs(next - lambda) < 1e-13 * std::max(1.0, std::abs(next))) {
      lambda = next;
      break;
    }
    lambda = next;
    v = std::move(w);
  }
  return lambda;
}

}  // namespace

double min_eigenvalue(const ComplexMatrix& m, double threshold) {
  std::size_t n = m.rows();
  if (n == 0) return 0.0;
  // Gershgorin upper bound as the shift.
  double shift = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += std::abs(m.at(i, j));
    shift = std::max(shift, row);
  }
  shift += 1.0;
  ComplexMatrix shifted(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      shifted.at(i, j) = (i == j ? cplx(shift, 0.0) : cplx(0.0, 0.0)) - m.at(i, j);
  double est = shift - power_max_eig(shifted, 300);
  // Near the decision threshold the power estimate is not trustworthy;
  // fall back to the exact solver.
  if (std::abs(est) < 100.0 * threshold) {
    auto eigs = hermitian_eigenvalues(m);
    return eigs.empty() ? 0.0 : eigs.front();
  }
  return est;
}

bool is_psd(const ComplexMatrix& m, double tol) {
  if (!is_hermitian(m, 1e-7)) return false;
  return min_eigenvalue(m, tol) >= -tol;
}

bool is_density(const ComplexMatrix& m, double tol) {
  if (!m.is_square()) return false;
  if (!is_psd(m, tol)) return false;
  return m.rows() == 0 || m.trace().real() <= 1.0 + tol;
}

}  // namespace qeq

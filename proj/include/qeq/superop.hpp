#pragma once

#include <vector>

#include "qeq/matrix.hpp"
#include "qeq/qtype.hpp"

namespace qeq {

/// A superoperator materialized as its transfer table: the image of every
/// matrix unit E_ij of the source space. Equality of superoperators is
/// entrywise comparison of tables; composition, tensoring and sums are
/// computed by linearity over the units.
///
/// Table construction is data parallel across matrix units; the hot paths
/// are OpenMP parallel loops with bit-identical serial counterparts in
/// qeq::serial (kept for testing and benchmarking).
class Superoperator {
 public:
  Superoperator(QType src, QType dst);

  const QType& src() const { return src_; }
  const QType& dst() const { return dst_; }
  std::size_t src_dim() const { return src_.dim(); }
  std::size_t dst_dim() const { return dst_.dim(); }

  /// Image of E_ij.
  ComplexMatrix& image(std::size_t i, std::size_t j) { return table_[i * src_dim() + j]; }
  const ComplexMatrix& image(std::size_t i, std::size_t j) const {
    return table_[i * src_dim() + j];
  }
  ComplexMatrix& image_flat(std::size_t u) { return table_[u]; }
  const ComplexMatrix& image_flat(std::size_t u) const { return table_[u]; }
  std::size_t table_size() const { return table_.size(); }

  /// Applies the map to a matrix by expanding it in the unit basis.
  ComplexMatrix apply(const ComplexMatrix& rho) const;

  /// Retypes the same table; new types must preserve both dimensions.
  Superoperator recast(QType src, QType dst) const;

  /// Choi matrix sum_ij E_ij ⊗ f(E_ij); PSD iff the map is completely positive.
  ComplexMatrix choi() const;
  /// Trace functional M with tr(f(rho)) = tr(rho M†)... concretely
  /// M[j][i] = tr f(E_ij); Hermitian for CP maps. The map is trace
  /// nonincreasing iff M ⪯ I.
  ComplexMatrix trace_functional() const;
  bool is_trace_nonincreasing(double tol = 1e-9) const;
  bool is_completely_positive(double tol = 1e-7) const;

 private:
  QType src_, dst_;
  std::vector<ComplexMatrix> table_;
};

Superoperator superop_identity(QType t);
Superoperator superop_zero(QType src, QType dst);

/// Conjugation rho ↦ K rho K† for an arbitrary Kraus operator K.
Superoperator superop_from_kraus(const ComplexMatrix& k, QType src, QType dst);

/// rho ↦ U rho U†; U must pass is_unitary.
Superoperator superop_from_unitary(const ComplexMatrix& u, QType src, QType dst);

/// g ∘ f; requires dst(f) == src(g).
Superoperator superop_compose(const Superoperator& g, const Superoperator& f);

/// f ⊗ g on the left-major product enumeration.
Superoperator superop_tensor(const Superoperator& f, const Superoperator& g);

/// Pointwise sum; all operands must share src and dst.
Superoperator superop_sum(const std::vector<Superoperator>& fs);

/// Entrywise table comparison within tol; shapes must agree.
bool superop_equal(const Superoperator& f, const Superoperator& g, double tol = 1e-9);

/// Largest entrywise deviation between two tables, with the indices
/// (unit row, unit col, out row, out col) where it is attained.
struct SuperopDiff {
  double value = 0.0;
  std::size_t unit_i = 0, unit_j = 0, out_r = 0, out_c = 0;
};
SuperopDiff superop_max_diff(const Superoperator& f, const Superoperator& g);

namespace serial {

/// Reference implementations: same arithmetic, plain loops, no OpenMP.
Superoperator superop_from_kraus(const ComplexMatrix& k, QType src, QType dst);
Superoperator superop_compose(const Superoperator& g, const Superoperator& f);
Superoperator superop_tensor(const Superoperator& f, const Superoperator& g);

}  // namespace serial

}  // namespace qeq

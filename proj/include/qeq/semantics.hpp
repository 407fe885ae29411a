#pragma once

#include "qeq/opentype.hpp"
#include "qeq/superop.hpp"
#include "qeq/typecheck.hpp"

namespace qeq {

/// Tensor factor layout of a context's density space: wires in order with
/// their types. The canonical order of a Ctx is lexicographic by name.
using WireOrder = std::vector<std::pair<VarName, QType>>;

WireOrder canonical_order(const Ctx& ctx);
QType order_type(const WireOrder& order);  // right-nested tensor; empty = Lower ()
std::size_t order_dim(const WireOrder& order);

/// Evaluates a unitary expression to its matrix. FromEquiv yields the
/// permutation matrix of the witness's basis bijection.
ComplexMatrix denote_unitary(const UnitaryExpr& u);

/// Matrix unit E_aa of dimension |α| (the density of the classical point a).
ComplexMatrix delta(const FinType& alpha, std::size_t a);

/// Permutation matrix realizing (α1+α2)×β ≅ (α1×β)+(α2×β) under the
/// canonical enumerations (the identity under these orderings, computed by
/// point enumeration regardless).
ComplexMatrix distr_matrix(const FinType& a1, const FinType& a2, std::size_t beta_dim);

/// Superoperator reordering tensor factors between two layouts of the same
/// wires; conjugation by the induced basis permutation.
Superoperator context_permutation(const WireOrder& from, const WireOrder& to);

/// Denotation of a well-typed expression as a superoperator from the
/// context's density space (laid out per `order`) to Density(result type).
Superoperator denote(const WireOrder& order, const QExp& e);
/// Same, with the canonical order of Γ; the expression must type under Γ.
Superoperator denote(const Ctx& ctx, const QExp& e);

/// Semantic equality of two terms of the same type under Γ: entrywise
/// comparison of the denotations' transfer tables.
bool equiv_check(const QExp& e1, const QExp& e2, const Ctx& ctx, double tol = 1e-9);

/// equiv_check plus the worst-deviation data for counterexample reports.
struct EquivReport {
  bool equal = false;
  double max_diff = 0.0;
  SuperopDiff diff;
};
EquivReport equiv_report(const QExp& e1, const QExp& e2, const Ctx& ctx, double tol = 1e-9);

/// Hook for numerical-hygiene sweeps: when set, every superoperator built
/// by denote() at the top level is also handed to this callback.
using DenoteObserver = std::function<void(const Superoperator&)>;
void set_denote_observer(DenoteObserver obs);
void clear_denote_observer();

}  // namespace qeq

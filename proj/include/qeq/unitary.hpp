#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qeq/matrix.hpp"
#include "qeq/qtype.hpp"

namespace qeq {

/// Inductive witnesses of open type equivalence. Each generator carries the
/// types needed to reconstruct its two endpoints; Symm flips them, Trans
/// chains them. LowerRelabel identifies two base types of equal cardinality
/// by their canonical enumerations; it is the glue that lets cardinality
/// reasoning (e.g. Bool against Unit+Unit) produce a witness.
class UnitaryEquiv {
 public:
  enum class Kind {
    Refl, Symm, Trans, CongTensor, CongOplus,
    SwapTensor, SwapOplus, AssocTensor, AssocOplus, Distr,
    LowerTensor, LowerOplus, LUnitTensor, LUnitOplus, LZero,
    LowerRelabel,
  };

  static UnitaryEquiv refl(OpenQType t);
  static UnitaryEquiv symm(UnitaryEquiv f);
  static UnitaryEquiv trans(UnitaryEquiv f, UnitaryEquiv g);  // src f == ?, dst f == src g
  static UnitaryEquiv cong_tensor(UnitaryEquiv f, UnitaryEquiv g);
  static UnitaryEquiv cong_oplus(UnitaryEquiv f, UnitaryEquiv g);
  static UnitaryEquiv swap_tensor(OpenQType a, OpenQType b);
  static UnitaryEquiv swap_oplus(OpenQType a, OpenQType b);
  static UnitaryEquiv assoc_tensor(OpenQType a, OpenQType b, OpenQType c);
  static UnitaryEquiv assoc_oplus(OpenQType a, OpenQType b, OpenQType c);
  static UnitaryEquiv distr(OpenQType a, OpenQType b, OpenQType c);
  static UnitaryEquiv lower_tensor(FinType a, FinType b);
  static UnitaryEquiv lower_oplus(FinType a, FinType b);
  static UnitaryEquiv lunit_tensor(OpenQType t);
  static UnitaryEquiv lunit_oplus(OpenQType t);
  static UnitaryEquiv lzero(OpenQType t);
  static UnitaryEquiv lower_relabel(FinType a, FinType b);  // |a| == |b|

  Kind kind() const { return node_->kind; }
  const OpenQType& src() const { return node_->src; }
  const OpenQType& dst() const { return node_->dst; }
  const UnitaryEquiv& child(int i) const;
  const FinType& fin(int i) const;
  /// Operand types as recorded by the generator (Swap/Assoc/Distr/LUnit/LZero).
  const OpenQType& operand(int i) const;

  bool operator==(const UnitaryEquiv& other) const;
  std::string show() const;

  /// Number of generator nodes (Refl/Symm/Trans/Cong excluded).
  std::size_t generator_count() const;

 private:
  struct Node {
    Kind kind;
    OpenQType src = OpenQType::lower(FinType::unit());
    OpenQType dst = OpenQType::lower(FinType::unit());
    std::vector<UnitaryEquiv> children;
    std::vector<FinType> fins;
    std::vector<OpenQType> operands;
  };
  explicit UnitaryEquiv(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Syntactic unitaries: combinators over primitives plus the lift of an
/// open type equivalence at a given assignment. Source and target types
/// are total functions of the syntax.
class UnitaryExpr {
 public:
  enum class Kind { Id, Compose, Adjoint, Tensor, DirectSum, Primitive, FromEquiv };

  static UnitaryExpr id(QType t);
  /// compose(v, u): apply u first, then v. Requires target(u) == source(v).
  static UnitaryExpr compose(UnitaryExpr v, UnitaryExpr u);
  static UnitaryExpr adjoint(UnitaryExpr u);
  static UnitaryExpr tensor(UnitaryExpr u, UnitaryExpr v);
  static UnitaryExpr direct_sum(UnitaryExpr u, UnitaryExpr v);
  /// Primitive gate; m must be unitary within 1e-9.
  static UnitaryExpr primitive(std::string name, ComplexMatrix m, QType src, QType dst);
  static UnitaryExpr from_equiv(UnitaryEquiv f, TypeAssignment m);

  Kind kind() const { return node_->kind; }
  const QType& source() const { return node_->src; }
  const QType& target() const { return node_->dst; }
  const UnitaryExpr& child(int i) const;
  const std::string& prim_name() const;
  const ComplexMatrix& prim_matrix() const;
  const UnitaryEquiv& equiv() const;
  const TypeAssignment& assignment() const;

  bool operator==(const UnitaryExpr& other) const;
  std::string show() const;

 private:
  struct Node {
    Kind kind;
    QType src = QType::unit();
    QType dst = QType::unit();
    std::vector<UnitaryExpr> children;
    std::string name;
    ComplexMatrix matrix;
    std::shared_ptr<const UnitaryEquiv> equiv;
    TypeAssignment assign;
  };
  explicit UnitaryExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Pauli X on a qubit.
UnitaryExpr prim_x();
/// Hadamard on a qubit.
UnitaryExpr prim_h();
/// CNOT on qubit ⊗ qubit, control first.
UnitaryExpr prim_cnot();
/// Phase gate diag(1, i).
UnitaryExpr prim_s();

}  // namespace qeq

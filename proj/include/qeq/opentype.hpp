#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qeq/qexp.hpp"

namespace qeq {

/// Tree-shaped value matching an OpenQType: an element index at Lower
/// leaves, a pair at ⊗, a tagged child at ⊕, and an opaque leaf at type
/// variables. Var leaves hold either a wire name, an element index (when
/// working under an assignment), or an arbitrary expression (when a rewrite
/// rule matches an elaboration against raw syntax). Equivalence witnesses
/// never inspect Var leaf payloads.
class BasisValue {
 public:
  enum class Kind { Elem, Wire, Term, Pair, Tag };

  static BasisValue elem(std::size_t i);
  static BasisValue wire(VarName name);
  static BasisValue term(QExp e);
  static BasisValue pair(BasisValue l, BasisValue r);
  static BasisValue tag(int which, BasisValue inner);

  Kind kind() const { return node_->kind; }
  std::size_t elem_index() const;
  const VarName& wire_name() const;
  const QExp& term_value() const;
  const BasisValue& first() const;
  const BasisValue& second() const;
  int tag_which() const;
  const BasisValue& tagged() const;

  /// Wire names in leaf order (left to right).
  std::vector<VarName> wires() const;
  std::string show() const;
  /// Structural key ignoring Var leaf payloads; two values of the same type
  /// with equal keys pick out the same abstract basis point.
  std::string shape_key() const;

 private:
  struct Node {
    Kind kind;
    std::size_t index = 0;
    VarName name;
    std::optional<QExp> term;
    std::vector<BasisValue> children;
    int which = 0;
  };
  explicit BasisValue(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// [σ]^m of Fig. 8: the basis type of σ under assignment m.
FinType basis(const OpenQType& t, const TypeAssignment& m);

/// All basis values of σ whose Var leaves are fresh wires named
/// prefix0, prefix1, ... in leaf order. One entry per abstract basis point.
std::vector<BasisValue> var_basis(const OpenQType& t, const std::string& prefix = "w");

/// Basis value of σ under m for a concrete index, and back.
BasisValue index_to_value(const OpenQType& t, const TypeAssignment& m, std::size_t i);
std::size_t value_to_index(const OpenQType& t, const TypeAssignment& m, const BasisValue& v);

/// γ of Fig. 8: the typing context contributed by the Var leaves of b.
Ctx gamma(const OpenQType& t, const BasisValue& b, const TypeAssignment& m);

/// Partial initialization: the expression of type instantiate(σ, m) built
/// from b; wires become variables, Lower leaves become put.
QExp partial_init(const OpenQType& t, const BasisValue& b, const TypeAssignment& m);

/// Branch family for a partial match, keyed by the abstract basis point.
using BranchFamily = std::function<QExp(const BasisValue&)>;

/// Partial measurement: eliminates e (of type instantiate(σ, m)) into a
/// case tree over σ's basis. result_type is the common branch type, needed
/// when a Void branch leaves it undetermined.
QExp partial_match(const OpenQType& t, const QExp& e, const BranchFamily& bs,
                   const TypeAssignment& m, const QType& result_type);

/// Transports a basis value along a witness (forward = src to dst).
BasisValue apply_equiv(const UnitaryEquiv& f, const BasisValue& b, bool forward = true);

/// The index bijection basis(src,m) → basis(dst,m) of a witness, as the
/// image table perm[i] = j. Bijectivity is validated by enumeration.
std::vector<std::size_t> equiv_basis_bijection(const UnitaryEquiv& f, const TypeAssignment& m);

/// Inverse parse of partial_init: recognizes e as an elaborated
/// initialization of σ, yielding the basis value whose Var leaves hold the
/// residual subexpressions.
std::optional<BasisValue> parse_init(const OpenQType& t, const QExp& e, const TypeAssignment& m);

/// One clause Lower α ⊗ X1 ⊗ ... of a normal quantum type.
struct NFClause {
  FinType card = FinType::unit();
  std::vector<TVarName> vars;  // sorted
  bool operator==(const NFClause& o) const { return card == o.card && vars == o.vars; }
};

/// Normal form: a ⊕-chain of clauses in canonical order (sorted by variable
/// multiset, then by base type); the empty chain is Lower Void.
struct NormalForm {
  std::vector<NFClause> clauses;
  bool operator==(const NormalForm& o) const { return clauses == o.clauses; }
  std::string show() const;
};

/// The quantum type denoted by a normal form (right-nested chains).
OpenQType nf_type(const NormalForm& nf);

/// A witness tree together with its endpoints (the endpoints are derivable
/// from the tree; UnitaryEquiv caches them at construction).
using EquivWitness = UnitaryEquiv;

/// Normalization per the normal-form recursion, with a verified witness
/// σ ≃ nf_type(result).
std::pair<NormalForm, EquivWitness> normalize_type(const OpenQType& t);

/// Decides σ ⇌ τ: normalizes both sides, drops empty-cardinality clauses,
/// and matches summed cardinalities per variable multiset; on success the
/// returned witness chains the normalization, merge, and relabel steps.
std::optional<EquivWitness> decide_equiv(const OpenQType& sigma, const OpenQType& tau);

}  // namespace qeq

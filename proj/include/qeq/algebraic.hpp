#pragma once

#include "qeq/qexp.hpp"

namespace qeq {

/// True iff the type is Lower Bool or a tensor of binary types (the Qubit^n
/// fragment the algebraic calculus speaks about).
bool is_binary_type(const QType& t);

/// Terms of the algebraic calculus, continuation-passing style. Wires are
/// linear; continuation variables live in a separate zone and may be used
/// by several measurement branches. Unitary steps consume a tuple of wires
/// and bind a tuple of output wires (the singleton case is the common one).
class AlgTerm {
 public:
  enum class Kind { Apply, Split, New, Meas, UStep };

  static AlgTerm apply(VarName cont, std::vector<VarName> wires);
  static AlgTerm split(VarName wire, VarName w1, VarName w2, AlgTerm body);
  static AlgTerm make_new(VarName wire, AlgTerm body);
  static AlgTerm meas(VarName wire, AlgTerm if0, AlgTerm if1);
  static AlgTerm ustep(UnitaryExpr u, std::vector<VarName> ins, std::vector<VarName> outs,
                       AlgTerm body);

  Kind kind() const { return node_->kind; }
  const VarName& cont() const { return node_->cont; }
  const std::vector<VarName>& wires() const { return node_->wires; }      // Apply ins / UStep ins
  const std::vector<VarName>& out_wires() const { return node_->outs; }  // UStep outs
  const VarName& wire() const { return node_->wires.at(0); }             // Split/New/Meas subject
  const VarName& bind1() const { return node_->outs.at(0); }             // Split binders
  const VarName& bind2() const { return node_->outs.at(1); }
  const AlgTerm& body(int i = 0) const { return node_->children.at(i); }
  std::size_t body_count() const { return node_->children.size(); }
  const UnitaryExpr& unitary() const;

  std::string show() const;

 private:
  struct Node {
    Kind kind;
    VarName cont;
    std::vector<VarName> wires;
    std::vector<VarName> outs;
    std::vector<AlgTerm> children;
    std::shared_ptr<const UnitaryExpr> u;
  };
  explicit AlgTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// discard a in t ≡ meas(a, t, t).
AlgTerm alg_discard(const VarName& wire, AlgTerm t);
/// D(U, V) ≡ DISTR⁻¹ ∘ (U ⊕ V) ∘ DISTR on Qubit ⊗ σ.
UnitaryExpr d_gate(const UnitaryExpr& u, const UnitaryExpr& v);
/// The DISTR unitary Qubit ⊗ σ → σ ⊕ σ (a basis permutation).
UnitaryExpr distr_gate(const QType& sigma);

/// Free wires of a term (continuations excluded).
std::set<VarName> alg_free_wires(const AlgTerm& t);
/// Continuation names used by a term.
std::set<VarName> alg_conts(const AlgTerm& t);

std::string alg_alpha_key(const AlgTerm& t);
bool alg_alpha_eq(const AlgTerm& a, const AlgTerm& b);

struct AlgCheckResult {
  bool ok = false;
  std::string detail;
};

/// Γ | Δ ⊢ t: wires in Δ consumed exactly once; all types binary.
AlgCheckResult check_alg(const Ctx& conts, const Ctx& wires, const AlgTerm& t);

/// Substitutes continuation x (with parameter wire `param` of u) into t:
/// each site x(a1..an) becomes u with its parameter tuple bound to a1..an.
/// The wire types supply the tuple splits, so the caller passes the typing
/// zones the SUBST rule mentions.
AlgTerm alg_subst(const AlgTerm& t, const VarName& x, const VarName& param, const AlgTerm& u,
                  const Ctx& wire_types_t, const QType& param_type);

struct AlgAxiom {
  std::string name;  // A..O
  std::string description;
};

/// The fifteen named axioms (Figs. 12–13 plus the three tensor commuting
/// conversions). Instances are generated by the sweeps module; semantic
/// validation routes through to_qexp.
std::vector<AlgAxiom> alg_axioms();

/// ⟨t⟩: translation to the term calculus; t must have exactly one
/// continuation x (the distinguished output).
QExp to_qexp(const AlgTerm& t, const VarName& x, const Ctx& wires);

/// ⟨e⟩^result: translation of a sum-free term over binary types into the
/// algebraic calculus.
AlgTerm to_alg(const QExp& e, const Ctx& ctx, const VarName& result);

}  // namespace qeq

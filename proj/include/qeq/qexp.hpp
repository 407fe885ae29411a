#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qeq/unitary.hpp"

namespace qeq {

using VarName = std::string;

/// Typing context: a finite map from linear variables to quantum types.
/// Iteration order (and hence the canonical wire order) is lexicographic.
class Ctx {
 public:
  Ctx() = default;
  Ctx(std::initializer_list<std::pair<const VarName, QType>> init) : vars_(init) {}

  bool contains(const VarName& x) const { return vars_.count(x) != 0; }
  const QType& at(const VarName& x) const;
  std::size_t size() const { return vars_.size(); }
  bool empty() const { return vars_.empty(); }

  void bind(const VarName& x, QType t);
  void erase(const VarName& x) { vars_.erase(x); }

  /// Disjoint merge; throws type_error when domains overlap.
  Ctx merged(const Ctx& other) const;
  /// Restriction to a variable set (missing names ignored).
  Ctx restricted(const std::set<VarName>& names) const;
  std::set<VarName> domain() const;

  auto begin() const { return vars_.begin(); }
  auto end() const { return vars_.end(); }
  bool operator==(const Ctx& other) const { return vars_ == other.vars_; }

  std::string show() const;

 private:
  std::map<VarName, QType> vars_;
};

/// Linear quantum expressions. Binders are explicit names; alpha equivalence
/// is the semantic identity on terms. Put carries its base type, Inj may
/// carry the full sum type it targets, and LetBang's branch family is a
/// total table indexed by the scrutinee base type's canonical enumeration.
class QExp {
 public:
  enum class Kind { Var, Let, Pair, LetPair, Inj, Case, Put, LetBang, UApp };

  static QExp var(VarName x);
  static QExp let(VarName x, QExp bound, QExp body);
  static QExp pair(QExp first, QExp second);
  static QExp let_pair(VarName x1, VarName x2, QExp bound, QExp body);
  static QExp inj(int which, QType sum_type, QExp body);
  static QExp inj_unannotated(int which, QExp body);
  static QExp case_of(QExp scrutinee, VarName x1, QExp branch1, VarName x2, QExp branch2);
  static QExp put(FinType base, std::size_t value);
  static QExp let_bang(QExp scrutinee, FinType base, std::vector<QExp> branches,
                       std::optional<QType> result_ann = std::nullopt);
  static QExp uapp(UnitaryExpr u, QExp body);

  Kind kind() const { return node_->kind; }

  const VarName& var_name() const { return node_->names.at(0); }   // Var/Let/LetPair/Case binder 1
  const VarName& var_name2() const { return node_->names.at(1); }  // LetPair/Case binder 2
  const QExp& child(int i) const { return node_->children.at(i); }
  std::size_t child_count() const { return node_->children.size(); }
  int inj_which() const { return node_->which; }
  const std::optional<QType>& inj_ann() const { return node_->ann; }
  const FinType& put_base() const { return node_->base; }
  std::size_t put_value() const { return node_->value; }
  const FinType& bang_base() const { return node_->base; }
  const std::optional<QType>& bang_ann() const { return node_->ann; }
  const UnitaryExpr& unitary() const;

  bool operator==(const QExp& other) const { return node_ == other.node_; }  // identity only

  std::string show() const;

 private:
  struct Node {
    Kind kind;
    std::vector<VarName> names;
    std::vector<QExp> children;
    int which = 0;                         // Inj index (1 or 2)
    std::optional<QType> ann;              // Inj sum type / LetBang result type
    FinType base = FinType::unit();        // Put/LetBang base
    std::size_t value = 0;                 // Put element
    std::shared_ptr<const UnitaryExpr> u;  // UApp payload
  };
  explicit QExp(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

std::set<VarName> free_vars(const QExp& e);
/// Free variable occurrence counts (a variable may appear more than once
/// in an ill-typed term).
std::map<VarName, std::size_t> free_var_counts(const QExp& e);

bool alpha_eq(const QExp& a, const QExp& b);

/// Canonical printing with de Bruijn-numbered binders; equal strings iff
/// alpha-equivalent terms.
std::string alpha_key(const QExp& e);

/// Simultaneous capture-avoiding substitution. Bound variables of e are
/// renamed as needed; names in the mapping that are not free in e are
/// ignored.
QExp subst(const QExp& e, const std::map<VarName, QExp>& bindings);

/// Fresh variable name; never collides with parser-accepted names.
VarName fresh_var(const std::string& hint = "x");

/// A suspended one-argument quantum computation (host-level function sugar).
struct LinearFn {
  VarName param;
  QType param_type;
  QExp body;
};

LinearFn suspend(VarName param, QType param_type, QExp body);
QExp force(const LinearFn& f, const QExp& arg);

/// meas : Qubit ⊸ Lower Bool, the measure-then-reput function.
LinearFn meas_fn();
/// init b = put b at Bool.
QExp init_qubit(bool b);

}  // namespace qeq

#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>

#include "qeq/fintype.hpp"

namespace qeq {

/// Closed quantum types: Lower α, σ ⊗ τ, σ ⊕ τ.
/// dim(Lower α) = |α|; Tensor multiplies, Oplus adds. Basis indices of
/// Tensor are left-major, of Oplus left block first, matching FinType's
/// element enumeration.
class QType {
 public:
  enum class Kind { Lower, Tensor, Oplus };

  static QType lower(FinType base);
  static QType tensor(QType l, QType r);
  static QType oplus(QType l, QType r);
  static QType qubit() { return lower(FinType::boolean()); }
  static QType unit() { return lower(FinType::unit()); }

  Kind kind() const { return node_->kind; }
  FinType base() const;
  QType left() const;
  QType right() const;
  std::size_t dim() const { return node_->dim; }

  bool operator==(const QType& other) const;
  bool operator!=(const QType& other) const { return !(*this == other); }

  std::string show() const;

 private:
  struct Node {
    Kind kind;
    FinType base = FinType::unit();
    std::shared_ptr<const Node> l, r;
    std::size_t dim = 0;
  };
  explicit QType(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

using TVarName = std::string;

/// Assigns a finite basis type to each type variable in scope.
using TypeAssignment = std::map<TVarName, FinType>;

/// Quantum types extended with type variables; drives partial
/// initialization/measurement and the open type equivalence machinery.
class OpenQType {
 public:
  enum class Kind { Var, Lower, Tensor, Oplus };

  static OpenQType var(TVarName name);
  static OpenQType lower(FinType base);
  static OpenQType tensor(OpenQType l, OpenQType r);
  static OpenQType oplus(OpenQType l, OpenQType r);
  static OpenQType from_closed(const QType& t);

  Kind kind() const { return node_->kind; }
  const TVarName& var_name() const;
  FinType base() const;
  OpenQType left() const;
  OpenQType right() const;

  bool is_closed() const;
  QType to_closed() const;  // throws if a Var remains
  /// Substitutes Lower(m X) for each variable X; total m required.
  QType instantiate(const TypeAssignment& m) const;

  std::set<TVarName> free_tvars() const;

  bool operator==(const OpenQType& other) const;
  bool operator!=(const OpenQType& other) const { return !(*this == other); }

  std::string show() const;

 private:
  struct Node {
    Kind kind;
    TVarName name;
    FinType base = FinType::unit();
    std::shared_ptr<const Node> l, r;
  };
  explicit OpenQType(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

}  // namespace qeq

#include "qeq/qtype.hpp"

namespace qeq {

QType QType::lower(FinType b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Lower;
  n->base = b;
  n->dim = b.card();
  return QType(std::move(n));
}

QType QType::tensor(QType l, QType r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Tensor;
  n->dim = l.dim() * r.dim();
  n->l = l.node_;
  n->r = r.node_;
  return QType(std::move(n));
}

QType QType::oplus(QType l, QType r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Oplus;
  n->dim = l.dim() + r.dim();
  n->l = l.node_;
  n->r = r.node_;
  return QType(std::move(n));
}

FinType QType::base() const {
  if (kind() != Kind::Lower) throw type_error("base() on non-Lower QType");
  return node_->base;
}

QType QType::left() const {
  if (kind() == Kind::Lower) throw type_error("left() on Lower QType");
  return QType(node_->l);
}

QType QType::right() const {
  if (kind() == Kind::Lower) throw type_error("right() on Lower QType");
  return QType(node_->r);
}

bool QType::operator==(const QType& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  if (kind() == Kind::Lower) return base() == other.base();
  return left() == other.left() && right() == other.right();
}

std::string QType::show() const {
  switch (kind()) {
    case Kind::Lower:
      if (base() == FinType::boolean()) return "qubit";
      return "(lower " + base().show() + ")";
    case Kind::Tensor: return "(tensor " + left().show() + " " + right().show() + ")";
    case Kind::Oplus: return "(oplus " + left().show() + " " + right().show() + ")";
  }
  return "?";
}

OpenQType OpenQType::var(TVarName name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->name = std::move(name);
  return OpenQType(std::move(n));
}

OpenQType OpenQType::lower(FinType b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Lower;
  n->base = b;
  return OpenQType(std::move(n));
}

OpenQType OpenQType::tensor(OpenQType l, OpenQType r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Tensor;
  n->l = l.node_;
  n->r = r.node_;
  return OpenQType(std::move(n));
}

OpenQType OpenQType::oplus(OpenQType l, OpenQType r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Oplus;
  n->l = l.node_;
  n->r = r.node_;
  return OpenQType(std::move(n));
}

OpenQType OpenQType::from_closed(const QType& t) {
  switch (t.kind()) {
    case QType::Kind::Lower: return lower(t.base());
    case QType::Kind::Tensor: return tensor(from_closed(t.left()), from_closed(t.right()));
    case QType::Kind::Oplus: return oplus(from_closed(t.left()), from_closed(t.right()));
  }
  throw type_error("bad QType");
}

const TVarName& OpenQType::var_name() const {
  if (kind() != Kind::Var) throw type_error("var_name() on non-Var OpenQType");
  return node_->name;
}

FinType OpenQType::base() const {
  if (kind() != Kind::Lower) throw type_error("base() on non-Lower OpenQType");
  return node_->base;
}

OpenQType OpenQType::left() const {
  if (kind() != Kind::Tensor && kind() != Kind::Oplus)
    throw type_error("left() on leaf OpenQType");
  return OpenQType(node_->l);
}

OpenQType OpenQType::right() const {
  if (kind() != Kind::Tensor && kind() != Kind::Oplus)
    throw type_error("right() on leaf OpenQType");
  return OpenQType(node_->r);
}

bool OpenQType::is_closed() const {
  switch (kind()) {
    case Kind::Var: return false;
    case Kind::Lower: return true;
    default: return left().is_closed() && right().is_closed();
  }
}

QType OpenQType::to_closed() const {
  switch (kind()) {
    case Kind::Var: throw type_error("to_closed: free type variable " + node_->name);
    case Kind::Lower: return QType::lower(base());
    case Kind::Tensor: return QType::tensor(left().to_closed(), right().to_closed());
    case Kind::Oplus: return QType::oplus(left().to_closed(), right().to_closed());
  }
  throw type_error("bad OpenQType");
}

QType OpenQType::instantiate(const TypeAssignment& m) const {
  switch (kind()) {
    case Kind::Var: {
      auto it = m.find(node_->name);
      if (it == m.end()) throw type_error("unbound type variable " + node_->name);
      return QType::lower(it->second);
    }
    case Kind::Lower: return QType::lower(base());
    case Kind::Tensor: return QType::tensor(left().instantiate(m), right().instantiate(m));
    case Kind::Oplus: return QType::oplus(left().instantiate(m), right().instantiate(m));
  }
  throw type_error("bad OpenQType");
}

std::set<TVarName> OpenQType::free_tvars() const {
  std::set<TVarName> out;
  switch (kind()) {
    case Kind::Var: out.insert(node_->name); break;
    case Kind::Lower: break;
    default: {
      auto l = left().free_tvars();
      auto r = right().free_tvars();
      out.insert(l.begin(), l.end());
      out.insert(r.begin(), r.end());
    }
  }
  return out;
}

bool OpenQType::operator==(const OpenQType& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::Var: return node_->name == other.node_->name;
    case Kind::Lower: return base() == other.base();
    default: return left() == other.left() && right() == other.right();
  }
}

std::string OpenQType::show() const {
  switch (kind()) {
    case Kind::Var: return "(tvar " + node_->name + ")";
    case Kind::Lower:
      if (base() == FinType::boolean()) return "qubit";
      return "(lower " + base().show() + ")";
    case Kind::Tensor: return "(tensor " + left().show() + " " + right().show() + ")";
    case Kind::Oplus: return "(oplus " + left().show() + " " + right().show() + ")";
  }
  return "?";
}

}  // namespace qeq

#include "qeq/fintype.hpp"

namespace qeq {

FinType FinType::void_type() {
  static FinType t = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Void;
    n->card = 0;
    return FinType(std::move(n));
  }();
  return t;
}

FinType FinType::unit() {
  static FinType t = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Unit;
    n->card = 1;
    return FinType(std::move(n));
  }();
  return t;
}

FinType FinType::boolean() {
  static FinType t = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Bool;
    n->card = 2;
    return FinType(std::move(n));
  }();
  return t;
}

FinType FinType::fin(std::size_t n) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Fin;
  node->n = n;
  node->card = n;
  return FinType(std::move(node));
}

FinType FinType::sum(FinType left, FinType right) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Sum;
  node->card = left.card() + right.card();
  node->l = left.node_;
  node->r = right.node_;
  return FinType(std::move(node));
}

FinType FinType::prod(FinType left, FinType right) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Prod;
  node->card = left.card() * right.card();
  node->l = left.node_;
  node->r = right.node_;
  return FinType(std::move(node));
}

std::size_t FinType::fin_size() const {
  if (kind() != Kind::Fin) throw type_error("fin_size on non-Fin type");
  return node_->n;
}

FinType FinType::left() const {
  if (kind() != Kind::Sum && kind() != Kind::Prod)
    throw type_error("left() on leaf FinType");
  return FinType(node_->l);
}

FinType FinType::right() const {
  if (kind() != Kind::Sum && kind() != Kind::Prod)
    throw type_error("right() on leaf FinType");
  return FinType(node_->r);
}

bool FinType::operator==(const FinType& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::Void:
    case Kind::Unit:
    case Kind::Bool:
      return true;
    case Kind::Fin:
      return node_->n == other.node_->n;
    case Kind::Sum:
    case Kind::Prod:
      return left() == other.left() && right() == other.right();
  }
  return false;
}

std::string FinType::show() const {
  switch (kind()) {
    case Kind::Void: return "void";
    case Kind::Unit: return "unit";
    case Kind::Bool: return "bool";
    case Kind::Fin: return "(fin " + std::to_string(node_->n) + ")";
    case Kind::Sum: return "(sum " + left().show() + " " + right().show() + ")";
    case Kind::Prod: return "(prod " + left().show() + " " + right().show() + ")";
  }
  return "?";
}

std::size_t FinType::prod_index(std::size_t l, std::size_t r) const {
  if (kind() != Kind::Prod) throw type_error("prod_index on non-Prod type");
  return l * right().card() + r;
}

std::pair<std::size_t, std::size_t> FinType::prod_split(std::size_t i) const {
  if (kind() != Kind::Prod) throw type_error("prod_split on non-Prod type");
  std::size_t rc = right().card();
  if (rc == 0) throw type_error("prod_split into empty right factor");
  return {i / rc, i % rc};
}

std::size_t FinType::sum_inl(std::size_t l) const {
  if (kind() != Kind::Sum) throw type_error("sum_inl on non-Sum type");
  return l;
}

std::size_t FinType::sum_inr(std::size_t r) const {
  if (kind() != Kind::Sum) throw type_error("sum_inr on non-Sum type");
  return left().card() + r;
}

std::pair<int, std::size_t> FinType::sum_split(std::size_t i) const {
  if (kind() != Kind::Sum) throw type_error("sum_split on non-Sum type");
  std::size_t lc = left().card();
  if (i < lc) return {1, i};
  return {2, i - lc};
}

}  // namespace qeq

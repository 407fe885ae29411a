#include "qeq/unitary.hpp"

#include <cmath>

namespace qeq {

namespace {

OpenQType olower(FinType f) { return OpenQType::lower(std::move(f)); }
OpenQType ounit() { return olower(FinType::unit()); }
OpenQType ovoid() { return olower(FinType::void_type()); }

}  // namespace

UnitaryEquiv UnitaryEquiv::refl(OpenQType t) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Refl;
  n->src = t;
  n->dst = t;
  n->operands = {t};
  return UnitaryEquiv(std::move(n));
}

UnitaryEquiv UnitaryEquiv::symm(UnitaryEquiv f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Symm;
  n->src = f.dst();
  n->dst = f.src();
  n->children = {std::move(f)};
  return UnitaryEquiv(std::move(n));
}

UnitaryEquiv UnitaryEquiv::trans(UnitaryEquiv f, UnitaryEquiv g) {
  if (f.dst() != g.src())
    throw type_error("trans: endpoint mismatch between " + f.dst().show() + " and " +
                     g.src().show());
  auto n = std::make_shared<Node>();
  n->kind = Kind::Trans;
  n->src = f.src();
  n->dst = g.dst();
  n->children = {std::move(f), std::move(g)};
  return UnitaryEquiv(std::move(n));
}

UnitaryEquiv UnitaryEquiv::cong_tensor(UnitaryEquiv f, UnitaryEquiv g) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::CongTensor;
  n->src = OpenQType::tensor(f.src(), g.src());
  n->dst = OpenQType::tensor(f.dst(), g.dst());
  n->children = {std::move(f), std::move(g)};
  return UnitaryEquiv(std::move(n));
}

UnitaryEquiv UnitaryEquiv::cong_oplus(UnitaryEquiv f, UnitaryEquiv g) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::CongOplus;
  n->src = OpenQType::oplus(f.src(), g.src());
  n->dst = OpenQType::oplus(f.dst(), g.dst());
  n->children = {std::move(f), std::move(g)};
  return UnitaryEquiv(std::move(n));
}

UnitaryEquiv UnitaryEquiv::swap_tensor(OpenQType a, OpenQType b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::SwapTensor;
  n->src = OpenQType::tensor(a, b);
  n->dst = OpenQType::tensor(b, a);
  n->operands = {std::move(a), std::move(b)};
  return UnitaryEquiv(std::move(n));
}

UnitaryEquiv UnitaryEquiv::swap_oplus(OpenQType a, OpenQType b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::SwapOplus;
  n->src = OpenQType::oplus(a, b);
  n->dst = OpenQType::oplus(b, a);
  n->operands = {std::move(a), std::move(b)};
  return UnitaryEquiv(std::move(n));
}

UnitaryEquiv UnitaryEquiv::assoc_tensor(OpenQType a, OpenQType b, OpenQType c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::AssocTensor;
  n->src = OpenQType::tensor(a, OpenQType::tensor(b, c));
  n->dst = OpenQType::tensor(OpenQType::tensor(a, b), c);
  n->operands = {std::move(a), std::move(b), std::move(c)};
  return UnitaryEquiv(std::move(n));
}

UnitaryEquiv UnitaryEquiv::assoc_oplus(OpenQType a, OpenQType b, OpenQType c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::AssocOplus;
  n->src = OpenQType::oplus(a, OpenQType::oplus(b, c));
  n->dst = OpenQType::oplus(OpenQType::oplus(a, b), c);
  n->operands = {std::move(a), std::move(b), std::move(c)};
  return UnitaryEquiv(std::move(n));
}

UnitaryEquiv UnitaryEquiv::distr(OpenQType a, OpenQType b, OpenQType c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Distr;
  n->src = OpenQType::tensor(a, OpenQType::oplus(b, c));
  n->dst = OpenQType::oplus(OpenQType::tensor(a, b), OpenQType::tensor(a, c));
  n->operands = {std::move(a), std::move(b), std::move(c)};
  return UnitaryEquiv(std::move(n));
}

UnitaryEquiv UnitaryEquiv::lower_tensor(FinType a, FinType b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::LowerTensor;
  n->src = OpenQType::tensor(olower(a), olower(b));
  n->dst = olower(FinType::prod(a, b));
  n->fins = {std::move(a), std::move(b)};
  return UnitaryEquiv(std::move(n));
}

UnitaryEquiv UnitaryEquiv::lower_oplus(FinType a, FinType b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::LowerOplus;
  n->src = OpenQType::oplus(olower(a), olower(b));
  n->dst = olower(FinType::sum(a, b));
  n->fins = {std::move(a), std::move(b)};
  return UnitaryEquiv(std::move(n));
}

UnitaryEquiv UnitaryEquiv::lunit_tensor(OpenQType t) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::LUnitTensor;
  n->src = OpenQType::tensor(ounit(), t);
  n->dst = t;
  n->operands = {std::move(t)};
  return UnitaryEquiv(std::move(n));
}

UnitaryEquiv UnitaryEquiv::lunit_oplus(OpenQType t) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::LUnitOplus;
  n->src = OpenQType::oplus(ovoid(), t);
  n->dst = t;
  n->operands = {std::move(t)};
  return UnitaryEquiv(std::move(n));
}

UnitaryEquiv UnitaryEquiv::lzero(OpenQType t) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::LZero;
  n->src = OpenQType::tensor(ovoid(), t);
  n->dst = ovoid();
  n->operands = {std::move(t)};
  return UnitaryEquiv(std::move(n));
}

UnitaryEquiv UnitaryEquiv::lower_relabel(FinType a, FinType b) {
  if (a.card() != b.card())
    throw type_error("lower_relabel: cardinality mismatch " + a.show() + " vs " + b.show());
  auto n = std::make_shared<Node>();
  n->kind = Kind::LowerRelabel;
  n->src = olower(a);
  n->dst = olower(b);
  n->fins = {std::move(a), std::move(b)};
  return UnitaryEquiv(std::move(n));
}

const UnitaryEquiv& UnitaryEquiv::child(int i) const { return node_->children.at(i); }
const FinType& UnitaryEquiv::fin(int i) const { return node_->fins.at(i); }
const OpenQType& UnitaryEquiv::operand(int i) const { return node_->operands.at(i); }

bool UnitaryEquiv::operator==(const UnitaryEquiv& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  if (src() != other.src() || dst() != other.dst()) return false;
  if (node_->children.size() != other.node_->children.size()) return false;
  for (std::size_t i = 0; i < node_->children.size(); ++i)
    if (!(node_->children[i] == other.node_->children[i])) return false;
  if (node_->fins.size() != other.node_->fins.size()) return false;
  for (std::size_t i = 0; i < node_->fins.size(); ++i)
    if (node_->fins[i] != other.node_->fins[i]) return false;
  return true;
}

std::string UnitaryEquiv::show() const {
  switch (kind()) {
    case Kind::Refl: return "(refl " + src().show() + ")";
    case Kind::Symm: return "(symm " + child(0).show() + ")";
    case Kind::Trans: return "(trans " + child(0).show() + " " + child(1).show() + ")";
    case Kind::CongTensor: return "(cong-tensor " + child(0).show() + " " + child(1).show() + ")";
    case Kind::CongOplus: return "(cong-oplus " + child(0).show() + " " + child(1).show() + ")";
    case Kind::SwapTensor: return "(swap-tensor " + operand(0).show() + " " + operand(1).show() + ")";
    case Kind::SwapOplus: return "(swap-oplus " + operand(0).show() + " " + operand(1).show() + ")";
    case Kind::AssocTensor:
      return "(assoc-tensor " + operand(0).show() + " " + operand(1).show() + " " +
             operand(2).show() + ")";
    case Kind::AssocOplus:
      return "(assoc-oplus " + operand(0).show() + " " + operand(1).show() + " " +
             operand(2).show() + ")";
    case Kind::Distr:
      return "(distr " + operand(0).show() + " " + operand(1).show() + " " + operand(2).show() +
             ")";
    case Kind::LowerTensor: return "(lower-tensor " + fin(0).show() + " " + fin(1).show() + ")";
    case Kind::LowerOplus: return "(lower-oplus " + fin(0).show() + " " + fin(1).show() + ")";
    case Kind::LUnitTensor: return "(lunit-tensor " + operand(0).show() + ")";
    case Kind::LUnitOplus: return "(lunit-oplus " + operand(0).show() + ")";
    case Kind::LZero: return "(lzero " + operand(0).show() + ")";
    case Kind::LowerRelabel: return "(relabel " + fin(0).show() + " " + fin(1).show() + ")";
  }
  return "?";
}

std::size_t UnitaryEquiv::generator_count() const {
  switch (kind()) {
    case Kind::Refl: return 0;
    case Kind::Symm: return child(0).generator_count();
    case Kind::Trans:
    case Kind::CongTensor:
    case Kind::CongOplus:
      return child(0).generator_count() + child(1).generator_count();
    default: return 1;
  }
}

UnitaryExpr UnitaryExpr::id(QType t) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Id;
  n->src = t;
  n->dst = t;
  return UnitaryExpr(std::move(n));
}

UnitaryExpr UnitaryExpr::compose(UnitaryExpr v, UnitaryExpr u) {
  if (u.target() != v.source())
    throw type_error("compose: target " + u.target().show() + " does not meet source " +
                     v.source().show());
  auto n = std::make_shared<Node>();
  n->kind = Kind::Compose;
  n->src = u.source();
  n->dst = v.target();
  n->children = {std::move(v), std::move(u)};
  return UnitaryExpr(std::move(n));
}

UnitaryExpr UnitaryExpr::adjoint(UnitaryExpr u) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Adjoint;
  n->src = u.target();
  n->dst = u.source();
  n->children = {std::move(u)};
  return UnitaryExpr(std::move(n));
}

UnitaryExpr UnitaryExpr::tensor(UnitaryExpr u, UnitaryExpr v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Tensor;
  n->src = QType::tensor(u.source(), v.source());
  n->dst = QType::tensor(u.target(), v.target());
  n->children = {std::move(u), std::move(v)};
  return UnitaryExpr(std::move(n));
}

UnitaryExpr UnitaryExpr::direct_sum(UnitaryExpr u, UnitaryExpr v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::DirectSum;
  n->src = QType::oplus(u.source(), v.source());
  n->dst = QType::oplus(u.target(), v.target());
  n->children = {std::move(u), std::move(v)};
  return UnitaryExpr(std::move(n));
}

UnitaryExpr UnitaryExpr::primitive(std::string name, ComplexMatrix m, QType src, QType dst) {
  if (m.cols() != src.dim() || m.rows() != dst.dim())
    throw type_error("primitive " + name + ": matrix shape does not match types");
  if (!is_unitary(m, 1e-9)) throw type_error("primitive " + name + ": matrix is not unitary");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Primitive;
  n->src = std::move(src);
  n->dst = std::move(dst);
  n->name = std::move(name);
  n->matrix = std::move(m);
  return UnitaryExpr(std::move(n));
}

UnitaryExpr UnitaryExpr::from_equiv(UnitaryEquiv f, TypeAssignment m) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::FromEquiv;
  n->src = f.src().instantiate(m);
  n->dst = f.dst().instantiate(m);
  n->equiv = std::make_shared<UnitaryEquiv>(std::move(f));
  n->assign = std::move(m);
  return UnitaryExpr(std::move(n));
}

const UnitaryExpr& UnitaryExpr::child(int i) const { return node_->children.at(i); }

const std::string& UnitaryExpr::prim_name() const {
  if (kind() != Kind::Primitive) throw type_error("prim_name on non-primitive");
  return node_->name;
}

const ComplexMatrix& UnitaryExpr::prim_matrix() const {
  if (kind() != Kind::Primitive) throw type_error("prim_matrix on non-primitive");
  return node_->matrix;
}

const UnitaryEquiv& UnitaryExpr::equiv() const {
  if (kind() != Kind::FromEquiv) throw type_error("equiv on non-FromEquiv");
  return *node_->equiv;
}

const TypeAssignment& UnitaryExpr::assignment() const {
  if (kind() != Kind::FromEquiv) throw type_error("assignment on non-FromEquiv");
  return node_->assign;
}

bool UnitaryExpr::operator==(const UnitaryExpr& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  if (source() != other.source() || target() != other.target()) return false;
  switch (kind()) {
    case Kind::Id: return true;
    case Kind::Primitive:
      return node_->name == other.node_->name &&
             node_->matrix.max_abs_diff(other.node_->matrix) == 0.0;
    case Kind::FromEquiv:
      return *node_->equiv == *other.node_->equiv && node_->assign == other.node_->assign;
    default:
      for (std::size_t i = 0; i < node_->children.size(); ++i)
        if (!(node_->children[i] == other.node_->children[i])) return false;
      return true;
  }
}

std::string UnitaryExpr::show() const {
  switch (kind()) {
    case Kind::Id: return "(id " + source().show() + ")";
    case Kind::Compose: return "(compose " + child(0).show() + " " + child(1).show() + ")";
    case Kind::Adjoint: return "(dagger " + child(0).show() + ")";
    case Kind::Tensor: return "(utensor " + child(0).show() + " " + child(1).show() + ")";
    case Kind::DirectSum: return "(uoplus " + child(0).show() + " " + child(1).show() + ")";
    case Kind::Primitive: return "(prim " + node_->name + ")";
    case Kind::FromEquiv: {
      std::string s = "(equiv " + node_->equiv->show() + " (";
      bool first = true;
      for (const auto& [k, v] : node_->assign) {
        if (!first) s += " ";
        s += "(" + k + " " + v.show() + ")";
        first = false;
      }
      return s + "))";
    }
  }
  return "?";
}

UnitaryExpr prim_x() {
  ComplexMatrix m(2, 2);
  m.at(0, 1) = 1.0;
  m.at(1, 0) = 1.0;
  return UnitaryExpr::primitive("X", std::move(m), QType::qubit(), QType::qubit());
}

UnitaryExpr prim_h() {
  double s = 1.0 / std::sqrt(2.0);
  ComplexMatrix m(2, 2);
  m.at(0, 0) = s;
  m.at(0, 1) = s;
  m.at(1, 0) = s;
  m.at(1, 1) = -s;
  return UnitaryExpr::primitive("H", std::move(m), QType::qubit(), QType::qubit());
}

UnitaryExpr prim_cnot() {
  ComplexMatrix m(4, 4);
  m.at(0, 0) = 1.0;
  m.at(1, 1) = 1.0;
  m.at(2, 3) = 1.0;
  m.at(3, 2) = 1.0;
  QType qq = QType::tensor(QType::qubit(), QType::qubit());
  return UnitaryExpr::primitive("CNOT", std::move(m), qq, qq);
}

UnitaryExpr prim_s() {
  ComplexMatrix m(2, 2);
  m.at(0, 0) = 1.0;
  m.at(1, 1) = cplx(0.0, 1.0);
  return UnitaryExpr::primitive("S", std::move(m), QType::qubit(), QType::qubit());
}

}  // namespace qeq

#include "qeq/qexp.hpp"

#include <atomic>
#include <sstream>

namespace qeq {

const QType& Ctx::at(const VarName& x) const {
  auto it = vars_.find(x);
  if (it == vars_.end()) throw type_error("unbound variable " + x);
  return it->second;
}

void Ctx::bind(const VarName& x, QType t) {
  auto [it, inserted] = vars_.emplace(x, std::move(t));
  if (!inserted) throw type_error("duplicate context variable " + x);
}

Ctx Ctx::merged(const Ctx& other) const {
  Ctx out = *this;
  for (const auto& [k, v] : other.vars_) out.bind(k, v);
  return out;
}

Ctx Ctx::restricted(const std::set<VarName>& names) const {
  Ctx out;
  for (const auto& [k, v] : vars_)
    if (names.count(k)) out.vars_.emplace(k, v);
  return out;
}

std::set<VarName> Ctx::domain() const {
  std::set<VarName> out;
  for (const auto& [k, v] : vars_) out.insert(k);
  return out;
}

std::string Ctx::show() const {
  std::string s = "{";
  bool first = true;
  for (const auto& [k, v] : vars_) {
    if (!first) s += ", ";
    s += k + ": " + v.show();
    first = false;
  }
  return s + "}";
}

QExp QExp::var(VarName x) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->names = {std::move(x)};
  return QExp(std::move(n));
}

QExp QExp::let(VarName x, QExp bound, QExp body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Let;
  n->names = {std::move(x)};
  n->children = {std::move(bound), std::move(body)};
  return QExp(std::move(n));
}

QExp QExp::pair(QExp first, QExp second) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pair;
  n->children = {std::move(first), std::move(second)};
  return QExp(std::move(n));
}

QExp QExp::let_pair(VarName x1, VarName x2, QExp bound, QExp body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::LetPair;
  n->names = {std::move(x1), std::move(x2)};
  n->children = {std::move(bound), std::move(body)};
  return QExp(std::move(n));
}

QExp QExp::inj(int which, QType sum_type, QExp body) {
  if (which != 1 && which != 2) throw type_error("inj index must be 1 or 2");
  if (sum_type.kind() != QType::Kind::Oplus)
    throw type_error("inj annotation must be a sum type");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Inj;
  n->which = which;
  n->ann = std::move(sum_type);
  n->children = {std::move(body)};
  return QExp(std::move(n));
}

QExp QExp::inj_unannotated(int which, QExp body) {
  if (which != 1 && which != 2) throw type_error("inj index must be 1 or 2");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Inj;
  n->which = which;
  n->children = {std::move(body)};
  return QExp(std::move(n));
}

QExp QExp::case_of(QExp scrutinee, VarName x1, QExp branch1, VarName x2, QExp branch2) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Case;
  n->names = {std::move(x1), std::move(x2)};
  n->children = {std::move(scrutinee), std::move(branch1), std::move(branch2)};
  return QExp(std::move(n));
}

QExp QExp::put(FinType base, std::size_t value) {
  if (value >= base.card()) throw type_error("put: element index out of range");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Put;
  n->base = std::move(base);
  n->value = value;
  return QExp(std::move(n));
}

QExp QExp::let_bang(QExp scrutinee, FinType base, std::vector<QExp> branches,
                    std::optional<QType> result_ann) {
  if (branches.size() != base.card())
    throw type_error("letbang: branch table size does not match base cardinality");
  if (branches.empty() && !result_ann)
    throw type_error("letbang over an empty base needs a result type annotation");
  if (!branches.empty()) result_ann.reset();  // annotation only matters for empty tables
  auto n = std::make_shared<Node>();
  n->kind = Kind::LetBang;
  n->base = std::move(base);
  n->ann = std::move(result_ann);
  n->children.reserve(branches.size() + 1);
  n->children.push_back(std::move(scrutinee));
  for (auto& b : branches) n->children.push_back(std::move(b));
  return QExp(std::move(n));
}

QExp QExp::uapp(UnitaryExpr u, QExp body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::UApp;
  n->u = std::make_shared<UnitaryExpr>(std::move(u));
  n->children = {std::move(body)};
  return QExp(std::move(n));
}

const UnitaryExpr& QExp::unitary() const {
  if (kind() != Kind::UApp) throw type_error("unitary() on non-UApp");
  return *node_->u;
}

namespace {

void collect_free(const QExp& e, std::map<VarName, std::size_t>& acc,
                  std::vector<VarName>& bound) {
  auto is_bound = [&](const VarName& x) {
    for (auto it = bound.rbegin(); it != bound.rend(); ++it)
      if (*it == x) return true;
    return false;
  };
  switch (e.kind()) {
    case QExp::Kind::Var:
      if (!is_bound(e.var_name())) acc[e.var_name()] += 1;
      break;
    case QExp::Kind::Let:
      collect_free(e.child(0), acc, bound);
      bound.push_back(e.var_name());
      collect_free(e.child(1), acc, bound);
      bound.pop_back();
      break;
    case QExp::Kind::Pair:
      collect_free(e.child(0), acc, bound);
      collect_free(e.child(1), acc, bound);
      break;
    case QExp::Kind::LetPair:
      collect_free(e.child(0), acc, bound);
      bound.push_back(e.var_name());
      bound.push_back(e.var_name2());
      collect_free(e.child(1), acc, bound);
      bound.pop_back();
      bound.pop_back();
      break;
    case QExp::Kind::Inj:
      collect_free(e.child(0), acc, bound);
      break;
    case QExp::Kind::Case:
      collect_free(e.child(0), acc, bound);
      bound.push_back(e.var_name());
      collect_free(e.child(1), acc, bound);
      bound.pop_back();
      bound.push_back(e.var_name2());
      collect_free(e.child(2), acc, bound);
      bound.pop_back();
      break;
    case QExp::Kind::Put:
      break;
    case QExp::Kind::LetBang:
      for (std::size_t i = 0; i < e.child_count(); ++i) collect_free(e.child(i), acc, bound);
      break;
    case QExp::Kind::UApp:
      collect_free(e.child(0), acc, bound);
      break;
  }
}

}  // namespace

std::map<VarName, std::size_t> free_var_counts(const QExp& e) {
  std::map<VarName, std::size_t> acc;
  std::vector<VarName> bound;
  collect_free(e, acc, bound);
  return acc;
}

std::set<VarName> free_vars(const QExp& e) {
  std::set<VarName> out;
  for (const auto& [k, v] : free_var_counts(e)) out.insert(k);
  return out;
}

namespace {

// De Bruijn-style canonical printing: binders become their nesting depth.
void alpha_print(const QExp& e, std::vector<VarName>& bound, std::ostringstream& os) {
  auto lookup = [&](const VarName& x) -> std::string {
    for (std::size_t i = bound.size(); i-- > 0;)
      if (bound[i] == x) return "#" + std::to_string(bound.size() - 1 - i);
    return x;
  };
  switch (e.kind()) {
    case QExp::Kind::Var:
      os << "(v " << lookup(e.var_name()) << ")";
      break;
    case QExp::Kind::Let:
      os << "(let ";
      alpha_print(e.child(0), bound, os);
      bound.push_back(e.var_name());
      alpha_print(e.child(1), bound, os);
      bound.pop_back();
      os << ")";
      break;
    case QExp::Kind::Pair:
      os << "(pair ";
      alpha_print(e.child(0), bound, os);
      alpha_print(e.child(1), bound, os);
      os << ")";
      break;
    case QExp::Kind::LetPair:
      os << "(letpair ";
      alpha_print(e.child(0), bound, os);
      bound.push_back(e.var_name());
      bound.push_back(e.var_name2());
      alpha_print(e.child(1), bound, os);
      bound.pop_back();
      bound.pop_back();
      os << ")";
      break;
    case QExp::Kind::Inj:
      os << "(inj" << e.inj_which();
      if (e.inj_ann()) os << ":" << e.inj_ann()->show();
      os << " ";
      alpha_print(e.child(0), bound, os);
      os << ")";
      break;
    case QExp::Kind::Case:
      os << "(case ";
      alpha_print(e.child(0), bound, os);
      bound.push_back(e.var_name());
      alpha_print(e.child(1), bound, os);
      bound.pop_back();
      bound.push_back(e.var_name2());
      alpha_print(e.child(2), bound, os);
      bound.pop_back();
      os << ")";
      break;
    case QExp::Kind::Put:
      os << "(put " << e.put_base().show() << " " << e.put_value() << ")";
      break;
    case QExp::Kind::LetBang:
      os << "(letbang " << e.bang_base().show() << " ";
      for (std::size_t i = 0; i < e.child_count(); ++i) alpha_print(e.child(i), bound, os);
      if (e.bang_ann()) os << ":" << e.bang_ann()->show();
      os << ")";
      break;
    case QExp::Kind::UApp:
      os << "(uapp " << e.unitary().show() << " ";
      alpha_print(e.child(0), bound, os);
      os << ")";
      break;
  }
}

}  // namespace

std::string alpha_key(const QExp& e) {
  std::ostringstream os;
  std::vector<VarName> bound;
  alpha_print(e, bound, os);
  return os.str();
}

bool alpha_eq(const QExp& a, const QExp& b) { return alpha_key(a) == alpha_key(b); }

VarName fresh_var(const std::string& hint) {
  static std::atomic<std::uint64_t> counter{0};
  return hint + "$" + std::to_string(counter.fetch_add(1));
}

namespace {

QExp subst_rec(const QExp& e, const std::map<VarName, QExp>& bindings,
               const std::set<VarName>& avoid);

// Renames binder x away from `avoid` and from the substitution domain,
// then substitutes in the body.
std::pair<VarName, QExp> rebind(const VarName& x, const QExp& body,
                                const std::map<VarName, QExp>& bindings,
                                const std::set<VarName>& avoid) {
  std::map<VarName, QExp> inner = bindings;
  inner.erase(x);
  if (avoid.count(x) == 0) {
    return {x, subst_rec(body, inner, avoid)};
  }
  VarName nx = fresh_var(x);
  inner.emplace(x, QExp::var(nx));
  return {nx, subst_rec(body, inner, avoid)};
}

QExp subst_rec(const QExp& e, const std::map<VarName, QExp>& bindings,
               const std::set<VarName>& avoid) {
  switch (e.kind()) {
    case QExp::Kind::Var: {
      auto it = bindings.find(e.var_name());
      return it == bindings.end() ? e : it->second;
    }
    case QExp::Kind::Let: {
      QExp bound = subst_rec(e.child(0), bindings, avoid);
      auto [x, body] = rebind(e.var_name(), e.child(1), bindings, avoid);
      return QExp::let(x, std::move(bound), std::move(body));
    }
    case QExp::Kind::Pair:
      return QExp::pair(subst_rec(e.child(0), bindings, avoid),
                        subst_rec(e.child(1), bindings, avoid));
    case QExp::Kind::LetPair: {
      QExp bound = subst_rec(e.child(0), bindings, avoid);
      // Rename the two binders one after the other.
      std::map<VarName, QExp> inner = bindings;
      inner.erase(e.var_name());
      inner.erase(e.var_name2());
      VarName x1 = e.var_name(), x2 = e.var_name2();
      if (avoid.count(x1)) {
        VarName n1 = fresh_var(x1);
        inner.emplace(x1, QExp::var(n1));
        x1 = n1;
      }
      if (avoid.count(x2)) {
        VarName n2 = fresh_var(x2);
        inner.insert_or_assign(e.var_name2(), QExp::var(n2));
        x2 = n2;
      }
      return QExp::let_pair(x1, x2, std::move(bound), subst_rec(e.child(1), inner, avoid));
    }
    case QExp::Kind::Inj: {
      QExp body = subst_rec(e.child(0), bindings, avoid);
      return e.inj_ann() ? QExp::inj(e.inj_which(), *e.inj_ann(), std::move(body))
                         : QExp::inj_unannotated(e.inj_which(), std::move(body));
    }
    case QExp::Kind::Case: {
      QExp scrut = subst_rec(e.child(0), bindings, avoid);
      auto [x1, b1] = rebind(e.var_name(), e.child(1), bindings, avoid);
      auto [x2, b2] = rebind(e.var_name2(), e.child(2), bindings, avoid);
      return QExp::case_of(std::move(scrut), x1, std::move(b1), x2, std::move(b2));
    }
    case QExp::Kind::Put:
      return e;
    case QExp::Kind::LetBang: {
      QExp scrut = subst_rec(e.child(0), bindings, avoid);
      std::vector<QExp> branches;
      branches.reserve(e.child_count() - 1);
      for (std::size_t i = 1; i < e.child_count(); ++i)
        branches.push_back(subst_rec(e.child(i), bindings, avoid));
      return QExp::let_bang(std::move(scrut), e.bang_base(), std::move(branches), e.bang_ann());
    }
    case QExp::Kind::UApp:
      return QExp::uapp(e.unitary(), subst_rec(e.child(0), bindings, avoid));
  }
  throw type_error("bad QExp");
}

}  // namespace

QExp subst(const QExp& e, const std::map<VarName, QExp>& bindings) {
  if (bindings.empty()) return e;
  // Binders in e must avoid capturing anything free in the payloads.
  std::set<VarName> avoid;
  for (const auto& [k, v] : bindings) {
    auto fv = free_vars(v);
    avoid.insert(fv.begin(), fv.end());
  }
  return subst_rec(e, bindings, avoid);
}

std::string QExp::show() const {
  switch (kind()) {
    case Kind::Var: return "(var " + var_name() + ")";
    case Kind::Let:
      return "(let " + var_name() + " " + child(0).show() + " " + child(1).show() + ")";
    case Kind::Pair: return "(pair " + child(0).show() + " " + child(1).show() + ")";
    case Kind::LetPair:
      return "(letpair " + var_name() + " " + var_name2() + " " + child(0).show() + " " +
             child(1).show() + ")";
    case Kind::Inj: {
      std::string s = "(inj " + std::to_string(inj_which());
      if (inj_ann()) s += " " + inj_ann()->show();
      return s + " " + child(0).show() + ")";
    }
    case Kind::Case:
      return "(case " + child(0).show() + " (" + var_name() + " " + child(1).show() + ") (" +
             var_name2() + " " + child(2).show() + "))";
    case Kind::Put: {
      std::string v = std::to_string(put_value());
      if (put_base() == FinType::boolean()) v = put_value() ? "true" : "false";
      return "(put " + put_base().show() + " " + v + ")";
    }
    case Kind::LetBang: {
      std::string s = "(letbang " + child(0).show() + " (";
      for (std::size_t i = 1; i < child_count(); ++i) {
        if (i > 1) s += " ";
        s += "(v" + std::to_string(i - 1) + " " + child(i).show() + ")";
      }
      s += ")";
      if (child_count() == 1) {
        s += " " + bang_ann()->show();
      } else {
        // The base is implied by the table size for bool/unit/fin; spell it
        // out otherwise so the parse round-trips.
        std::size_t n = child_count() - 1;
        bool canonical = (n == 2 && bang_base() == FinType::boolean()) ||
                         (n == 1 && bang_base() == FinType::unit()) ||
                         bang_base() == FinType::fin(n);
        if (!canonical) s += " " + bang_base().show();
      }
      return s + ")";
    }
    case Kind::UApp: return "(uapp " + unitary().show() + " " + child(0).show() + ")";
  }
  return "?";
}

LinearFn suspend(VarName param, QType param_type, QExp body) {
  return LinearFn{std::move(param), std::move(param_type), std::move(body)};
}

QExp force(const LinearFn& f, const QExp& arg) {
  return subst(f.body, {{f.param, arg}});
}

LinearFn meas_fn() {
  VarName x = "x";
  std::vector<QExp> branches = {QExp::put(FinType::boolean(), 0), QExp::put(FinType::boolean(), 1)};
  return suspend(x, QType::qubit(),
                 QExp::let_bang(QExp::var(x), FinType::boolean(), std::move(branches)));
}

QExp init_qubit(bool b) { return QExp::put(FinType::boolean(), b ? 1 : 0); }

}  // namespace qeq

#include "qeq/algebraic.hpp"

#include <functional>
#include <sstream>

#include "qeq/typecheck.hpp"

namespace qeq {

bool is_binary_type(const QType& t) {
  switch (t.kind()) {
    case QType::Kind::Lower: return t.base() == FinType::boolean();
    case QType::Kind::Tensor: return is_binary_type(t.left()) && is_binary_type(t.right());
    case QType::Kind::Oplus: return false;
  }
  return false;
}

AlgTerm AlgTerm::apply(VarName cont, std::vector<VarName> wires) {
  if (wires.empty()) throw type_error("apply needs at least one wire");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Apply;
  n->cont = std::move(cont);
  n->wires = std::move(wires);
  return AlgTerm(std::move(n));
}

AlgTerm AlgTerm::split(VarName wire, VarName w1, VarName w2, AlgTerm body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Split;
  n->wires = {std::move(wire)};
  n->outs = {std::move(w1), std::move(w2)};
  n->children = {std::move(body)};
  return AlgTerm(std::move(n));
}

AlgTerm AlgTerm::make_new(VarName wire, AlgTerm body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::New;
  n->wires = {std::move(wire)};
  n->children = {std::move(body)};
  return AlgTerm(std::move(n));
}

AlgTerm AlgTerm::meas(VarName wire, AlgTerm if0, AlgTerm if1) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Meas;
  n->wires = {std::move(wire)};
  n->children = {std::move(if0), std::move(if1)};
  return AlgTerm(std::move(n));
}

AlgTerm AlgTerm::ustep(UnitaryExpr u, std::vector<VarName> ins, std::vector<VarName> outs,
                       AlgTerm body) {
  if (ins.empty() || outs.empty()) throw type_error("ustep needs input and output wires");
  auto n = std::make_shared<Node>();
  n->kind = Kind::UStep;
  n->u = std::make_shared<UnitaryExpr>(std::move(u));
  n->wires = std::move(ins);
  n->outs = std::move(outs);
  n->children = {std::move(body)};
  return AlgTerm(std::move(n));
}

const UnitaryExpr& AlgTerm::unitary() const {
  if (kind() != Kind::UStep) throw type_error("unitary() on non-UStep");
  return *node_->u;
}

AlgTerm alg_discard(const VarName& wire, AlgTerm t) {
  return AlgTerm::meas(wire, t, t);
}

UnitaryExpr distr_gate(const QType& sigma) {
  // (b, s) ↦ inl s when b = 0, inr s otherwise; the identity permutation
  // under the left-major/left-block enumerations.
  std::size_t d = sigma.dim();
  std::vector<std::size_t> perm(2 * d);
  for (std::size_t b = 0; b < 2; ++b)
    for (std::size_t s = 0; s < d; ++s) perm[b * d + s] = b * d + s;
  return UnitaryExpr::primitive("DISTR", ComplexMatrix::permutation(perm),
                                QType::tensor(QType::qubit(), sigma),
                                QType::oplus(sigma, sigma));
}

UnitaryExpr d_gate(const UnitaryExpr& u, const UnitaryExpr& v) {
  if (u.source() != v.source() || u.target() != v.target() || u.source() != u.target())
    throw type_error("d_gate expects two endounitaries on the same type");
  UnitaryExpr d = distr_gate(u.source());
  return UnitaryExpr::compose(UnitaryExpr::adjoint(d),
                              UnitaryExpr::compose(UnitaryExpr::direct_sum(u, v), d));
}

std::set<VarName> alg_free_wires(const AlgTerm& t) {
  std::set<VarName> out;
  switch (t.kind()) {
    case AlgTerm::Kind::Apply:
      out.insert(t.wires().begin(), t.wires().end());
      return out;
    case AlgTerm::Kind::Split: {
      out = alg_free_wires(t.body());
      out.erase(t.bind1());
      out.erase(t.bind2());
      out.insert(t.wire());
      return out;
    }
    case AlgTerm::Kind::New: {
      out = alg_free_wires(t.body());
      out.erase(t.wire());
      return out;
    }
    case AlgTerm::Kind::Meas: {
      out = alg_free_wires(t.body(0));
      auto o1 = alg_free_wires(t.body(1));
      out.insert(o1.begin(), o1.end());
      out.insert(t.wire());
      return out;
    }
    case AlgTerm::Kind::UStep: {
      out = alg_free_wires(t.body());
      for (const auto& o : t.out_wires()) out.erase(o);
      out.insert(t.wires().begin(), t.wires().end());
      return out;
    }
  }
  return out;
}

std::set<VarName> alg_conts(const AlgTerm& t) {
  std::set<VarName> out;
  switch (t.kind()) {
    case AlgTerm::Kind::Apply:
      out.insert(t.cont());
      return out;
    default:
      for (std::size_t i = 0; i < t.body_count(); ++i) {
        auto c = alg_conts(t.body(i));
        out.insert(c.begin(), c.end());
      }
      return out;
  }
}

namespace {

void alg_alpha_print(const AlgTerm& t, std::vector<VarName>& bound, std::ostringstream& os) {
  auto lookup = [&](const VarName& x) -> std::string {
    for (std::size_t i = bound.size(); i-- > 0;)
      if (bound[i] == x) return "#" + std::to_string(bound.size() - 1 - i);
    return x;
  };
  switch (t.kind()) {
    case AlgTerm::Kind::Apply: {
      os << "(ap " << t.cont();
      for (const auto& w : t.wires()) os << " " << lookup(w);
      os << ")";
      return;
    }
    case AlgTerm::Kind::Split:
      os << "(sp " << lookup(t.wire()) << " ";
      bound.push_back(t.bind1());
      bound.push_back(t.bind2());
      alg_alpha_print(t.body(), bound, os);
      bound.pop_back();
      bound.pop_back();
      os << ")";
      return;
    case AlgTerm::Kind::New:
      os << "(new ";
      bound.push_back(t.wire());
      alg_alpha_print(t.body(), bound, os);
      bound.pop_back();
      os << ")";
      return;
    case AlgTerm::Kind::Meas:
      os << "(ms " << lookup(t.wire()) << " ";
      alg_alpha_print(t.body(0), bound, os);
      alg_alpha_print(t.body(1), bound, os);
      os << ")";
      return;
    case AlgTerm::Kind::UStep: {
      os << "(u " << t.unitary().show();
      for (const auto& w : t.wires()) os << " " << lookup(w);
      os << " .";
      for (const auto& o : t.out_wires()) bound.push_back(o);
      alg_alpha_print(t.body(), bound, os);
      for (std::size_t i = 0; i < t.out_wires().size(); ++i) bound.pop_back();
      os << ")";
      return;
    }
  }
}

}  // namespace

std::string alg_alpha_key(const AlgTerm& t) {
  std::ostringstream os;
  std::vector<VarName> bound;
  alg_alpha_print(t, bound, os);
  return os.str();
}

bool alg_alpha_eq(const AlgTerm& a, const AlgTerm& b) {
  return alg_alpha_key(a) == alg_alpha_key(b);
}

std::string AlgTerm::show() const {
  switch (kind()) {
    case Kind::Apply: {
      std::string s = "(apply " + cont() + " (";
      for (std::size_t i = 0; i < wires().size(); ++i) s += (i ? " " : "") + wires()[i];
      return s + "))";
    }
    case Kind::Split:
      return "(split " + wire() + " (" + bind1() + " " + bind2() + ") " + body().show() + ")";
    case Kind::New: return "(new " + wire() + " " + body().show() + ")";
    case Kind::Meas:
      return "(meas " + wire() + " " + body(0).show() + " " + body(1).show() + ")";
    case Kind::UStep: {
      std::string s = "(ustep " + unitary().show() + " ";
      auto names = [](const std::vector<VarName>& v) {
        if (v.size() == 1) return v[0];
        std::string o = "(";
        for (std::size_t i = 0; i < v.size(); ++i) o += (i ? " " : "") + v[i];
        return o + ")";
      };
      return s + names(wires()) + " " + names(out_wires()) + " " + body().show() + ")";
    }
  }
  return "?";
}

namespace {

QType fold_tensor(const std::vector<QType>& parts) {
  if (parts.empty()) throw type_error("empty wire tuple");
  QType t = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) t = QType::tensor(parts[i], t);
  return t;
}

// Right-nested peel of t into n components.
std::vector<QType> split_tensor(const QType& t, std::size_t n) {
  std::vector<QType> out;
  QType cur = t;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (cur.kind() != QType::Kind::Tensor)
      throw type_error("cannot split " + t.show() + " into " + std::to_string(n) + " wires");
    out.push_back(cur.left());
    cur = cur.right();
  }
  out.push_back(cur);
  return out;
}

struct AlgFail {
  std::string detail;
};

void check_binary(const QType& t) {
  if (!is_binary_type(t)) throw AlgFail{"non-binary type " + t.show()};
}

void check_rec(const Ctx& conts, const Ctx& wires, const AlgTerm& t) {
  switch (t.kind()) {
    case AlgTerm::Kind::Apply: {
      if (!conts.contains(t.cont())) throw AlgFail{"unknown continuation " + t.cont()};
      std::set<VarName> seen;
      std::vector<QType> parts;
      for (const auto& w : t.wires()) {
        if (!seen.insert(w).second) throw AlgFail{"wire " + w + " used twice"};
        if (!wires.contains(w)) throw AlgFail{"unknown wire " + w};
        parts.push_back(wires.at(w));
      }
      if (wires.size() != t.wires().size())
        throw AlgFail{"apply must consume every wire in scope"};
      QType tuple = fold_tensor(parts);
      if (tuple != conts.at(t.cont()))
        throw AlgFail{"continuation " + t.cont() + " expects " + conts.at(t.cont()).show() +
                      ", got " + tuple.show()};
      return;
    }
    case AlgTerm::Kind::Split: {
      if (!wires.contains(t.wire())) throw AlgFail{"unknown wire " + t.wire()};
      QType s = wires.at(t.wire());
      if (s.kind() != QType::Kind::Tensor)
        throw AlgFail{"split subject " + t.wire() + " has non-pair type " + s.show()};
      Ctx inner = wires;
      inner.erase(t.wire());
      if (inner.contains(t.bind1()) || inner.contains(t.bind2()) || t.bind1() == t.bind2())
        throw AlgFail{"split binders shadow live wires"};
      inner.bind(t.bind1(), s.left());
      inner.bind(t.bind2(), s.right());
      check_rec(conts, inner, t.body());
      return;
    }
    case AlgTerm::Kind::New: {
      Ctx inner = wires;
      if (inner.contains(t.wire())) throw AlgFail{"new binder shadows a live wire"};
      inner.bind(t.wire(), QType::qubit());
      check_rec(conts, inner, t.body());
      return;
    }
    case AlgTerm::Kind::Meas: {
      if (!wires.contains(t.wire())) throw AlgFail{"unknown wire " + t.wire()};
      if (wires.at(t.wire()) != QType::qubit())
        throw AlgFail{"meas subject " + t.wire() + " is not a qubit"};
      Ctx inner = wires;
      inner.erase(t.wire());
      check_rec(conts, inner, t.body(0));
      check_rec(conts, inner, t.body(1));
      return;
    }
    case AlgTerm::Kind::UStep: {
      std::set<VarName> seen;
      std::vector<QType> parts;
      for (const auto& w : t.wires()) {
        if (!seen.insert(w).second) throw AlgFail{"wire " + w + " used twice"};
        if (!wires.contains(w)) throw AlgFail{"unknown wire " + w};
        parts.push_back(wires.at(w));
      }
      const UnitaryExpr& u = t.unitary();
      check_binary(u.source());
      check_binary(u.target());
      if (fold_tensor(parts) != u.source())
        throw AlgFail{"unitary expects " + u.source().show()};
      std::vector<QType> outs = split_tensor(u.target(), t.out_wires().size());
      Ctx inner = wires;
      for (const auto& w : t.wires()) inner.erase(w);
      for (std::size_t i = 0; i < outs.size(); ++i) {
        if (inner.contains(t.out_wires()[i])) throw AlgFail{"output wire shadows a live wire"};
        inner.bind(t.out_wires()[i], outs[i]);
      }
      check_rec(conts, inner, t.body());
      return;
    }
  }
}

}  // namespace

AlgCheckResult check_alg(const Ctx& conts, const Ctx& wires, const AlgTerm& t) {
  try {
    for (const auto& [x, ty] : conts) check_binary(ty);
    for (const auto& [x, ty] : wires) check_binary(ty);
    check_rec(conts, wires, t);
    return {true, ""};
  } catch (const AlgFail& f) {
    return {false, f.detail};
  }
}

namespace {

// Renames free wire `from` to `to` throughout (capture is impossible when
// `to` is globally fresh, which every caller guarantees).
AlgTerm rename_wire(const AlgTerm& t, const VarName& from, const VarName& to) {
  auto ren = [&](const VarName& w) { return w == from ? to : w; };
  switch (t.kind()) {
    case AlgTerm::Kind::Apply: {
      std::vector<VarName> ws;
      for (const auto& w : t.wires()) ws.push_back(ren(w));
      return AlgTerm::apply(t.cont(), std::move(ws));
    }
    case AlgTerm::Kind::Split: {
      if (t.bind1() == from || t.bind2() == from)
        return AlgTerm::split(ren(t.wire()), t.bind1(), t.bind2(), t.body());
      return AlgTerm::split(ren(t.wire()), t.bind1(), t.bind2(),
                            rename_wire(t.body(), from, to));
    }
    case AlgTerm::Kind::New: {
      if (t.wire() == from) return t;
      return AlgTerm::make_new(t.wire(), rename_wire(t.body(), from, to));
    }
    case AlgTerm::Kind::Meas:
      return AlgTerm::meas(ren(t.wire()), rename_wire(t.body(0), from, to),
                           rename_wire(t.body(1), from, to));
    case AlgTerm::Kind::UStep: {
      std::vector<VarName> ins;
      for (const auto& w : t.wires()) ins.push_back(ren(w));
      bool shadowed = false;
      for (const auto& o : t.out_wires())
        if (o == from) shadowed = true;
      return AlgTerm::ustep(t.unitary(), std::move(ins), t.out_wires(),
                            shadowed ? t.body() : rename_wire(t.body(), from, to));
    }
  }
  throw type_error("bad AlgTerm");
}

// Freshens every wire binder so later splicing cannot capture.
AlgTerm freshen_binders(const AlgTerm& t) {
  switch (t.kind()) {
    case AlgTerm::Kind::Apply:
      return t;
    case AlgTerm::Kind::Split: {
      VarName f1 = fresh_var("a");
      VarName f2 = fresh_var("a");
      AlgTerm body = rename_wire(rename_wire(t.body(), t.bind1(), f1), t.bind2(), f2);
      return AlgTerm::split(t.wire(), f1, f2, freshen_binders(body));
    }
    case AlgTerm::Kind::New: {
      VarName f = fresh_var("a");
      return AlgTerm::make_new(f, freshen_binders(rename_wire(t.body(), t.wire(), f)));
    }
    case AlgTerm::Kind::Meas:
      return AlgTerm::meas(t.wire(), freshen_binders(t.body(0)), freshen_binders(t.body(1)));
    case AlgTerm::Kind::UStep: {
      std::vector<VarName> fresh_outs;
      AlgTerm body = t.body();
      for (const auto& o : t.out_wires()) {
        VarName f = fresh_var("a");
        body = rename_wire(body, o, f);
        fresh_outs.push_back(f);
      }
      return AlgTerm::ustep(t.unitary(), t.wires(), std::move(fresh_outs),
                            freshen_binders(body));
    }
  }
  throw type_error("bad AlgTerm");
}

// Binds parameter wire `param` (of type param_type) of u to the wire tuple
// `args` (with types `arg_types`), pushing the tuple through u.
AlgTerm bind_param(const AlgTerm& u, const VarName& param, const QType& param_type,
                   const std::vector<VarName>& args, const std::vector<QType>& arg_types) {
  if (args.size() == 1) return rename_wire(u, param, args[0]);
  switch (u.kind()) {
    case AlgTerm::Kind::Apply: {
      std::vector<VarName> ws;
      for (const auto& w : u.wires()) {
        if (w == param)
          ws.insert(ws.end(), args.begin(), args.end());
        else
          ws.push_back(w);
      }
      return AlgTerm::apply(u.cont(), std::move(ws));
    }
    case AlgTerm::Kind::Split: {
      if (u.wire() == param) {
        // param : σ1 ⊗ σ2; find the prefix of args forming σ1.
        for (std::size_t k = 1; k < args.size(); ++k) {
          std::vector<QType> lp(arg_types.begin(), arg_types.begin() + k);
          std::vector<QType> rp(arg_types.begin() + k, arg_types.end());
          if (fold_tensor(lp) == param_type.left() && fold_tensor(rp) == param_type.right()) {
            std::vector<VarName> la(args.begin(), args.begin() + k);
            std::vector<VarName> ra(args.begin() + k, args.end());
            AlgTerm body = bind_param(u.body(), u.bind1(), param_type.left(), la, lp);
            return bind_param(body, u.bind2(), param_type.right(), ra, rp);
          }
        }
        throw type_error("bind_param: tuple does not split along the pair");
      }
      return AlgTerm::split(u.wire(), u.bind1(), u.bind2(),
                            bind_param(u.body(), param, param_type, args, arg_types));
    }
    case AlgTerm::Kind::New:
      return AlgTerm::make_new(u.wire(), bind_param(u.body(), param, param_type, args, arg_types));
    case AlgTerm::Kind::Meas:
      // param has a tensor type here, so it cannot be the measured qubit.
      return AlgTerm::meas(u.wire(), bind_param(u.body(0), param, param_type, args, arg_types),
                           bind_param(u.body(1), param, param_type, args, arg_types));
    case AlgTerm::Kind::UStep: {
      bool hit = false;
      std::vector<VarName> ins;
      for (const auto& w : u.wires()) {
        if (w == param) {
          hit = true;
          ins.insert(ins.end(), args.begin(), args.end());
        } else {
          ins.push_back(w);
        }
      }
      if (hit) return AlgTerm::ustep(u.unitary(), std::move(ins), u.out_wires(), u.body());
      return AlgTerm::ustep(u.unitary(), std::move(ins), u.out_wires(),
                            bind_param(u.body(), param, param_type, args, arg_types));
    }
  }
  throw type_error("bad AlgTerm");
}

AlgTerm subst_rec(const AlgTerm& t, const VarName& x, const VarName& param, const AlgTerm& u,
                  Ctx wires, const QType& param_type) {
  switch (t.kind()) {
    case AlgTerm::Kind::Apply: {
      if (t.cont() != x) return t;
      std::vector<QType> types;
      for (const auto& w : t.wires()) types.push_back(wires.at(w));
      return bind_param(freshen_binders(u), param, param_type, t.wires(), types);
    }
    case AlgTerm::Kind::Split: {
      QType s = wires.at(t.wire());
      Ctx inner = wires;
      inner.erase(t.wire());
      inner.bind(t.bind1(), s.left());
      inner.bind(t.bind2(), s.right());
      return AlgTerm::split(t.wire(), t.bind1(), t.bind2(),
                            subst_rec(t.body(), x, param, u, std::move(inner), param_type));
    }
    case AlgTerm::Kind::New: {
      Ctx inner = wires;
      inner.bind(t.wire(), QType::qubit());
      return AlgTerm::make_new(t.wire(),
                               subst_rec(t.body(), x, param, u, std::move(inner), param_type));
    }
    case AlgTerm::Kind::Meas: {
      Ctx inner = wires;
      inner.erase(t.wire());
      return AlgTerm::meas(t.wire(), subst_rec(t.body(0), x, param, u, inner, param_type),
                           subst_rec(t.body(1), x, param, u, inner, param_type));
    }
    case AlgTerm::Kind::UStep: {
      Ctx inner = wires;
      for (const auto& w : t.wires()) inner.erase(w);
      std::vector<QType> outs = split_tensor(t.unitary().target(), t.out_wires().size());
      for (std::size_t i = 0; i < outs.size(); ++i) inner.bind(t.out_wires()[i], outs[i]);
      return AlgTerm::ustep(t.unitary(), t.wires(), t.out_wires(),
                            subst_rec(t.body(), x, param, u, std::move(inner), param_type));
    }
  }
  throw type_error("bad AlgTerm");
}

}  // namespace

AlgTerm alg_subst(const AlgTerm& t, const VarName& x, const VarName& param, const AlgTerm& u,
                  const Ctx& wire_types_t, const QType& param_type) {
  return subst_rec(t, x, param, u, wire_types_t, param_type);
}

std::vector<AlgAxiom> alg_axioms() {
  return {
      {"A", "X(a, meas(a, x, y)) = meas(a, y, x)"},
      {"B", "meas(a, U(b, x(b)), V(b, y(b))) = D(U,V)((a,b), meas(a, x(b), y(b)))"},
      {"C", "U(a, discard a in x) = discard a in x"},
      {"D", "new(a, meas(a, x, y)) = x"},
      {"E", "new(a, D(U,V)((a,b), x(a,b))) = U(b, new(a, x(a,b)))"},
      {"F", "SWAP((a,b), x(a,b)) = x(b,a)"},
      {"G", "I(a, x(a)) = x(a)"},
      {"H", "(VU)(a, x(a)) = V(a, U(a, x(a)))"},
      {"I", "(U⊗V)((a,b), x(a,b)) = U(a, V(b, x(a,b)))"},
      {"J", "meas/meas commute"},
      {"K", "new/new commute"},
      {"L", "new/meas commute"},
      {"M", "split/split commute"},
      {"N", "split/new commute"},
      {"O", "split/meas commute"},
  };
}

QExp to_qexp(const AlgTerm& t, const VarName& x, const Ctx& wires) {
  auto conts = alg_conts(t);
  conts.erase(x);
  if (!conts.empty())
    throw type_error("to_qexp: term uses continuations besides " + x);
  switch (t.kind()) {
    case AlgTerm::Kind::Apply: {
      QExp e = QExp::var(t.wires().back());
      for (std::size_t i = t.wires().size() - 1; i-- > 0;)
        e = QExp::pair(QExp::var(t.wires()[i]), std::move(e));
      return e;
    }
    case AlgTerm::Kind::Split: {
      Ctx inner = wires;
      QType s = wires.at(t.wire());
      inner.erase(t.wire());
      inner.bind(t.bind1(), s.left());
      inner.bind(t.bind2(), s.right());
      return QExp::let_pair(t.bind1(), t.bind2(), QExp::var(t.wire()),
                            to_qexp(t.body(), x, inner));
    }
    case AlgTerm::Kind::New: {
      Ctx inner = wires;
      inner.bind(t.wire(), QType::qubit());
      return QExp::let(t.wire(), init_qubit(false), to_qexp(t.body(), x, inner));
    }
    case AlgTerm::Kind::Meas: {
      Ctx inner = wires;
      inner.erase(t.wire());
      std::vector<QExp> branches = {to_qexp(t.body(0), x, inner), to_qexp(t.body(1), x, inner)};
      return QExp::let_bang(QExp::var(t.wire()), FinType::boolean(), std::move(branches));
    }
    case AlgTerm::Kind::UStep: {
      QExp tuple = QExp::var(t.wires().back());
      for (std::size_t i = t.wires().size() - 1; i-- > 0;)
        tuple = QExp::pair(QExp::var(t.wires()[i]), std::move(tuple));
      QExp applied = QExp::uapp(t.unitary(), std::move(tuple));
      std::vector<QType> outs = split_tensor(t.unitary().target(), t.out_wires().size());
      Ctx inner = wires;
      for (const auto& w : t.wires()) inner.erase(w);
      for (std::size_t i = 0; i < outs.size(); ++i) inner.bind(t.out_wires()[i], outs[i]);
      QExp body = to_qexp(t.body(), x, inner);
      // let (o1, (o2, ...)) := applied in body, peeling one wire at a time.
      const auto& ow = t.out_wires();
      std::function<QExp(QExp, std::size_t)> peel = [&](QExp scrut, std::size_t i) -> QExp {
        if (i + 1 == ow.size()) return QExp::let(ow[i], std::move(scrut), body);
        if (i + 2 == ow.size()) return QExp::let_pair(ow[i], ow[i + 1], std::move(scrut), body);
        VarName rest = fresh_var("p");
        return QExp::let_pair(ow[i], rest, std::move(scrut), peel(QExp::var(rest), i + 1));
      };
      return peel(std::move(applied), 0);
    }
  }
  throw type_error("bad AlgTerm");
}

namespace {

QType infer_type(const Ctx& ctx, const QExp& e) {
  TypingResult r = infer(ctx, e);
  if (!r) throw type_error("to_alg: ill-typed subterm: " + r.show());
  if (!is_binary_type(r.type()))
    throw type_error("to_alg: non-binary type " + r.type().show());
  return r.type();
}

}  // namespace

AlgTerm to_alg(const QExp& e, const Ctx& ctx, const VarName& result) {
  switch (e.kind()) {
    case QExp::Kind::Var:
      return AlgTerm::apply(result, {e.var_name()});
    case QExp::Kind::Let: {
      Ctx c1 = ctx.restricted(free_vars(e.child(0)));
      QType s = infer_type(c1, e.child(0));
      Ctx c2 = ctx;
      for (const auto& [k, v] : c1) c2.erase(k);
      c2.bind(e.var_name(), s);
      VarName y = fresh_var("k");
      AlgTerm t1 = to_alg(e.child(0), c1, y);
      AlgTerm t2 = to_alg(e.child(1), c2, result);
      return alg_subst(t1, y, e.var_name(), t2, c1, s);
    }
    case QExp::Kind::Pair: {
      Ctx c1 = ctx.restricted(free_vars(e.child(0)));
      Ctx c2 = ctx.restricted(free_vars(e.child(1)));
      QType s1 = infer_type(c1, e.child(0));
      QType s2 = infer_type(c2, e.child(1));
      VarName y1 = fresh_var("k"), y2 = fresh_var("k");
      VarName x1 = fresh_var("a"), x2 = fresh_var("a");
      AlgTerm innermost = AlgTerm::apply(result, {x1, x2});
      AlgTerm t2 = to_alg(e.child(1), c2, y2);
      AlgTerm s2bound = alg_subst(t2, y2, x2, innermost, c2, s2);
      AlgTerm t1 = to_alg(e.child(0), c1, y1);
      return alg_subst(t1, y1, x1, s2bound, c1, s1);
    }
    case QExp::Kind::LetPair: {
      Ctx c1 = ctx.restricted(free_vars(e.child(0)));
      QType s = infer_type(c1, e.child(0));
      Ctx c2 = ctx;
      for (const auto& [k, v] : c1) c2.erase(k);
      c2.bind(e.var_name(), s.left());
      c2.bind(e.var_name2(), s.right());
      VarName y = fresh_var("k");
      VarName xw = fresh_var("a");
      AlgTerm body = to_alg(e.child(1), c2, result);
      AlgTerm splitter = AlgTerm::split(xw, e.var_name(), e.var_name2(), std::move(body));
      AlgTerm t1 = to_alg(e.child(0), c1, y);
      return alg_subst(t1, y, xw, splitter, c1, s);
    }
    case QExp::Kind::Put: {
      if (e.put_base() != FinType::boolean())
        throw type_error("to_alg: put outside the boolean fragment");
      VarName a = fresh_var("a");
      if (e.put_value() == 0)
        return AlgTerm::make_new(a, AlgTerm::apply(result, {a}));
      VarName b = fresh_var("a");
      return AlgTerm::make_new(
          a, AlgTerm::ustep(prim_x(), {a}, {b}, AlgTerm::apply(result, {b})));
    }
    case QExp::Kind::LetBang: {
      if (e.bang_base() != FinType::boolean())
        throw type_error("to_alg: letbang outside the boolean fragment");
      Ctx c1 = ctx.restricted(free_vars(e.child(0)));
      QType s = infer_type(c1, e.child(0));
      Ctx c2 = ctx;
      for (const auto& [k, v] : c1) c2.erase(k);
      VarName y = fresh_var("k");
      VarName q = fresh_var("a");
      AlgTerm m = AlgTerm::meas(q, to_alg(e.child(1), c2, result),
                                to_alg(e.child(2), c2, result));
      AlgTerm t1 = to_alg(e.child(0), c1, y);
      return alg_subst(t1, y, q, m, c1, s);
    }
    case QExp::Kind::UApp: {
      QType s = infer_type(ctx, e.child(0));
      VarName y = fresh_var("k");
      VarName a = fresh_var("a");
      VarName b = fresh_var("a");
      AlgTerm step =
          AlgTerm::ustep(e.unitary(), {a}, {b}, AlgTerm::apply(result, {b}));
      AlgTerm t1 = to_alg(e.child(0), ctx, y);
      return alg_subst(t1, y, a, step, ctx, s);
    }
    case QExp::Kind::Inj:
    case QExp::Kind::Case:
      throw type_error("to_alg: sum constructors are outside the binary fragment");
  }
  throw type_error("bad QExp");
}

}  // namespace qeq

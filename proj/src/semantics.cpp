#include "qeq/semantics.hpp"

#include <algorithm>

namespace qeq {

WireOrder canonical_order(const Ctx& ctx) {
  WireOrder out;
  for (const auto& [x, t] : ctx) out.emplace_back(x, t);
  return out;
}

QType order_type(const WireOrder& order) {
  if (order.empty()) return QType::unit();
  QType t = order.back().second;
  for (std::size_t i = order.size() - 1; i-- > 0;) t = QType::tensor(order[i].second, t);
  return t;
}

std::size_t order_dim(const WireOrder& order) {
  std::size_t d = 1;
  for (const auto& [x, t] : order) d *= t.dim();
  return d;
}

ComplexMatrix denote_unitary(const UnitaryExpr& u) {
  switch (u.kind()) {
    case UnitaryExpr::Kind::Id:
      return ComplexMatrix::identity(u.source().dim());
    case UnitaryExpr::Kind::Compose:
      return denote_unitary(u.child(0)) * denote_unitary(u.child(1));
    case UnitaryExpr::Kind::Adjoint:
      return denote_unitary(u.child(0)).adjoint();
    case UnitaryExpr::Kind::Tensor:
      return kron(denote_unitary(u.child(0)), denote_unitary(u.child(1)));
    case UnitaryExpr::Kind::DirectSum:
      return direct_sum(denote_unitary(u.child(0)), denote_unitary(u.child(1)));
    case UnitaryExpr::Kind::Primitive:
      return u.prim_matrix();
    case UnitaryExpr::Kind::FromEquiv:
      return ComplexMatrix::permutation(equiv_basis_bijection(u.equiv(), u.assignment()));
  }
  throw type_error("bad UnitaryExpr");
}

ComplexMatrix delta(const FinType& alpha, std::size_t a) {
  if (a >= alpha.card()) throw type_error("delta: element index out of range");
  return ComplexMatrix::unit(alpha.card(), a, a);
}

ComplexMatrix distr_matrix(const FinType& a1, const FinType& a2, std::size_t beta_dim) {
  FinType sum = FinType::sum(a1, a2);
  FinType beta = FinType::fin(beta_dim);
  FinType src = FinType::prod(sum, beta);
  FinType dst = FinType::sum(FinType::prod(a1, beta), FinType::prod(a2, beta));
  std::vector<std::size_t> perm(src.card());
  for (std::size_t i = 0; i < src.card(); ++i) {
    auto [s, b] = src.prod_split(i);
    auto [which, inner] = sum.sum_split(s);
    if (which == 1)
      perm[i] = dst.sum_inl(FinType::prod(a1, beta).prod_index(inner, b));
    else
      perm[i] = dst.sum_inr(FinType::prod(a2, beta).prod_index(inner, b));
  }
  return ComplexMatrix::permutation(perm);
}

namespace {

// Basis permutation sending the `from` layout to the `to` layout.
std::vector<std::size_t> layout_permutation(const WireOrder& from, const WireOrder& to) {
  if (from.size() != to.size()) throw type_error("context permutation: wire count mismatch");
  std::vector<std::size_t> slot(to.size());
  std::vector<bool> used(from.size(), false);
  for (std::size_t i = 0; i < to.size(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < from.size(); ++j) {
      if (!used[j] && from[j].first == to[i].first && from[j].second == to[i].second) {
        slot[i] = j;
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) throw type_error("context permutation: wire " + to[i].first + " missing");
  }
  std::size_t d = order_dim(from);
  std::vector<std::size_t> perm(d);
  for (std::size_t idx = 0; idx < d; ++idx) {
    // Decompose idx into digits per `from` (left-major), reassemble per `to`.
    std::vector<std::size_t> digits(from.size());
    std::size_t rem = idx;
    for (std::size_t j = from.size(); j-- > 0;) {
      std::size_t dj = from[j].second.dim();
      digits[j] = rem % dj;
      rem /= dj;
    }
    std::size_t out = 0;
    for (std::size_t i = 0; i < to.size(); ++i) out = out * to[i].second.dim() + digits[slot[i]];
    perm[idx] = out;
  }
  return perm;
}

DenoteObserver g_observer;

Superoperator denote_rec(const WireOrder& order, const QExp& e);

// Splits `order` into the wires free in lhs and the rest (preserving
// relative order), with the permutation superoperator from `order` to the
// concatenated layout.
struct SplitPlan {
  WireOrder left, right;
  Superoperator perm;
};

SplitPlan split_order(const WireOrder& order, const std::set<VarName>& left_names) {
  WireOrder l, r;
  for (const auto& w : order) {
    if (left_names.count(w.first))
      l.push_back(w);
    else
      r.push_back(w);
  }
  WireOrder target = l;
  target.insert(target.end(), r.begin(), r.end());
  return SplitPlan{l, r, context_permutation(order, target)};
}

// K = <a| ⊗ I_rest : extracts diagonal block a of the leading Lower factor.
Superoperator block_extract(const FinType& alpha, std::size_t a, const QType& rest) {
  ComplexMatrix bra(1, alpha.card());
  bra.at(0, a) = 1.0;
  ComplexMatrix k = kron(bra, ComplexMatrix::identity(rest.dim()));
  return superop_from_kraus(k, QType::tensor(QType::lower(alpha), rest), rest);
}

// K = P_i ⊗ I_rest : extracts the i-th block of a leading sum factor.
Superoperator sum_block_extract(const QType& s1, const QType& s2, int which, const QType& rest) {
  QType si = which == 1 ? s1 : s2;
  std::size_t d = s1.dim() + s2.dim();
  ComplexMatrix p(si.dim(), d);
  std::size_t off = which == 1 ? 0 : s1.dim();
  for (std::size_t i = 0; i < si.dim(); ++i) p.at(i, off + i) = 1.0;
  ComplexMatrix k = kron(p, ComplexMatrix::identity(rest.dim()));
  return superop_from_kraus(k, QType::tensor(QType::oplus(s1, s2), rest),
                            QType::tensor(si, rest));
}

// rho ↦ ι_i rho ι_i†.
Superoperator inj_superop(const QType& s1, const QType& s2, int which) {
  QType si = which == 1 ? s1 : s2;
  QType sum = QType::oplus(s1, s2);
  ComplexMatrix k(sum.dim(), si.dim());
  std::size_t off = which == 1 ? 0 : s1.dim();
  for (std::size_t i = 0; i < si.dim(); ++i) k.at(off + i, i) = 1.0;
  return superop_from_kraus(k, si, sum);
}

// Result type of a well-typed expression given the wire types in scope.
QType result_type(const WireOrder& order, const QExp& e) {
  Ctx ctx;
  for (const auto& [x, t] : order) ctx.bind(x, t);
  TypingResult r = infer(ctx, e);
  if (!r) throw type_error("denote: ill-typed expression: " + r.show());
  return r.type();
}

Superoperator denote_rec(const WireOrder& order, const QExp& e) {
  switch (e.kind()) {
    case QExp::Kind::Var: {
      if (order.size() != 1 || order[0].first != e.var_name())
        throw type_error("denote: context mismatch at variable " + e.var_name());
      return superop_identity(order[0].second);
    }
    case QExp::Kind::Let: {
      auto plan = split_order(order, free_vars(e.child(0)));
      Superoperator f = denote_rec(plan.left, e.child(0));
      Superoperator step = superop_tensor(f, superop_identity(order_type(plan.right)));
      WireOrder inner = plan.right;
      inner.insert(inner.begin(), {e.var_name(), f.dst()});
      Superoperator body = denote_rec(inner, e.child(1));
      return superop_compose(body, superop_compose(step, plan.perm));
    }
    case QExp::Kind::Pair: {
      auto plan = split_order(order, free_vars(e.child(0)));
      Superoperator f = denote_rec(plan.left, e.child(0));
      Superoperator g = denote_rec(plan.right, e.child(1));
      return superop_compose(superop_tensor(f, g), plan.perm);
    }
    case QExp::Kind::LetPair: {
      auto plan = split_order(order, free_vars(e.child(0)));
      Superoperator f = denote_rec(plan.left, e.child(0));
      if (f.dst().kind() != QType::Kind::Tensor)
        throw type_error("denote: letpair scrutinee is not a tensor");
      Superoperator step = superop_tensor(f, superop_identity(order_type(plan.right)));
      WireOrder inner = plan.right;
      inner.insert(inner.begin(), {e.var_name2(), f.dst().right()});
      inner.insert(inner.begin(), {e.var_name(), f.dst().left()});
      Superoperator body = denote_rec(inner, e.child(1));
      return superop_compose(body, superop_compose(step, plan.perm));
    }
    case QExp::Kind::Inj: {
      Superoperator f = denote_rec(order, e.child(0));
      const QType& ann = *e.inj_ann();
      return superop_compose(inj_superop(ann.left(), ann.right(), e.inj_which()), f);
    }
    case QExp::Kind::Case: {
      auto plan = split_order(order, free_vars(e.child(0)));
      Superoperator f = denote_rec(plan.left, e.child(0));
      if (f.dst().kind() != QType::Kind::Oplus)
        throw type_error("denote: case scrutinee is not a sum");
      QType s1 = f.dst().left(), s2 = f.dst().right();
      QType rest = order_type(plan.right);
      Superoperator step = superop_tensor(f, superop_identity(rest));
      Superoperator pre = superop_compose(step, plan.perm);
      std::vector<Superoperator> arms;
      for (int which = 1; which <= 2; ++which) {
        WireOrder inner = plan.right;
        const VarName& binder = which == 1 ? e.var_name() : e.var_name2();
        inner.insert(inner.begin(), {binder, which == 1 ? s1 : s2});
        Superoperator extract = sum_block_extract(s1, s2, which, rest);
        Superoperator branch = denote_rec(inner, e.child(which));
        arms.push_back(superop_compose(branch, superop_compose(extract, pre)));
      }
      return superop_sum(arms);
    }
    case QExp::Kind::Put: {
      if (!order.empty()) throw type_error("denote: put under a non-empty context");
      Superoperator s(QType::unit(), QType::lower(e.put_base()));
      s.image(0, 0) = delta(e.put_base(), e.put_value());
      return s;
    }
    case QExp::Kind::LetBang: {
      auto plan = split_order(order, free_vars(e.child(0)));
      Superoperator f = denote_rec(plan.left, e.child(0));
      if (f.dst().kind() != QType::Kind::Lower)
        throw type_error("denote: letbang scrutinee is not classical");
      FinType alpha = f.dst().base();
      QType rest = order_type(plan.right);
      Superoperator step = superop_tensor(f, superop_identity(rest));
      Superoperator pre = superop_compose(step, plan.perm);
      if (alpha.card() == 0) {
        return superop_zero(order_type(order),
                            e.bang_ann() ? *e.bang_ann() : QType::unit());
      }
      std::vector<Superoperator> arms;
      for (std::size_t a = 0; a < alpha.card(); ++a) {
        Superoperator extract = block_extract(alpha, a, rest);
        Superoperator branch = denote_rec(plan.right, e.child(1 + a));
        arms.push_back(superop_compose(branch, superop_compose(extract, pre)));
      }
      return superop_sum(arms);
    }
    case QExp::Kind::UApp: {
      Superoperator f = denote_rec(order, e.child(0));
      ComplexMatrix u = denote_unitary(e.unitary());
      Superoperator step = superop_from_unitary(u, e.unitary().source(), e.unitary().target());
      return superop_compose(step, f);
    }
  }
  throw type_error("bad QExp");
}

}  // namespace

Superoperator context_permutation(const WireOrder& from, const WireOrder& to) {
  ComplexMatrix p = ComplexMatrix::permutation(layout_permutation(from, to));
  return superop_from_unitary(p, order_type(from), order_type(to));
}

Superoperator denote(const WireOrder& order, const QExp& e) {
  // Reject ill-typed input before evaluation.
  (void)result_type(order, e);
  Superoperator s = denote_rec(order, e);
  if (g_observer) g_observer(s);
  return s;
}

Superoperator denote(const Ctx& ctx, const QExp& e) { return denote(canonical_order(ctx), e); }

bool equiv_check(const QExp& e1, const QExp& e2, const Ctx& ctx, double tol) {
  return equiv_report(e1, e2, ctx, tol).equal;
}

EquivReport equiv_report(const QExp& e1, const QExp& e2, const Ctx& ctx, double tol) {
  TypingResult r1 = infer(ctx, e1);
  TypingResult r2 = infer(ctx, e2);
  if (!r1 || !r2)
    throw type_error("equiv_check on ill-typed term: " + (r1 ? r2.show() : r1.show()));
  if (r1.type() != r2.type())
    throw type_error("equiv_check: types differ: " + r1.type().show() + " vs " +
                     r2.type().show());
  Superoperator s1 = denote(ctx, e1);
  Superoperator s2 = denote(ctx, e2);
  EquivReport rep;
  rep.diff = superop_max_diff(s1, s2);
  rep.max_diff = rep.diff.value;
  rep.equal = rep.max_diff <= tol;
  return rep;
}

void set_denote_observer(DenoteObserver obs) { g_observer = std::move(obs); }
void clear_denote_observer() { g_observer = DenoteObserver(); }

}  // namespace qeq

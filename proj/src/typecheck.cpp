#include "qeq/typecheck.hpp"

namespace qeq {

std::string type_err_name(TypeErr e) {
  switch (e) {
    case TypeErr::UnboundVar: return "UnboundVar";
    case TypeErr::DuplicateUse: return "DuplicateUse";
    case TypeErr::UnusedVar: return "UnusedVar";
    case TypeErr::TypeMismatch: return "TypeMismatch";
    case TypeErr::ContextOverlap: return "ContextOverlap";
    case TypeErr::BranchMismatch: return "BranchMismatch";
  }
  return "?";
}

const QType& TypingResult::type() const {
  if (!type_) throw type_error("type() on typing error: " + detail_);
  return *type_;
}

TypeErr TypingResult::error_kind() const {
  if (type_) throw type_error("error_kind() on successful typing");
  return kind_;
}

std::string TypingResult::show() const {
  if (type_) return "OK " + type_->show();
  return type_err_name(kind_) + ": " + detail_;
}

std::pair<Ctx, Ctx> split_context(const Ctx& ctx, const std::set<VarName>& fv1,
                                  const std::set<VarName>& fv2) {
  for (const auto& x : fv1)
    if (fv2.count(x)) throw type_error("split: variable " + x + " required on both sides");
  Ctx left = ctx.restricted(fv1);
  Ctx right = ctx.restricted(fv2);
  if (left.size() + right.size() != ctx.size())
    throw type_error("split: context variables left unconsumed");
  return {std::move(left), std::move(right)};
}

namespace {

struct CheckFail {
  TypeErr kind;
  std::string detail;
};

// Splits ctx between the free variables of a bound expression and a body,
// reporting precise linearity failures.
std::pair<Ctx, Ctx> split_or_fail(const Ctx& ctx, const QExp& lhs, const std::set<VarName>& fv2,
                                  const std::set<VarName>& binders) {
  auto fv1 = free_vars(lhs);
  for (const auto& x : fv1)
    if (fv2.count(x)) throw CheckFail{TypeErr::DuplicateUse, "variable " + x + " used twice"};
  for (const auto& x : fv1)
    if (!ctx.contains(x)) throw CheckFail{TypeErr::UnboundVar, "variable " + x + " not in scope"};
  for (const auto& x : fv2)
    if (!ctx.contains(x)) throw CheckFail{TypeErr::UnboundVar, "variable " + x + " not in scope"};
  for (const auto& [x, t] : ctx)
    if (!fv1.count(x) && !fv2.count(x) && !binders.count(x))
      throw CheckFail{TypeErr::UnusedVar, "variable " + x + " never used"};
  return {ctx.restricted(fv1), ctx.restricted(fv2)};
}

void check_binder(const Ctx& ctx, const VarName& x) {
  if (ctx.contains(x))
    throw CheckFail{TypeErr::ContextOverlap, "binder " + x + " collides with context variable"};
}

QType check(const Ctx& ctx, const QExp& e);

// Body context for a binder: the body's free vars minus the binder names,
// restricted from ctx, plus the binder bindings.
QType check_body(const Ctx& ctx, const QExp& body, const std::vector<std::pair<VarName, QType>>& binders) {
  Ctx inner = ctx;
  for (const auto& [x, t] : binders) {
    check_binder(inner, x);
    inner.bind(x, t);
  }
  return check(inner, body);
}

QType check(const Ctx& ctx, const QExp& e) {
  switch (e.kind()) {
    case QExp::Kind::Var: {
      if (!ctx.contains(e.var_name()))
        throw CheckFail{TypeErr::UnboundVar, "variable " + e.var_name() + " not in scope"};
      if (ctx.size() != 1)
        for (const auto& [x, t] : ctx)
          if (x != e.var_name())
            throw CheckFail{TypeErr::UnusedVar, "variable " + x + " never used"};
      return ctx.at(e.var_name());
    }
    case QExp::Kind::Let: {
      std::set<VarName> fv2 = free_vars(e.child(1));
      fv2.erase(e.var_name());
      auto [g1, g2] = split_or_fail(ctx, e.child(0), fv2, {e.var_name()});
      QType s = check(g1, e.child(0));
      return check_body(g2, e.child(1), {{e.var_name(), s}});
    }
    case QExp::Kind::Pair: {
      auto [g1, g2] = split_or_fail(ctx, e.child(0), free_vars(e.child(1)), {});
      return QType::tensor(check(g1, e.child(0)), check(g2, e.child(1)));
    }
    case QExp::Kind::LetPair: {
      if (e.var_name() == e.var_name2())
        throw CheckFail{TypeErr::ContextOverlap,
                        "letpair binds " + e.var_name() + " twice"};
      std::set<VarName> fv2 = free_vars(e.child(1));
      fv2.erase(e.var_name());
      fv2.erase(e.var_name2());
      auto [g1, g2] = split_or_fail(ctx, e.child(0), fv2, {e.var_name(), e.var_name2()});
      QType s = check(g1, e.child(0));
      if (s.kind() != QType::Kind::Tensor)
        throw CheckFail{TypeErr::TypeMismatch, "letpair scrutinee has type " + s.show()};
      return check_body(g2, e.child(1),
                        {{e.var_name(), s.left()}, {e.var_name2(), s.right()}});
    }
    case QExp::Kind::Inj: {
      if (!e.inj_ann())
        throw CheckFail{TypeErr::TypeMismatch, "inj without a sum type annotation"};
      const QType& ann = *e.inj_ann();
      QType inner = check(ctx, e.child(0));
      QType expect = e.inj_which() == 1 ? ann.left() : ann.right();
      if (inner != expect)
        throw CheckFail{TypeErr::TypeMismatch,
                        "inj payload " + inner.show() + " vs annotation " + expect.show()};
      return ann;
    }
    case QExp::Kind::Case: {
      std::set<VarName> fvb = free_vars(e.child(1));
      fvb.erase(e.var_name());
      {
        std::set<VarName> fvb2 = free_vars(e.child(2));
        fvb2.erase(e.var_name2());
        if (fvb != fvb2)
          throw CheckFail{TypeErr::BranchMismatch,
                          "case branches consume different variables"};
      }
      auto [g1, g2] = split_or_fail(ctx, e.child(0), fvb, {e.var_name(), e.var_name2()});
      QType s = check(g1, e.child(0));
      if (s.kind() != QType::Kind::Oplus)
        throw CheckFail{TypeErr::TypeMismatch, "case scrutinee has type " + s.show()};
      QType t1 = check_body(g2, e.child(1), {{e.var_name(), s.left()}});
      QType t2 = check_body(g2, e.child(2), {{e.var_name2(), s.right()}});
      if (t1 != t2)
        throw CheckFail{TypeErr::BranchMismatch,
                        "case branches type " + t1.show() + " vs " + t2.show()};
      return t1;
    }
    case QExp::Kind::Put: {
      if (!ctx.empty())
        throw CheckFail{TypeErr::UnusedVar, "put in a non-empty context " + ctx.show()};
      return QType::lower(e.put_base());
    }
    case QExp::Kind::LetBang: {
      std::set<VarName> fv2;
      if (e.child_count() == 1) {
        // Empty family over Void: the absent branches consume whatever the
        // scrutinee leaves behind, vacuously.
        auto fv1 = free_vars(e.child(0));
        for (const auto& [x, t] : ctx)
          if (!fv1.count(x)) fv2.insert(x);
      }
      for (std::size_t i = 1; i < e.child_count(); ++i) {
        auto fv = free_vars(e.child(i));
        if (i == 1)
          fv2 = fv;
        else if (fv != fv2)
          throw CheckFail{TypeErr::BranchMismatch,
                          "letbang branches consume different variables"};
      }
      auto [g1, g2] = split_or_fail(ctx, e.child(0), fv2, {});
      QType s = check(g1, e.child(0));
      if (s.kind() != QType::Kind::Lower || s.base() != e.bang_base())
        throw CheckFail{TypeErr::TypeMismatch,
                        "letbang scrutinee has type " + s.show() + ", table is over " +
                            e.bang_base().show()};
      if (e.child_count() == 1) return *e.bang_ann();
      QType t = check(g2, e.child(1));
      for (std::size_t i = 2; i < e.child_count(); ++i) {
        QType ti = check(g2, e.child(i));
        if (ti != t)
          throw CheckFail{TypeErr::BranchMismatch,
                          "letbang branches type " + t.show() + " vs " + ti.show()};
      }
      return t;
    }
    case QExp::Kind::UApp: {
      QType s = check(ctx, e.child(0));
      if (s != e.unitary().source())
        throw CheckFail{TypeErr::TypeMismatch,
                        "unitary expects " + e.unitary().source().show() + ", argument has " +
                            s.show()};
      return e.unitary().target();
    }
  }
  throw type_error("bad QExp");
}

}  // namespace

TypingResult infer(const Ctx& ctx, const QExp& e) {
  // Catch duplicate usage early so the error kind is stable regardless of
  // where the traversal first trips over it.
  for (const auto& [x, n] : free_var_counts(e))
    if (n > 1 && ctx.contains(x))
      return TypingResult::err(TypeErr::DuplicateUse, "variable " + x + " used " +
                                                          std::to_string(n) + " times");
  try {
    return TypingResult::ok(check(ctx, e));
  } catch (const CheckFail& f) {
    return TypingResult::err(f.kind, f.detail);
  }
}

}  // namespace qeq

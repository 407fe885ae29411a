#include "qeq/opentype.hpp"

#include <algorithm>
#include <map>

namespace qeq {

BasisValue BasisValue::elem(std::size_t i) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Elem;
  n->index = i;
  return BasisValue(std::move(n));
}

BasisValue BasisValue::wire(VarName name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Wire;
  n->name = std::move(name);
  return BasisValue(std::move(n));
}

BasisValue BasisValue::term(QExp e) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Term;
  n->term = std::move(e);
  return BasisValue(std::move(n));
}

BasisValue BasisValue::pair(BasisValue l, BasisValue r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pair;
  n->children = {std::move(l), std::move(r)};
  return BasisValue(std::move(n));
}

BasisValue BasisValue::tag(int which, BasisValue inner) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Tag;
  n->which = which;
  n->children = {std::move(inner)};
  return BasisValue(std::move(n));
}

std::size_t BasisValue::elem_index() const {
  if (kind() != Kind::Elem) throw type_error("elem_index on non-element basis value");
  return node_->index;
}

const VarName& BasisValue::wire_name() const {
  if (kind() != Kind::Wire) throw type_error("wire_name on non-wire basis value");
  return node_->name;
}

const QExp& BasisValue::term_value() const {
  if (kind() != Kind::Term) throw type_error("term_value on non-term basis value");
  return *node_->term;
}

const BasisValue& BasisValue::first() const {
  if (kind() != Kind::Pair) throw type_error("first on non-pair basis value");
  return node_->children[0];
}

const BasisValue& BasisValue::second() const {
  if (kind() != Kind::Pair) throw type_error("second on non-pair basis value");
  return node_->children[1];
}

int BasisValue::tag_which() const {
  if (kind() != Kind::Tag) throw type_error("tag_which on non-tag basis value");
  return node_->which;
}

const BasisValue& BasisValue::tagged() const {
  if (kind() != Kind::Tag) throw type_error("tagged on non-tag basis value");
  return node_->children[0];
}

std::vector<VarName> BasisValue::wires() const {
  std::vector<VarName> out;
  switch (kind()) {
    case Kind::Elem: break;
    case Kind::Wire: out.push_back(node_->name); break;
    case Kind::Term: break;
    case Kind::Pair: {
      auto l = first().wires();
      auto r = second().wires();
      out = std::move(l);
      out.insert(out.end(), r.begin(), r.end());
      break;
    }
    case Kind::Tag: out = tagged().wires(); break;
  }
  return out;
}

std::string BasisValue::show() const {
  switch (kind()) {
    case Kind::Elem: return std::to_string(node_->index);
    case Kind::Wire: return node_->name;
    case Kind::Term: return node_->term->show();
    case Kind::Pair: return "(" + first().show() + ", " + second().show() + ")";
    case Kind::Tag: return (node_->which == 1 ? "inl " : "inr ") + tagged().show();
  }
  return "?";
}

std::string BasisValue::shape_key() const {
  switch (kind()) {
    case Kind::Elem: return "e" + std::to_string(node_->index);
    case Kind::Wire:
    case Kind::Term:
      return "_";
    case Kind::Pair: return "(" + first().shape_key() + "," + second().shape_key() + ")";
    case Kind::Tag: return std::to_string(node_->which) + ":" + tagged().shape_key();
  }
  return "?";
}

FinType basis(const OpenQType& t, const TypeAssignment& m) {
  switch (t.kind()) {
    case OpenQType::Kind::Var: {
      auto it = m.find(t.var_name());
      if (it == m.end()) throw type_error("basis: unbound type variable " + t.var_name());
      return it->second;
    }
    case OpenQType::Kind::Lower: return t.base();
    case OpenQType::Kind::Tensor: return FinType::prod(basis(t.left(), m), basis(t.right(), m));
    case OpenQType::Kind::Oplus: return FinType::sum(basis(t.left(), m), basis(t.right(), m));
  }
  throw type_error("bad OpenQType");
}

namespace {

// Wire numbering restarts per value: distinct basis points may reuse wire
// names, but within one value every Var leaf gets a distinct wire.
std::vector<BasisValue> var_basis_fresh(const OpenQType& t, const std::string& prefix,
                                        std::size_t next_wire) {
  switch (t.kind()) {
    case OpenQType::Kind::Var:
      return {BasisValue::wire(prefix + std::to_string(next_wire))};
    case OpenQType::Kind::Lower: {
      std::vector<BasisValue> out;
      for (std::size_t i = 0; i < t.base().card(); ++i) out.push_back(BasisValue::elem(i));
      return out;
    }
    case OpenQType::Kind::Tensor: {
      std::vector<BasisValue> out;
      auto lefts = var_basis_fresh(t.left(), prefix, next_wire);
      for (const auto& l : lefts) {
        auto rights = var_basis_fresh(t.right(), prefix, next_wire + l.wires().size());
        for (const auto& r : rights) out.push_back(BasisValue::pair(l, r));
      }
      return out;
    }
    case OpenQType::Kind::Oplus: {
      std::vector<BasisValue> out;
      for (const auto& l : var_basis_fresh(t.left(), prefix, next_wire))
        out.push_back(BasisValue::tag(1, l));
      for (const auto& r : var_basis_fresh(t.right(), prefix, next_wire))
        out.push_back(BasisValue::tag(2, r));
      return out;
    }
  }
  throw type_error("bad OpenQType");
}

}  // namespace

std::vector<BasisValue> var_basis(const OpenQType& t, const std::string& prefix) {
  return var_basis_fresh(t, prefix, 0);
}

BasisValue index_to_value(const OpenQType& t, const TypeAssignment& m, std::size_t i) {
  switch (t.kind()) {
    case OpenQType::Kind::Var:
    case OpenQType::Kind::Lower: {
      FinType b = basis(t, m);
      if (i >= b.card()) throw type_error("basis index out of range");
      return BasisValue::elem(i);
    }
    case OpenQType::Kind::Tensor: {
      FinType b = basis(t, m);
      auto [l, r] = b.prod_split(i);
      return BasisValue::pair(index_to_value(t.left(), m, l), index_to_value(t.right(), m, r));
    }
    case OpenQType::Kind::Oplus: {
      FinType b = basis(t, m);
      auto [which, inner] = b.sum_split(i);
      const OpenQType& side = which == 1 ? t.left() : t.right();
      return BasisValue::tag(which, index_to_value(side, m, inner));
    }
  }
  throw type_error("bad OpenQType");
}

std::size_t value_to_index(const OpenQType& t, const TypeAssignment& m, const BasisValue& v) {
  switch (t.kind()) {
    case OpenQType::Kind::Var:
    case OpenQType::Kind::Lower:
      return v.elem_index();
    case OpenQType::Kind::Tensor: {
      FinType b = basis(t, m);
      return b.prod_index(value_to_index(t.left(), m, v.first()),
                          value_to_index(t.right(), m, v.second()));
    }
    case OpenQType::Kind::Oplus: {
      FinType b = basis(t, m);
      std::size_t inner = value_to_index(v.tag_which() == 1 ? t.left() : t.right(), m, v.tagged());
      return v.tag_which() == 1 ? b.sum_inl(inner) : b.sum_inr(inner);
    }
  }
  throw type_error("bad OpenQType");
}

Ctx gamma(const OpenQType& t, const BasisValue& b, const TypeAssignment& m) {
  Ctx out;
  switch (t.kind()) {
    case OpenQType::Kind::Var: {
      auto it = m.find(t.var_name());
      if (it == m.end()) throw type_error("gamma: unbound type variable " + t.var_name());
      out.bind(b.wire_name(), QType::lower(it->second));
      return out;
    }
    case OpenQType::Kind::Lower:
      if (b.kind() != BasisValue::Kind::Elem) throw type_error("gamma: shape mismatch at Lower");
      return out;
    case OpenQType::Kind::Tensor:
      return gamma(t.left(), b.first(), m).merged(gamma(t.right(), b.second(), m));
    case OpenQType::Kind::Oplus:
      return gamma(b.tag_which() == 1 ? t.left() : t.right(), b.tagged(), m);
  }
  throw type_error("bad OpenQType");
}

QExp partial_init(const OpenQType& t, const BasisValue& b, const TypeAssignment& m) {
  switch (t.kind()) {
    case OpenQType::Kind::Var:
      if (b.kind() == BasisValue::Kind::Wire) return QExp::var(b.wire_name());
      if (b.kind() == BasisValue::Kind::Term) return b.term_value();
      throw type_error("partial_init: shape mismatch at type variable");
    case OpenQType::Kind::Lower:
      return QExp::put(t.base(), b.elem_index());
    case OpenQType::Kind::Tensor:
      return QExp::pair(partial_init(t.left(), b.first(), m),
                        partial_init(t.right(), b.second(), m));
    case OpenQType::Kind::Oplus: {
      QType ann = t.instantiate(m);
      const OpenQType& side = b.tag_which() == 1 ? t.left() : t.right();
      return QExp::inj(b.tag_which(), ann, partial_init(side, b.tagged(), m));
    }
  }
  throw type_error("bad OpenQType");
}

QExp partial_match(const OpenQType& t, const QExp& e, const BranchFamily& bs,
                   const TypeAssignment& m, const QType& result_type) {
  switch (t.kind()) {
    case OpenQType::Kind::Var: {
      VarName w = fresh_var("m");
      QExp body = bs(BasisValue::wire(w));
      return subst(body, {{w, e}});
    }
    case OpenQType::Kind::Lower: {
      FinType base = t.base();
      std::vector<QExp> branches;
      branches.reserve(base.card());
      for (std::size_t a = 0; a < base.card(); ++a) branches.push_back(bs(BasisValue::elem(a)));
      std::optional<QType> ann;
      if (base.card() == 0) ann = result_type;
      return QExp::let_bang(e, base, std::move(branches), ann);
    }
    case OpenQType::Kind::Tensor: {
      VarName x1 = fresh_var("m");
      VarName x2 = fresh_var("m");
      QExp body = partial_match(
          t.left(), QExp::var(x1),
          [&](const BasisValue& b1) {
            return partial_match(
                t.right(), QExp::var(x2),
                [&](const BasisValue& b2) { return bs(BasisValue::pair(b1, b2)); }, m,
                result_type);
          },
          m, result_type);
      return QExp::let_pair(x1, x2, e, std::move(body));
    }
    case OpenQType::Kind::Oplus: {
      VarName x1 = fresh_var("m");
      VarName x2 = fresh_var("m");
      QExp b1 = partial_match(
          t.left(), QExp::var(x1),
          [&](const BasisValue& b) { return bs(BasisValue::tag(1, b)); }, m, result_type);
      QExp b2 = partial_match(
          t.right(), QExp::var(x2),
          [&](const BasisValue& b) { return bs(BasisValue::tag(2, b)); }, m, result_type);
      return QExp::case_of(e, x1, std::move(b1), x2, std::move(b2));
    }
  }
  throw type_error("bad OpenQType");
}

BasisValue apply_equiv(const UnitaryEquiv& f, const BasisValue& b, bool forward) {
  using K = UnitaryEquiv::Kind;
  switch (f.kind()) {
    case K::Refl:
      return b;
    case K::Symm:
      return apply_equiv(f.child(0), b, !forward);
    case K::Trans:
      if (forward) return apply_equiv(f.child(1), apply_equiv(f.child(0), b, true), true);
      return apply_equiv(f.child(0), apply_equiv(f.child(1), b, false), false);
    case K::CongTensor:
      return BasisValue::pair(apply_equiv(f.child(0), b.first(), forward),
                              apply_equiv(f.child(1), b.second(), forward));
    case K::CongOplus: {
      int which = b.tag_which();
      return BasisValue::tag(which,
                             apply_equiv(f.child(which - 1), b.tagged(), forward));
    }
    case K::SwapTensor:
      return BasisValue::pair(b.second(), b.first());
    case K::SwapOplus:
      return BasisValue::tag(b.tag_which() == 1 ? 2 : 1, b.tagged());
    case K::AssocTensor:
      if (forward) {
        // (a, (b, c)) -> ((a, b), c)
        return BasisValue::pair(BasisValue::pair(b.first(), b.second().first()),
                                b.second().second());
      }
      return BasisValue::pair(b.first().first(),
                              BasisValue::pair(b.first().second(), b.second()));
    case K::AssocOplus:
      if (forward) {
        if (b.tag_which() == 1) return BasisValue::tag(1, BasisValue::tag(1, b.tagged()));
        const BasisValue& inner = b.tagged();
        if (inner.tag_which() == 1) return BasisValue::tag(1, BasisValue::tag(2, inner.tagged()));
        return BasisValue::tag(2, inner.tagged());
      } else {
        if (b.tag_which() == 2) return BasisValue::tag(2, BasisValue::tag(2, b.tagged()));
        const BasisValue& inner = b.tagged();
        if (inner.tag_which() == 1) return BasisValue::tag(1, inner.tagged());
        return BasisValue::tag(2, BasisValue::tag(1, inner.tagged()));
      }
    case K::Distr:
      if (forward) {
        // (a, tag_i b) -> tag_i (a, b)
        const BasisValue& tagged = b.second();
        return BasisValue::tag(tagged.tag_which(),
                               BasisValue::pair(b.first(), tagged.tagged()));
      } else {
        const BasisValue& inner = b.tagged();
        return BasisValue::pair(inner.first(), BasisValue::tag(b.tag_which(), inner.second()));
      }
    case K::LowerTensor: {
      FinType p = FinType::prod(f.fin(0), f.fin(1));
      if (forward)
        return BasisValue::elem(p.prod_index(b.first().elem_index(), b.second().elem_index()));
      auto [l, r] = p.prod_split(b.elem_index());
      return BasisValue::pair(BasisValue::elem(l), BasisValue::elem(r));
    }
    case K::LowerOplus: {
      FinType s = FinType::sum(f.fin(0), f.fin(1));
      if (forward) {
        std::size_t inner = b.tagged().elem_index();
        return BasisValue::elem(b.tag_which() == 1 ? s.sum_inl(inner) : s.sum_inr(inner));
      }
      auto [which, inner] = s.sum_split(b.elem_index());
      return BasisValue::tag(which, BasisValue::elem(inner));
    }
    case K::LUnitTensor:
      if (forward) return b.second();
      return BasisValue::pair(BasisValue::elem(0), b);
    case K::LUnitOplus:
      if (forward) {
        if (b.tag_which() == 1) throw type_error("lunit_oplus: impossible Void value");
        return b.tagged();
      }
      return BasisValue::tag(2, b);
    case K::LZero:
      throw type_error("lzero: no basis values to transport");
    case K::LowerRelabel:
      return BasisValue::elem(b.elem_index());
  }
  throw type_error("bad UnitaryEquiv");
}

std::vector<std::size_t> equiv_basis_bijection(const UnitaryEquiv& f, const TypeAssignment& m) {
  FinType src_b = basis(f.src(), m);
  FinType dst_b = basis(f.dst(), m);
  if (src_b.card() != dst_b.card())
    throw type_error("equiv endpoints have different cardinalities under the assignment");
  std::vector<std::size_t> perm(src_b.card());
  std::vector<bool> hit(dst_b.card(), false);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    BasisValue v = index_to_value(f.src(), m, i);
    BasisValue w = apply_equiv(f, v, true);
    std::size_t j = value_to_index(f.dst(), m, w);
    if (hit[j]) throw type_error("equivalence failed bijectivity validation");
    hit[j] = true;
    perm[i] = j;
  }
  return perm;
}

std::optional<BasisValue> parse_init(const OpenQType& t, const QExp& e, const TypeAssignment& m) {
  switch (t.kind()) {
    case OpenQType::Kind::Var:
      return BasisValue::term(e);
    case OpenQType::Kind::Lower:
      if (e.kind() != QExp::Kind::Put || e.put_base() != t.base()) return std::nullopt;
      return BasisValue::elem(e.put_value());
    case OpenQType::Kind::Tensor: {
      if (e.kind() != QExp::Kind::Pair) return std::nullopt;
      auto l = parse_init(t.left(), e.child(0), m);
      if (!l) return std::nullopt;
      auto r = parse_init(t.right(), e.child(1), m);
      if (!r) return std::nullopt;
      return BasisValue::pair(std::move(*l), std::move(*r));
    }
    case OpenQType::Kind::Oplus: {
      if (e.kind() != QExp::Kind::Inj) return std::nullopt;
      if (!e.inj_ann() || *e.inj_ann() != t.instantiate(m)) return std::nullopt;
      const OpenQType& side = e.inj_which() == 1 ? t.left() : t.right();
      auto inner = parse_init(side, e.child(0), m);
      if (!inner) return std::nullopt;
      return BasisValue::tag(e.inj_which(), std::move(*inner));
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Normal forms and the equivalence decision.
// ---------------------------------------------------------------------------

namespace {

OpenQType olower(FinType f) { return OpenQType::lower(std::move(f)); }
OpenQType ovoid() { return olower(FinType::void_type()); }

OpenQType clause_type(const NFClause& c) {
  OpenQType t = olower(c.card);
  // Right-nested variable chain appended after the Lower head.
  for (std::size_t i = c.vars.size(); i-- > 0;) {
    // fold from the back to get X1 ⊗ (X2 ⊗ ...)
    (void)i;
  }
  if (c.vars.empty()) return t;
  OpenQType chain = OpenQType::var(c.vars.back());
  for (std::size_t i = c.vars.size() - 1; i-- > 0;)
    chain = OpenQType::tensor(OpenQType::var(c.vars[i]), chain);
  return OpenQType::tensor(t, chain);
}

OpenQType chain_oplus(const std::vector<OpenQType>& items) {
  if (items.empty()) return ovoid();
  OpenQType t = items.back();
  for (std::size_t i = items.size() - 1; i-- > 0;) t = OpenQType::oplus(items[i], t);
  return t;
}

OpenQType chain_tensor(const std::vector<OpenQType>& items) {
  if (items.empty()) throw type_error("empty tensor chain");
  OpenQType t = items.back();
  for (std::size_t i = items.size() - 1; i-- > 0;) t = OpenQType::tensor(items[i], t);
  return t;
}

using UE = UnitaryEquiv;

// chain(A) ⊕ chain(B) ≃ chain(A ++ B), right-nested throughout.
UE oplus_append(const std::vector<OpenQType>& a, const std::vector<OpenQType>& b) {
  if (a.empty()) return UE::lunit_oplus(chain_oplus(b));
  if (b.empty()) {
    UE sw = UE::swap_oplus(chain_oplus(a), ovoid());
    return UE::trans(sw, UE::lunit_oplus(chain_oplus(a)));
  }
  if (a.size() == 1) return UE::refl(OpenQType::oplus(a[0], chain_oplus(b)));
  std::vector<OpenQType> rest(a.begin() + 1, a.end());
  UE step = UE::symm(UE::assoc_oplus(a[0], chain_oplus(rest), chain_oplus(b)));
  UE inner = UE::cong_oplus(UE::refl(a[0]), oplus_append(rest, b));
  return UE::trans(step, inner);
}

// Applies w at clause position p of a right-nested ⊕ chain whose items are
// `items` (w's source must be items[p]); returns the whole-chain witness and
// updates items[p] to w's target.
UE at_oplus_pos(std::vector<OpenQType>& items, std::size_t p, const UE& w) {
  if (p + 1 == items.size()) {
    // Innermost position: the chain tail is exactly items[p].
    items[p] = w.dst();
    if (items.size() == 1) return w;
    std::vector<OpenQType> prefix(items.begin(), items.end() - 1);
    UE acc = w;
    for (std::size_t i = prefix.size(); i-- > 0;) {
      acc = UE::cong_oplus(UE::refl(items[i]), acc);
    }
    return acc;
  }
  std::vector<OpenQType> tail(items.begin() + p + 1, items.end());
  UE acc = UE::cong_oplus(w, UE::refl(chain_oplus(tail)));
  items[p] = w.dst();
  for (std::size_t i = p; i-- > 0;) acc = UE::cong_oplus(UE::refl(items[i]), acc);
  return acc;
}

// Swaps adjacent clauses p and p+1 of a right-nested ⊕ chain.
UE swap_oplus_adjacent(std::vector<OpenQType>& items, std::size_t p) {
  const OpenQType& a = items[p];
  const OpenQType& b = items[p + 1];
  UE w = UE::refl(a);
  if (p + 2 == items.size()) {
    w = UE::swap_oplus(a, b);
  } else {
    std::vector<OpenQType> rest(items.begin() + p + 2, items.end());
    OpenQType r = chain_oplus(rest);
    // a ⊕ (b ⊕ r) ≃ (a ⊕ b) ⊕ r ≃ (b ⊕ a) ⊕ r ≃ b ⊕ (a ⊕ r)
    UE s1 = UE::assoc_oplus(a, b, r);
    UE s2 = UE::cong_oplus(UE::swap_oplus(a, b), UE::refl(r));
    UE s3 = UE::symm(UE::assoc_oplus(b, a, r));
    w = UE::trans(UE::trans(s1, s2), s3);
  }
  std::vector<OpenQType> sub(items.begin() + p, items.end());
  UE whole = w;
  for (std::size_t i = p; i-- > 0;) whole = UE::cong_oplus(UE::refl(items[i]), whole);
  std::swap(items[p], items[p + 1]);
  return whole;
}

UE swap_tensor_adjacent(std::vector<OpenQType>& items, std::size_t p) {
  const OpenQType& a = items[p];
  const OpenQType& b = items[p + 1];
  UE w = UE::refl(a);
  if (p + 2 == items.size()) {
    w = UE::swap_tensor(a, b);
  } else {
    std::vector<OpenQType> rest(items.begin() + p + 2, items.end());
    OpenQType r = chain_tensor(rest);
    UE s1 = UE::assoc_tensor(a, b, r);
    UE s2 = UE::cong_tensor(UE::swap_tensor(a, b), UE::refl(r));
    UE s3 = UE::symm(UE::assoc_tensor(b, a, r));
    w = UE::trans(UE::trans(s1, s2), s3);
  }
  UE whole = w;
  for (std::size_t i = p; i-- > 0;) whole = UE::cong_tensor(UE::refl(items[i]), whole);
  std::swap(items[p], items[p + 1]);
  return whole;
}

// chain(left) ⊗ right ≃ right-nested chain of (left ++ [right]).
UE tensor_reassoc(const std::vector<OpenQType>& left, const OpenQType& right) {
  if (left.empty()) throw type_error("reassoc with empty left");
  if (left.size() == 1) return UE::refl(OpenQType::tensor(left[0], right));
  std::vector<OpenQType> rest(left.begin() + 1, left.end());
  UE step = UE::symm(UE::assoc_tensor(left[0], chain_tensor(rest), right));
  UE inner = UE::cong_tensor(UE::refl(left[0]), tensor_reassoc(rest, right));
  return UE::trans(step, inner);
}

// Flattens an arbitrary ⊗ tree into its leaf list with a witness onto the
// right-nested chain.
std::pair<std::vector<OpenQType>, UE> tensor_flatten(const OpenQType& t) {
  if (t.kind() != OpenQType::Kind::Tensor) return {{t}, UE::refl(t)};
  auto [ll, lw] = tensor_flatten(t.left());
  auto [rl, rw] = tensor_flatten(t.right());
  std::vector<OpenQType> items = ll;
  items.insert(items.end(), rl.begin(), rl.end());
  UE whole = UE::cong_tensor(lw, rw);
  if (ll.size() > 1) whole = UE::trans(whole, tensor_reassoc(ll, chain_tensor(rl)));
  return {items, whole};
}

// Bubble-sorts a ⊗ chain into the given target order (a permutation of the
// items); comparator is the index in `target`.
UE tensor_sort(std::vector<OpenQType>& items, const std::vector<std::size_t>& rank) {
  UE acc = UE::refl(chain_tensor(items));
  std::vector<std::size_t> r = rank;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t p = 0; p + 1 < items.size(); ++p) {
      if (r[p] > r[p + 1]) {
        acc = UE::trans(acc, swap_tensor_adjacent(items, p));
        std::swap(r[p], r[p + 1]);
        changed = true;
      }
    }
  }
  return acc;
}

// chain(items) with witness applied at p already folded in by callers.
// Distributes T over a right-nested ⊕ chain from the left:
// T ⊗ chain(D) ≃ chain over j of (T ⊗ Dj).
UE distribute_left(const OpenQType& t, const std::vector<OpenQType>& d) {
  if (d.empty()) {
    // T ⊗ Void ≃ Void ⊗ T ≃ Void
    UE sw = UE::swap_tensor(t, ovoid());
    return UE::trans(sw, UE::lzero(t));
  }
  if (d.size() == 1) return UE::refl(OpenQType::tensor(t, d[0]));
  std::vector<OpenQType> rest(d.begin() + 1, d.end());
  UE step = UE::distr(t, d[0], chain_oplus(rest));
  UE inner = UE::cong_oplus(UE::refl(OpenQType::tensor(t, d[0])), distribute_left(t, rest));
  return UE::trans(step, inner);
}

// chain(C) ⊗ T ≃ chain over i of (Ci ⊗ T).
UE distribute_right(const std::vector<OpenQType>& c, const OpenQType& t) {
  if (c.empty()) return UE::lzero(t);
  if (c.size() == 1) return UE::refl(OpenQType::tensor(c[0], t));
  std::vector<OpenQType> rest(c.begin() + 1, c.end());
  OpenQType rchain = chain_oplus(rest);
  // (C0 ⊕ R) ⊗ T ≃ T ⊗ (C0 ⊕ R) ≃ (T⊗C0) ⊕ (T⊗R) ≃ (C0⊗T) ⊕ (R⊗T-distributed)
  UE s1 = UE::swap_tensor(chain_oplus(c), t);
  UE s2 = UE::distr(t, c[0], rchain);
  UE s3 = UE::cong_oplus(UE::swap_tensor(t, c[0]),
                         UE::trans(UE::swap_tensor(t, rchain), distribute_right(rest, t)));
  return UE::trans(UE::trans(s1, s2), s3);
}

struct ClauseAndWitness {
  std::vector<NFClause> clauses;  // in chain order
  UE witness;                     // σ ≃ chain of clause types
};

std::vector<OpenQType> clause_types(const std::vector<NFClause>& cs) {
  std::vector<OpenQType> out;
  out.reserve(cs.size());
  for (const auto& c : cs) out.push_back(clause_type(c));
  return out;
}

// Normalizes the tensor of two clause types into a single clause.
std::pair<NFClause, UE> clause_merge_tensor(const NFClause& a, const NFClause& b) {
  OpenQType src = OpenQType::tensor(clause_type(a), clause_type(b));
  auto [items, flat_w] = tensor_flatten(src);
  // items = [Lower a.card, a.vars..., Lower b.card, b.vars...]
  // Target order: Lower a.card, Lower b.card, then all vars sorted.
  std::vector<TVarName> vars = a.vars;
  vars.insert(vars.end(), b.vars.begin(), b.vars.end());
  std::sort(vars.begin(), vars.end());
  // Ranks: position 0 stays 0; the second Lower (at index a.vars.size()+1)
  // gets rank 1; variables get 2 + their sorted slot (stable for dups).
  std::vector<std::size_t> rank(items.size());
  std::vector<bool> used(vars.size(), false);
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i == 0) {
      rank[i] = 0;
    } else if (i == a.vars.size() + 1) {
      rank[i] = 1;
    } else {
      const TVarName& v = items[i].var_name();
      for (std::size_t s = 0; s < vars.size(); ++s) {
        if (!used[s] && vars[s] == v) {
          rank[i] = 2 + s;
          used[s] = true;
          break;
        }
      }
    }
  }
  UE sorted_w = tensor_sort(items, rank);
  UE acc = UE::trans(flat_w, sorted_w);
  // Merge the two leading Lowers.
  FinType merged = FinType::prod(a.card, b.card);
  UE merge_step = UE::lower_tensor(a.card, b.card);
  if (items.size() == 2) {
    acc = UE::trans(acc, merge_step);
  } else {
    std::vector<OpenQType> tail(items.begin() + 2, items.end());
    OpenQType tail_chain = chain_tensor(tail);
    // La ⊗ (Lb ⊗ tail) ≃ (La ⊗ Lb) ⊗ tail ≃ L(a×b) ⊗ tail
    UE s1 = UE::assoc_tensor(olower(a.card), olower(b.card), tail_chain);
    UE s2 = UE::cong_tensor(merge_step, UE::refl(tail_chain));
    acc = UE::trans(acc, UE::trans(s1, s2));
  }
  NFClause out{merged, vars};
  return {out, acc};
}

ClauseAndWitness normalize_rec(const OpenQType& t) {
  switch (t.kind()) {
    case OpenQType::Kind::Var: {
      NFClause c{FinType::unit(), {t.var_name()}};
      return {{c}, UE::symm(UE::lunit_tensor(t))};
    }
    case OpenQType::Kind::Lower: {
      NFClause c{t.base(), {}};
      return {{c}, UE::refl(t)};
    }
    case OpenQType::Kind::Oplus: {
      auto l = normalize_rec(t.left());
      auto r = normalize_rec(t.right());
      UE w = UE::cong_oplus(l.witness, r.witness);
      UE app = oplus_append(clause_types(l.clauses), clause_types(r.clauses));
      std::vector<NFClause> clauses = l.clauses;
      clauses.insert(clauses.end(), r.clauses.begin(), r.clauses.end());
      return {std::move(clauses), UE::trans(w, app)};
    }
    case OpenQType::Kind::Tensor: {
      auto l = normalize_rec(t.left());
      auto r = normalize_rec(t.right());
      UE acc = UE::cong_tensor(l.witness, r.witness);
      auto ltypes = clause_types(l.clauses);
      auto rtypes = clause_types(r.clauses);
      // chain(L) ⊗ chain(R) ≃ ⊕_i (Li ⊗ chain(R))
      acc = UE::trans(acc, distribute_right(ltypes, chain_oplus(rtypes)));
      // Inside each block: Li ⊗ chain(R) ≃ ⊕_j (Li ⊗ Rj), then normalize
      // every pair into a clause, then flatten the chain of chains.
      std::vector<OpenQType> blocks;
      for (std::size_t i = 0; i < ltypes.size(); ++i)
        blocks.push_back(OpenQType::tensor(ltypes[i], chain_oplus(rtypes)));
      std::vector<std::vector<OpenQType>> block_items;
      std::vector<NFClause> clauses;
      std::vector<UE> block_ws;
      for (std::size_t i = 0; i < ltypes.size(); ++i) {
        UE bw = distribute_left(ltypes[i], rtypes);
        // Now a chain over j of (Li ⊗ Rj); normalize each pair.
        std::vector<OpenQType> pair_items;
        for (std::size_t j = 0; j < rtypes.size(); ++j)
          pair_items.push_back(OpenQType::tensor(ltypes[i], rtypes[j]));
        for (std::size_t j = 0; j < rtypes.size(); ++j) {
          auto [cl, cw] = clause_merge_tensor(l.clauses[i], r.clauses[j]);
          bw = UE::trans(bw, at_oplus_pos(pair_items, j, cw));
          clauses.push_back(cl);
        }
        block_ws.push_back(bw);
        block_items.push_back(pair_items);
      }
      // Apply per-block witnesses along the outer chain, then flatten.
      std::vector<OpenQType> outer = blocks;
      for (std::size_t i = 0; i < block_ws.size(); ++i)
        acc = UE::trans(acc, at_oplus_pos(outer, i, block_ws[i]));
      // outer[i] is now chain(block_items[i]); flatten nested chains.
      struct Flatten {
        static UE run(const std::vector<std::vector<OpenQType>>& blocks, std::size_t from) {
          if (from + 1 >= blocks.size()) {
            // Zero or one block left: already flat.
            if (blocks.size() == 0) return UE::refl(ovoid());
            std::vector<OpenQType> items;
            for (std::size_t k = from; k < blocks.size(); ++k)
              items.insert(items.end(), blocks[k].begin(), blocks[k].end());
            return UE::refl(chain_oplus(items));
          }
          // chain(B_from) ⊕ flat(rest) — first flatten the rest, then append.
          std::vector<OpenQType> rest_items;
          for (std::size_t k = from + 1; k < blocks.size(); ++k)
            rest_items.insert(rest_items.end(), blocks[k].begin(), blocks[k].end());
          std::vector<OpenQType> rest_chains;
          for (std::size_t k = from + 1; k < blocks.size(); ++k)
            rest_chains.push_back(chain_oplus(blocks[k]));
          UE inner = UE::cong_oplus(UE::refl(chain_oplus(blocks[from])), run(blocks, from + 1));
          UE app = oplus_append(blocks[from], rest_items);
          return UE::trans(inner, app);
        }
      };
      if (!block_items.empty()) {
        acc = UE::trans(acc, Flatten::run(block_items, 0));
      }
      return {std::move(clauses), std::move(acc)};
    }
  }
  throw type_error("bad OpenQType");
}

bool clause_less(const NFClause& a, const NFClause& b) {
  if (a.vars != b.vars) return a.vars < b.vars;
  return a.card.show() < b.card.show();
}

// Sorts clauses canonically with a witnessed bubble sort.
UE sort_clauses(std::vector<NFClause>& clauses, const UE& start) {
  UE acc = start;
  std::vector<OpenQType> items = clause_types(clauses);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t p = 0; p + 1 < clauses.size(); ++p) {
      if (clause_less(clauses[p + 1], clauses[p])) {
        acc = UE::trans(acc, swap_oplus_adjacent(items, p));
        std::swap(clauses[p], clauses[p + 1]);
        changed = true;
      }
    }
  }
  return acc;
}

}  // namespace

OpenQType nf_type(const NormalForm& nf) { return chain_oplus(clause_types(nf.clauses)); }

std::string NormalForm::show() const {
  std::string s = "[";
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (i) s += ", ";
    s += "(" + clauses[i].card.show();
    for (const auto& v : clauses[i].vars) s += " " + v;
    s += ")";
  }
  return s + "]";
}

std::pair<NormalForm, EquivWitness> normalize_type(const OpenQType& t) {
  auto rec = normalize_rec(t);
  UE w = sort_clauses(rec.clauses, rec.witness);
  return {NormalForm{std::move(rec.clauses)}, std::move(w)};
}

namespace {

// Removes clauses with empty cardinality, extending the witness.
UE drop_empty_clauses(std::vector<NFClause>& clauses, const UE& start) {
  UE acc = start;
  for (std::size_t p = 0; p < clauses.size();) {
    if (clauses[p].card.card() != 0) {
      ++p;
      continue;
    }
    std::vector<OpenQType> items = clause_types(clauses);
    // Relabel the head to Void, collapse the clause to Lower Void.
    const NFClause& c = clauses[p];
    UE to_void = UE::lower_relabel(c.card, FinType::void_type());
    UE clause_w = to_void;
    if (!c.vars.empty()) {
      OpenQType vchain = clause_type(NFClause{FinType::unit(), c.vars}).right();
      clause_w = UE::cong_tensor(to_void, UE::refl(vchain));
      clause_w = UE::trans(clause_w, UE::lzero(vchain));
    }
    acc = UE::trans(acc, at_oplus_pos(items, p, clause_w));
    // Bubble the Void clause to the front, then strike it with lunit.
    for (std::size_t q = p; q-- > 0;) acc = UE::trans(acc, swap_oplus_adjacent(items, q));
    if (items.size() == 1) {
      // Chain *is* Lower Void = the empty normal form; nothing to strike.
    } else {
      std::vector<OpenQType> rest(items.begin() + 1, items.end());
      acc = UE::trans(acc, UE::lunit_oplus(chain_oplus(rest)));
    }
    clauses.erase(clauses.begin() + p);
  }
  return acc;
}

// Merges adjacent clauses with equal variable multisets into one clause
// with the summed cardinality.
UE merge_clause_groups(std::vector<NFClause>& clauses, const UE& start) {
  UE acc = start;
  for (std::size_t p = 0; p + 1 < clauses.size();) {
    if (clauses[p].vars != clauses[p + 1].vars) {
      ++p;
      continue;
    }
    std::vector<OpenQType> items = clause_types(clauses);
    const NFClause& a = clauses[p];
    const NFClause& b = clauses[p + 1];
    // (La ⊗ V) ⊕ (Lb ⊗ V) ≃ L(a+b) ⊗ V
    UE pair_w = UE::refl(items[p]);
    if (a.vars.empty()) {
      pair_w = UE::lower_oplus(a.card, b.card);
    } else {
      OpenQType vchain = clause_type(NFClause{FinType::unit(), a.vars}).right();
      UE s1 = UE::cong_oplus(UE::swap_tensor(olower(a.card), vchain),
                             UE::swap_tensor(olower(b.card), vchain));
      UE s2 = UE::symm(UE::distr(vchain, olower(a.card), olower(b.card)));
      UE s3 = UE::cong_tensor(UE::refl(vchain), UE::lower_oplus(a.card, b.card));
      UE s4 = UE::swap_tensor(vchain, olower(FinType::sum(a.card, b.card)));
      pair_w = UE::trans(UE::trans(UE::trans(s1, s2), s3), s4);
    }
    // Group items p and p+1 with an assoc step when a tail follows, then
    // apply pair_w there, all under the cong prefix.
    UE whole = pair_w;
    if (p + 2 != items.size()) {
      std::vector<OpenQType> rest(items.begin() + p + 2, items.end());
      OpenQType r = chain_oplus(rest);
      UE s1 = UE::assoc_oplus(items[p], items[p + 1], r);
      UE s2 = UE::cong_oplus(pair_w, UE::refl(r));
      whole = UE::trans(s1, s2);
    }
    for (std::size_t i = p; i-- > 0;) whole = UE::cong_oplus(UE::refl(items[i]), whole);
    acc = UE::trans(acc, whole);
    NFClause merged{FinType::sum(a.card, b.card), a.vars};
    clauses[p] = merged;
    clauses.erase(clauses.begin() + p + 1);
  }
  return acc;
}

}  // namespace

std::optional<EquivWitness> decide_equiv(const OpenQType& sigma, const OpenQType& tau) {
  auto [nfs, ws] = normalize_type(sigma);
  auto [nft, wt] = normalize_type(tau);
  std::vector<NFClause> cs = nfs.clauses;
  std::vector<NFClause> ct = nft.clauses;
  UE w_s = drop_empty_clauses(cs, ws);
  UE w_t = drop_empty_clauses(ct, wt);
  w_s = merge_clause_groups(cs, w_s);
  w_t = merge_clause_groups(ct, w_t);
  // One clause per variable multiset on each side now; they must line up.
  if (cs.size() != ct.size()) return std::nullopt;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (cs[i].vars != ct[i].vars) return std::nullopt;
    if (cs[i].card.card() != ct[i].card.card()) return std::nullopt;
  }
  // Relabel σ-side cardinalities onto τ-side ones.
  std::vector<OpenQType> items = clause_types(cs);
  UE acc = w_s;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (cs[i].card == ct[i].card) continue;
    UE rel = UE::lower_relabel(cs[i].card, ct[i].card);
    UE cw = rel;
    if (!cs[i].vars.empty()) {
      OpenQType vchain = clause_type(NFClause{FinType::unit(), cs[i].vars}).right();
      cw = UE::cong_tensor(rel, UE::refl(vchain));
    }
    acc = UE::trans(acc, at_oplus_pos(items, i, cw));
  }
  return UE::trans(acc, UE::symm(w_t));
}

}  // namespace qeq

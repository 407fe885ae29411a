#include "qeq/sexpr.hpp"

#include <cctype>

#include <json.hpp>

namespace qeq {

namespace {

struct Sexpr {
  bool is_atom = false;
  std::string atom;
  std::vector<Sexpr> items;
  int line = 1, col = 1;

  const Sexpr& at(std::size_t i) const {
    if (is_atom || i >= items.size())
      throw parse_error("expected more list items", line, col);
    return items[i];
  }
  const std::string& head() const {
    if (is_atom) return atom;
    if (items.empty() || !items[0].is_atom)
      throw parse_error("expected an operator head", line, col);
    return items[0].atom;
  }
  std::size_t size() const { return is_atom ? 0 : items.size(); }
  void expect_len(std::size_t n) const {
    if (is_atom || items.size() != n)
      throw parse_error("expected " + std::to_string(n) + " items", line, col);
  }
};

struct Reader {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1, col = 1;

  explicit Reader(const std::string& t) : text(t) {}

  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == ';') {  // comment to end of line
        while (pos < text.size() && text[pos] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool done() {
    skip_ws();
    return pos >= text.size();
  }

  Sexpr read() {
    skip_ws();
    if (pos >= text.size()) throw parse_error("unexpected end of input", line, col);
    Sexpr s;
    s.line = line;
    s.col = col;
    char c = text[pos];
    if (c == '(') {
      advance();
      while (true) {
        skip_ws();
        if (pos >= text.size()) throw parse_error("unterminated list", s.line, s.col);
        if (text[pos] == ')') {
          advance();
          return s;
        }
        s.items.push_back(read());
      }
    }
    if (c == ')') throw parse_error("unexpected ')'", line, col);
    s.is_atom = true;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '(' && text[pos] != ')' && text[pos] != ';')
      s.atom += text[pos], advance();
    return s;
  }
};

std::size_t parse_nat(const Sexpr& s) {
  if (!s.is_atom) throw parse_error("expected a number", s.line, s.col);
  try {
    return std::stoull(s.atom);
  } catch (...) {
    throw parse_error("expected a number, got '" + s.atom + "'", s.line, s.col);
  }
}

FinType fintype_of(const Sexpr& s) {
  if (s.is_atom) {
    if (s.atom == "bool") return FinType::boolean();
    if (s.atom == "unit") return FinType::unit();
    if (s.atom == "void") return FinType::void_type();
    throw parse_error("unknown base type '" + s.atom + "'", s.line, s.col);
  }
  const std::string& h = s.head();
  if (h == "fin") {
    s.expect_len(2);
    return FinType::fin(parse_nat(s.at(1)));
  }
  if (h == "sum") {
    s.expect_len(3);
    return FinType::sum(fintype_of(s.at(1)), fintype_of(s.at(2)));
  }
  if (h == "prod") {
    s.expect_len(3);
    return FinType::prod(fintype_of(s.at(1)), fintype_of(s.at(2)));
  }
  throw parse_error("unknown base type form '" + h + "'", s.line, s.col);
}

OpenQType qtype_of(const Sexpr& s) {
  if (s.is_atom) {
    if (s.atom == "qubit") return OpenQType::lower(FinType::boolean());
    throw parse_error("unknown type '" + s.atom + "'", s.line, s.col);
  }
  const std::string& h = s.head();
  if (h == "lower") {
    s.expect_len(2);
    return OpenQType::lower(fintype_of(s.at(1)));
  }
  if (h == "tensor") {
    s.expect_len(3);
    return OpenQType::tensor(qtype_of(s.at(1)), qtype_of(s.at(2)));
  }
  if (h == "oplus") {
    s.expect_len(3);
    return OpenQType::oplus(qtype_of(s.at(1)), qtype_of(s.at(2)));
  }
  if (h == "tvar") {
    s.expect_len(2);
    if (!s.at(1).is_atom) throw parse_error("tvar name must be an atom", s.line, s.col);
    return OpenQType::var(s.at(1).atom);
  }
  throw parse_error("unknown type form '" + h + "'", s.line, s.col);
}

QType closed_qtype_of(const Sexpr& s) {
  OpenQType t = qtype_of(s);
  if (!t.is_closed()) throw parse_error("type variable in a closed type", s.line, s.col);
  return t.to_closed();
}

TypeAssignment assign_of(const Sexpr& s) {
  if (s.is_atom) throw parse_error("expected an assignment list", s.line, s.col);
  TypeAssignment m;
  for (const auto& item : s.items) {
    item.expect_len(2);
    if (!item.at(0).is_atom) throw parse_error("assignment key must be an atom", item.line, item.col);
    m.insert_or_assign(item.at(0).atom, fintype_of(item.at(1)));
  }
  return m;
}

UnitaryEquiv equiv_of(const Sexpr& s) {
  const std::string& h = s.head();
  if (h == "refl") {
    s.expect_len(2);
    return UnitaryEquiv::refl(qtype_of(s.at(1)));
  }
  if (h == "symm") {
    s.expect_len(2);
    return UnitaryEquiv::symm(equiv_of(s.at(1)));
  }
  if (h == "trans") {
    s.expect_len(3);
    return UnitaryEquiv::trans(equiv_of(s.at(1)), equiv_of(s.at(2)));
  }
  if (h == "cong-tensor") {
    s.expect_len(3);
    return UnitaryEquiv::cong_tensor(equiv_of(s.at(1)), equiv_of(s.at(2)));
  }
  if (h == "cong-oplus") {
    s.expect_len(3);
    return UnitaryEquiv::cong_oplus(equiv_of(s.at(1)), equiv_of(s.at(2)));
  }
  if (h == "swap-tensor") {
    s.expect_len(3);
    return UnitaryEquiv::swap_tensor(qtype_of(s.at(1)), qtype_of(s.at(2)));
  }
  if (h == "swap-oplus") {
    s.expect_len(3);
    return UnitaryEquiv::swap_oplus(qtype_of(s.at(1)), qtype_of(s.at(2)));
  }
  if (h == "assoc-tensor") {
    s.expect_len(4);
    return UnitaryEquiv::assoc_tensor(qtype_of(s.at(1)), qtype_of(s.at(2)), qtype_of(s.at(3)));
  }
  if (h == "assoc-oplus") {
    s.expect_len(4);
    return UnitaryEquiv::assoc_oplus(qtype_of(s.at(1)), qtype_of(s.at(2)), qtype_of(s.at(3)));
  }
  if (h == "distr") {
    s.expect_len(4);
    return UnitaryEquiv::distr(qtype_of(s.at(1)), qtype_of(s.at(2)), qtype_of(s.at(3)));
  }
  if (h == "lower-tensor") {
    s.expect_len(3);
    return UnitaryEquiv::lower_tensor(fintype_of(s.at(1)), fintype_of(s.at(2)));
  }
  if (h == "lower-oplus") {
    s.expect_len(3);
    return UnitaryEquiv::lower_oplus(fintype_of(s.at(1)), fintype_of(s.at(2)));
  }
  if (h == "lunit-tensor") {
    s.expect_len(2);
    return UnitaryEquiv::lunit_tensor(qtype_of(s.at(1)));
  }
  if (h == "lunit-oplus") {
    s.expect_len(2);
    return UnitaryEquiv::lunit_oplus(qtype_of(s.at(1)));
  }
  if (h == "lzero") {
    s.expect_len(2);
    return UnitaryEquiv::lzero(qtype_of(s.at(1)));
  }
  if (h == "relabel") {
    s.expect_len(3);
    return UnitaryEquiv::lower_relabel(fintype_of(s.at(1)), fintype_of(s.at(2)));
  }
  throw parse_error("unknown equivalence form '" + h + "'", s.line, s.col);
}

UnitaryExpr unitary_of(const Sexpr& s) {
  const std::string& h = s.head();
  if (h == "id") {
    s.expect_len(2);
    return UnitaryExpr::id(closed_qtype_of(s.at(1)));
  }
  if (h == "compose") {
    s.expect_len(3);
    return UnitaryExpr::compose(unitary_of(s.at(1)), unitary_of(s.at(2)));
  }
  if (h == "dagger") {
    s.expect_len(2);
    return UnitaryExpr::adjoint(unitary_of(s.at(1)));
  }
  if (h == "utensor") {
    s.expect_len(3);
    return UnitaryExpr::tensor(unitary_of(s.at(1)), unitary_of(s.at(2)));
  }
  if (h == "uoplus") {
    s.expect_len(3);
    return UnitaryExpr::direct_sum(unitary_of(s.at(1)), unitary_of(s.at(2)));
  }
  if (h == "prim") {
    s.expect_len(2);
    const std::string& name = s.at(1).atom;
    if (name == "X") return prim_x();
    if (name == "H") return prim_h();
    if (name == "CNOT") return prim_cnot();
    if (name == "S") return prim_s();
    throw parse_error("unknown primitive '" + name + "'", s.line, s.col);
  }
  if (h == "equiv") {
    s.expect_len(3);
    return UnitaryExpr::from_equiv(equiv_of(s.at(1)), assign_of(s.at(2)));
  }
  throw parse_error("unknown unitary form '" + h + "'", s.line, s.col);
}

std::size_t element_of(const Sexpr& s, const FinType& base) {
  if (!s.is_atom) throw parse_error("expected an element", s.line, s.col);
  std::string a = s.atom;
  if (base == FinType::boolean()) {
    if (a == "false") return 0;
    if (a == "true") return 1;
  }
  if (!a.empty() && a[0] == 'v') a = a.substr(1);
  try {
    std::size_t v = std::stoull(a);
    if (v >= base.card())
      throw parse_error("element out of range for " + base.show(), s.line, s.col);
    return v;
  } catch (const parse_error&) {
    throw;
  } catch (...) {
    throw parse_error("expected an element of " + base.show(), s.line, s.col);
  }
}

QExp qexp_of(const Sexpr& s) {
  const std::string& h = s.head();
  if (h == "var") {
    s.expect_len(2);
    return QExp::var(s.at(1).atom);
  }
  if (h == "let") {
    s.expect_len(4);
    return QExp::let(s.at(1).atom, qexp_of(s.at(2)), qexp_of(s.at(3)));
  }
  if (h == "pair") {
    s.expect_len(3);
    return QExp::pair(qexp_of(s.at(1)), qexp_of(s.at(2)));
  }
  if (h == "letpair") {
    s.expect_len(5);
    return QExp::let_pair(s.at(1).atom, s.at(2).atom, qexp_of(s.at(3)), qexp_of(s.at(4)));
  }
  if (h == "inj") {
    int which = static_cast<int>(parse_nat(s.at(1)));
    if (s.size() == 3) return QExp::inj_unannotated(which, qexp_of(s.at(2)));
    s.expect_len(4);
    return QExp::inj(which, closed_qtype_of(s.at(2)), qexp_of(s.at(3)));
  }
  if (h == "case") {
    s.expect_len(4);
    const Sexpr& b1 = s.at(2);
    const Sexpr& b2 = s.at(3);
    b1.expect_len(2);
    b2.expect_len(2);
    return QExp::case_of(qexp_of(s.at(1)), b1.at(0).atom, qexp_of(b1.at(1)), b2.at(0).atom,
                         qexp_of(b2.at(1)));
  }
  if (h == "put") {
    s.expect_len(3);
    FinType base = fintype_of(s.at(1));
    return QExp::put(base, element_of(s.at(2), base));
  }
  if (h == "letbang") {
    if (s.size() != 3 && s.size() != 4)
      throw parse_error("letbang expects a scrutinee, a branch table and an optional type",
                        s.line, s.col);
    QExp scrut = qexp_of(s.at(1));
    const Sexpr& table = s.at(2);
    if (table.is_atom) throw parse_error("letbang branch table must be a list", s.line, s.col);
    // Base inferred from the table size (bool for 2, unit for 1, fin n
    // otherwise) unless spelled out as a 4th item. An empty table's 4th
    // item is the result type instead.
    FinType base = FinType::fin(table.items.size());
    if (table.items.size() == 2) base = FinType::boolean();
    if (table.items.size() == 1) base = FinType::unit();
    if (table.items.size() == 0) base = FinType::void_type();
    std::optional<QType> ann;
    if (s.size() == 4) {
      if (table.items.empty())
        ann = closed_qtype_of(s.at(3));
      else
        base = fintype_of(s.at(3));
    }
    if (table.items.size() != base.card())
      throw parse_error("branch table size does not match the base type", s.line, s.col);
    std::vector<QExp> branches(table.items.size(), QExp::put(FinType::unit(), 0));
    std::vector<bool> seen(table.items.size(), false);
    for (const auto& row : table.items) {
      row.expect_len(2);
      std::size_t v = element_of(row.at(0), base);
      if (seen[v]) throw parse_error("duplicate branch", row.line, row.col);
      seen[v] = true;
      branches[v] = qexp_of(row.at(1));
    }
    return QExp::let_bang(std::move(scrut), base, std::move(branches), std::move(ann));
  }
  if (h == "uapp") {
    s.expect_len(3);
    return QExp::uapp(unitary_of(s.at(1)), qexp_of(s.at(2)));
  }
  throw parse_error("unknown expression form '" + h + "'", s.line, s.col);
}

AlgTerm alg_of(const Sexpr& s) {
  const std::string& h = s.head();
  if (h == "apply") {
    s.expect_len(3);
    const Sexpr& ws = s.at(2);
    std::vector<VarName> wires;
    for (const auto& w : ws.items) wires.push_back(w.atom);
    return AlgTerm::apply(s.at(1).atom, std::move(wires));
  }
  if (h == "split") {
    s.expect_len(4);
    const Sexpr& bs = s.at(2);
    bs.expect_len(2);
    return AlgTerm::split(s.at(1).atom, bs.at(0).atom, bs.at(1).atom, alg_of(s.at(3)));
  }
  if (h == "new") {
    s.expect_len(3);
    return AlgTerm::make_new(s.at(1).atom, alg_of(s.at(2)));
  }
  if (h == "meas") {
    s.expect_len(4);
    return AlgTerm::meas(s.at(1).atom, alg_of(s.at(2)), alg_of(s.at(3)));
  }
  if (h == "ustep") {
    s.expect_len(5);
    auto names = [](const Sexpr& x) {
      std::vector<VarName> out;
      if (x.is_atom) {
        out.push_back(x.atom);
      } else {
        for (const auto& i : x.items) out.push_back(i.atom);
      }
      return out;
    };
    return AlgTerm::ustep(unitary_of(s.at(1)), names(s.at(2)), names(s.at(3)), alg_of(s.at(4)));
  }
  throw parse_error("unknown algebraic form '" + h + "'", s.line, s.col);
}

Sexpr read_one(const std::string& text) {
  Reader r(text);
  Sexpr s = r.read();
  if (!r.done()) throw parse_error("trailing input", r.line, r.col);
  return s;
}

Ctx ctx_of(const Sexpr& s) {
  Ctx ctx;
  if (s.is_atom) throw parse_error("expected a context list", s.line, s.col);
  for (const auto& item : s.items) {
    item.expect_len(2);
    ctx.bind(item.at(0).atom, closed_qtype_of(item.at(1)));
  }
  return ctx;
}

}  // namespace

FinType parse_fintype(const std::string& text) { return fintype_of(read_one(text)); }
OpenQType parse_qtype(const std::string& text) { return qtype_of(read_one(text)); }
QType parse_closed_qtype(const std::string& text) { return closed_qtype_of(read_one(text)); }
UnitaryExpr parse_unitary(const std::string& text) { return unitary_of(read_one(text)); }
UnitaryEquiv parse_equiv(const std::string& text) { return equiv_of(read_one(text)); }
QExp parse_qexp(const std::string& text) { return qexp_of(read_one(text)); }
AlgTerm parse_alg(const std::string& text) { return alg_of(read_one(text)); }
Ctx parse_ctx(const std::string& text) { return ctx_of(read_one(text)); }

TermFile parse_term_file(const std::string& text) {
  Reader r(text);
  Sexpr first = r.read();
  TermFile out{Ctx{}, QExp::put(FinType::unit(), 0)};
  if (!first.is_atom && first.size() > 0 && first.items[0].is_atom &&
      first.items[0].atom == "context") {
    Sexpr rest = first;
    rest.items.erase(rest.items.begin());
    out.ctx = ctx_of(rest);
    out.term = qexp_of(r.read());
  } else {
    out.term = qexp_of(first);
  }
  if (!r.done()) throw parse_error("trailing input after term", r.line, r.col);
  return out;
}

std::string print_qexp(const QExp& e) { return e.show(); }
std::string print_qtype(const OpenQType& t) { return t.show(); }
std::string print_alg(const AlgTerm& t) { return t.show(); }

std::string matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  auto entries = nlohmann::json::array();
  for (const auto& e : m.entries()) entries.push_back({e.real(), e.imag()});
  j["entries"] = entries;
  return j.dump();
}

ComplexMatrix matrix_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ComplexMatrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const auto& entries = j.at("entries");
  if (entries.size() != m.rows() * m.cols())
    throw dim_error("matrix entry count does not match dims");
  std::size_t k = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t c = 0; c < m.cols(); ++c, ++k)
      m.at(i, c) = cplx(entries[k][0].get<double>(), entries[k][1].get<double>());
  return m;
}

}  // namespace qeq

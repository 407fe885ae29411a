#pragma once

#include "qeq/algebraic.hpp"
#include "qeq/opentype.hpp"

namespace qeq {

/// Parse error with 1-based source position.
struct parse_error : std::runtime_error {
  parse_error(const std::string& msg, int line, int col)
      : std::runtime_error(msg + " at " + std::to_string(line) + ":" + std::to_string(col)),
        line(line),
        col(col) {}
  int line, col;
};

FinType parse_fintype(const std::string& text);
OpenQType parse_qtype(const std::string& text);
QType parse_closed_qtype(const std::string& text);
UnitaryExpr parse_unitary(const std::string& text);
UnitaryEquiv parse_equiv(const std::string& text);
QExp parse_qexp(const std::string& text);
AlgTerm parse_alg(const std::string& text);

/// Context declarations of the form ((x TYPE) (y TYPE) ...).
Ctx parse_ctx(const std::string& text);

/// Term files: an optional (context ...) form followed by one term.
struct TermFile {
  Ctx ctx;
  QExp term;
};
TermFile parse_term_file(const std::string& text);

/// Printers are the show() methods; round-trips reparse alpha-equivalently.
std::string print_qexp(const QExp& e);
std::string print_qtype(const OpenQType& t);
std::string print_alg(const AlgTerm& t);

/// Matrix (de)serialization: {"rows": r, "cols": c, "entries": [[re, im], ...]}.
std::string matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const std::string& text);

}  // namespace qeq

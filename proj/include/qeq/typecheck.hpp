#pragma once

#include <string>

#include "qeq/qexp.hpp"

namespace qeq {

enum class TypeErr {
  UnboundVar,
  DuplicateUse,
  UnusedVar,
  TypeMismatch,
  ContextOverlap,
  BranchMismatch,
};

std::string type_err_name(TypeErr e);

/// Outcome of the linear typing judgment. OK means every context variable
/// was consumed exactly once and the expression has the reported type.
class TypingResult {
 public:
  static TypingResult ok(QType t) { return TypingResult(std::move(t)); }
  static TypingResult err(TypeErr kind, std::string detail) {
    return TypingResult(kind, std::move(detail));
  }

  bool is_ok() const { return type_.has_value(); }
  explicit operator bool() const { return is_ok(); }
  const QType& type() const;
  TypeErr error_kind() const;
  const std::string& detail() const { return detail_; }
  std::string show() const;

 private:
  explicit TypingResult(QType t) : type_(std::move(t)) {}
  TypingResult(TypeErr kind, std::string detail) : kind_(kind), detail_(std::move(detail)) {}
  std::optional<QType> type_;
  TypeErr kind_ = TypeErr::TypeMismatch;
  std::string detail_;
};

/// Infers the type of e under Γ per the linear typing rules, enforcing
/// exactly-once variable usage. Splitting is driven by free-variable sets.
TypingResult infer(const Ctx& ctx, const QExp& e);

/// Splits Γ by two disjoint free-variable sets whose union covers Γ.
/// Throws type_error when the precondition fails (a shared variable or a
/// leftover one).
std::pair<Ctx, Ctx> split_context(const Ctx& ctx, const std::set<VarName>& fv1,
                                  const std::set<VarName>& fv2);

}  // namespace qeq

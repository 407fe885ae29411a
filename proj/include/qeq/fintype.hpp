#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

namespace qeq {

struct type_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Finite classical types with a fixed enumeration of their elements.
/// Elements are identified with indices 0..card()-1 under the canonical
/// order: Bool is false<true, Sum puts the left block first, Prod is
/// left-major lexicographic.
class FinType {
 public:
  enum class Kind { Void, Unit, Bool, Fin, Sum, Prod };

  static FinType void_type();
  static FinType unit();
  static FinType boolean();
  static FinType fin(std::size_t n);
  static FinType sum(FinType left, FinType right);
  static FinType prod(FinType left, FinType right);

  Kind kind() const { return node_->kind; }
  std::size_t card() const { return node_->card; }
  std::size_t fin_size() const;
  FinType left() const;
  FinType right() const;

  bool operator==(const FinType& other) const;
  bool operator!=(const FinType& other) const { return !(*this == other); }

  std::string show() const;

  // Element arithmetic under the canonical enumeration.
  std::size_t prod_index(std::size_t l, std::size_t r) const;
  std::pair<std::size_t, std::size_t> prod_split(std::size_t i) const;
  std::size_t sum_inl(std::size_t l) const;
  std::size_t sum_inr(std::size_t r) const;
  // Returns (which, inner): which = 1 for the left block, 2 for the right.
  std::pair<int, std::size_t> sum_split(std::size_t i) const;

 private:
  struct Node {
    Kind kind;
    std::size_t n = 0;  // Fin payload
    std::shared_ptr<const Node> l, r;
    std::size_t card = 0;
  };
  explicit FinType(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

}  // namespace qeq

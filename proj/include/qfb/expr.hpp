#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace qfb {

// Syntax error from Expr::parse; `pos` is the 0-based offset into the input.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " (at position " + std::to_string(pos) + ")"), pos_(pos) {}
  std::size_t pos() const { return pos_; }

private:
  std::size_t pos_;
};

// Evaluation outside a function's domain (log of a non-positive argument, ...).
class DomainError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvalFlags {
  bool kink = false;  // set when a max/min/abs derivative is queried exactly at a tie
};

namespace detail {
struct Node;
}

// Immutable AST of a one-variable real function of `u`.
//
// Grammar: +, -, *, /, ^ (with ^ binding tighter than unary minus and
// right-associative), the unary functions exp/log/sqrt/sin/cos/abs, the
// 2-ary functions max/min, the constant `pi`, decimal literals and `u`.
//
// max/min/abs differentiate piecewise: the active branch is selected at
// evaluation time; at a tie the right (second-argument) branch is used and
// the kink flag is raised.
class Expr {
public:
  Expr() = default;

  static Expr parse(const std::string& text);
  static Expr constant(double value);

  double eval(double u) const;
  double eval(double u, EvalFlags& flags) const;

  Expr derivative() const;

  // Parenthesised text form; parse(str()) evaluates identically.
  std::string str() const;

  // True when no occurrence of `u` is present; value written if requested.
  bool is_constant(double* value = nullptr) const;

  bool valid() const { return root_ != nullptr; }

private:
  explicit Expr(std::shared_ptr<const detail::Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const detail::Node> root_;
};

}  // namespace qfb

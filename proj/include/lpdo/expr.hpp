#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lpdo/lattice.hpp"

namespace lpdo {

/// Parsed symbol expression over k1..kn, x1..xn. Immutable; nodes are stored
/// in a flat array with the root last.
class Expression {
 public:
  enum class Op { Number, Imag, TwoPi, K, X, Add, Sub, Mul, Div, Pow, Neg, Plus, Call };
  enum class Func { Exp, Sin, Cos, Sqrt, Abs, Step };

  struct Node {
    Op op;
    double value = 0.0;  // literal, or the folded exponent of Pow
    int var = 0;         // 0-based variable index for K and X
    Func func = Func::Exp;
    int lhs = -1;
    int rhs = -1;

    bool operator==(const Node&) const = default;
  };

  /// Throws ParseError with a character offset on malformed input, and on
  /// references to k_j or x_j with j outside 1..n.
  static Expression parse(std::string_view text, int n);

  int dim() const { return dim_; }
  Complex eval(std::span<const int> k, std::span<const double> x) const;
  bool depends_on_x() const;
  bool depends_on_k() const;

  /// Fully parenthesized form; reparsing it gives a structurally equal tree.
  std::string to_string() const;
  const std::vector<Node>& nodes() const { return nodes_; }

  bool operator==(const Expression& other) const = default;

 private:
  Complex eval_node(int i, std::span<const int> k, std::span<const double> x) const;
  std::string print_node(int i) const;

  int dim_ = 0;
  std::vector<Node> nodes_;
};

}  // namespace lpdo

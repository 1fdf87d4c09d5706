#include "lpdo/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "lpdo/errors.hpp"
#include "lpdo/lattice.hpp"

namespace lpdo {

namespace {

using Op = Expression::Op;
using Func = Expression::Func;
using Node = Expression::Node;

struct FuncName {
  std::string_view name;
  Func func;
};

constexpr FuncName kFuncs[] = {{"exp", Func::Exp},   {"sin", Func::Sin}, {"cos", Func::Cos},
                               {"sqrt", Func::Sqrt}, {"abs", Func::Abs}, {"step", Func::Step}};

std::string_view func_name(Func f) {
  for (const auto& entry : kFuncs) {
    if (entry.func == f) return entry.name;
  }
  return "?";
}

// Recursive descent over
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := ('+'|'-') unary | factor
//   factor := base ('^' ('+'|'-')? base)?
class Parser {
 public:
  Parser(std::string_view text, int n, std::vector<Node>& nodes)
      : text_(text), n_(n), nodes_(nodes) {}

  void run() {
    skip();
    if (pos_ == text_.size()) fail("empty expression");
    expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int push(Node node) {
    nodes_.push_back(node);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int binary(Op op, int lhs, int rhs) { return push(Node{op, 0.0, 0, Func::Exp, lhs, rhs}); }

  int expr() {
    int lhs = term();
    while (true) {
      if (eat('+')) {
        lhs = binary(Op::Add, lhs, term());
      } else if (eat('-')) {
        lhs = binary(Op::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  int term() {
    int lhs = unary();
    while (true) {
      if (eat('*')) {
        lhs = binary(Op::Mul, lhs, unary());
      } else if (eat('/')) {
        lhs = binary(Op::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  int unary() {
    if (eat('-')) return push(Node{Op::Neg, 0.0, 0, Func::Exp, unary(), -1});
    if (eat('+')) return push(Node{Op::Plus, 0.0, 0, Func::Exp, unary(), -1});
    return factor();
  }

  int factor() {
    const int lhs = base();
    if (!eat('^')) return lhs;
    const std::size_t at = pos_;
    int rhs;
    if (eat('-')) {
      rhs = push(Node{Op::Neg, 0.0, 0, Func::Exp, base(), -1});
    } else if (eat('+')) {
      rhs = push(Node{Op::Plus, 0.0, 0, Func::Exp, base(), -1});
    } else {
      rhs = base();
    }
    Complex p;
    if (!constant(rhs, p) || p.imag() != 0.0 || !std::isfinite(p.real())) {
      throw ParseError("exponent must be a real constant", at);
    }
    return push(Node{Op::Pow, p.real(), 0, Func::Exp, lhs, rhs});
  }

  // Folds a variable-free subtree; false when it mentions k or x.
  bool constant(int i, Complex& out) const {
    if (mentions_variable(i)) return false;
    out = fold(i);
    return true;
  }

  bool mentions_variable(int i) const {
    const Node& node = nodes_[static_cast<std::size_t>(i)];
    if (node.op == Op::K || node.op == Op::X) return true;
    return (node.lhs >= 0 && mentions_variable(node.lhs)) ||
           (node.rhs >= 0 && mentions_variable(node.rhs));
  }

  Complex fold(int i) const;

  int base() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      const int inner = expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return word();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  int number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < text_.size() && (text_[q] == '+' || text_[q] == '-')) ++q;
      if (q < text_.size() && std::isdigit(static_cast<unsigned char>(text_[q]))) {
        pos_ = q;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    const auto result = std::from_chars(first, last, value);
    if (result.ec != std::errc() || result.ptr != last || !std::isfinite(value)) {
      throw ParseError("malformed number '" + std::string(first, last) + "'", start);
    }
    return push(Node{Op::Number, value, 0, Func::Exp, -1, -1});
  }

  int word() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view letters = text_.substr(start, pos_ - start);
    if ((letters == "k" || letters == "x") && pos_ < text_.size() &&
        std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      const std::size_t digits = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      int j = 0;
      const auto result = std::from_chars(text_.data() + digits, text_.data() + pos_, j);
      if (result.ec != std::errc() || j < 1 || j > n_) {
        throw ParseError("variable " + std::string(text_.substr(start, pos_ - start)) +
                             " is out of range for n=" + std::to_string(n_),
                         start);
      }
      return push(Node{letters == "k" ? Op::K : Op::X, 0.0, j - 1, Func::Exp, -1, -1});
    }
    if (letters == "i") return push(Node{Op::Imag, 0.0, 0, Func::Exp, -1, -1});
    if (letters == "twopi") return push(Node{Op::TwoPi, 0.0, 0, Func::Exp, -1, -1});
    for (const auto& entry : kFuncs) {
      if (letters == entry.name) {
        if (!eat('(')) fail("expected '(' after " + std::string(letters));
        const int arg = expr();
        if (!eat(')')) fail("expected ')'");
        return push(Node{Op::Call, 0.0, 0, entry.func, arg, -1});
      }
    }
    throw ParseError("unknown identifier '" + std::string(letters) + "'", start);
  }

  std::string_view text_;
  int n_;
  std::vector<Node>& nodes_;
  std::size_t pos_ = 0;
};

Complex apply_func(Func f, Complex a) {
  switch (f) {
    case Func::Exp: return std::exp(a);
    case Func::Sin: return std::sin(a);
    case Func::Cos: return std::cos(a);
    case Func::Sqrt: return std::sqrt(a);
    case Func::Abs: return std::abs(a);
    case Func::Step: return a.real() >= 0.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

Complex power(Complex base, double p) {
  if (p == std::round(p) && std::abs(p) <= 64.0) {
    long long e = static_cast<long long>(std::abs(p));
    Complex result = 1.0;
    Complex b = base;
    while (e > 0) {
      if (e & 1) result *= b;
      b *= b;
      e >>= 1;
    }
    return p < 0 ? 1.0 / result : result;
  }
  if (base.imag() == 0.0 && base.real() >= 0.0) return std::pow(base.real(), p);
  return std::pow(base, p);
}

Complex eval_tree(const std::vector<Node>& nodes, int i, std::span<const int> k,
                  std::span<const double> x) {
  const Node& node = nodes[static_cast<std::size_t>(i)];
  switch (node.op) {
    case Op::Number: return node.value;
    case Op::Imag: return Complex(0.0, 1.0);
    case Op::TwoPi: return 2.0 * std::numbers::pi;
    case Op::K: return static_cast<double>(k[static_cast<std::size_t>(node.var)]);
    case Op::X: {
      return torus_coordinate(x[static_cast<std::size_t>(node.var)]);
    }
    case Op::Add: return eval_tree(nodes, node.lhs, k, x) + eval_tree(nodes, node.rhs, k, x);
    case Op::Sub: return eval_tree(nodes, node.lhs, k, x) - eval_tree(nodes, node.rhs, k, x);
    case Op::Mul: return eval_tree(nodes, node.lhs, k, x) * eval_tree(nodes, node.rhs, k, x);
    case Op::Div: return eval_tree(nodes, node.lhs, k, x) / eval_tree(nodes, node.rhs, k, x);
    case Op::Pow: return power(eval_tree(nodes, node.lhs, k, x), node.value);
    case Op::Neg: return -eval_tree(nodes, node.lhs, k, x);
    case Op::Plus: return eval_tree(nodes, node.lhs, k, x);
    case Op::Call: return apply_func(node.func, eval_tree(nodes, node.lhs, k, x));
  }
  return 0.0;
}

Complex Parser::fold(int i) const { return eval_tree(nodes_, i, {}, {}); }

}  // namespace

Expression Expression::parse(std::string_view text, int n) {
  if (n < 1) throw DomainError("expression dimension must be positive");
  Expression e;
  e.dim_ = n;
  Parser(text, n, e.nodes_).run();
  return e;
}

Complex Expression::eval(std::span<const int> k, std::span<const double> x) const {
  if (static_cast<int>(k.size()) != dim_ || static_cast<int>(x.size()) != dim_) {
    throw DomainError("symbol of dimension " + std::to_string(dim_) +
                      " evaluated at a point of another dimension");
  }
  return eval_tree(nodes_, static_cast<int>(nodes_.size()) - 1, k, x);
}

bool Expression::depends_on_x() const {
  for (const Node& node : nodes_) {
    if (node.op == Op::X) return true;
  }
  return false;
}

bool Expression::depends_on_k() const {
  for (const Node& node : nodes_) {
    if (node.op == Op::K) return true;
  }
  return false;
}

std::string Expression::to_string() const { return print_node(static_cast<int>(nodes_.size()) - 1); }

std::string Expression::print_node(int i) const {
  const Node& node = nodes_[static_cast<std::size_t>(i)];
  auto wrap = [&](const char* op) {
    return "(" + print_node(node.lhs) + " " + op + " " + print_node(node.rhs) + ")";
  };
  switch (node.op) {
    case Op::Number: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", node.value);
      return buf;
    }
    case Op::Imag: return "i";
    case Op::TwoPi: return "twopi";
    case Op::K: return "k" + std::to_string(node.var + 1);
    case Op::X: return "x" + std::to_string(node.var + 1);
    case Op::Add: return wrap("+");
    case Op::Sub: return wrap("-");
    case Op::Mul: return wrap("*");
    case Op::Div: return wrap("/");
    case Op::Pow: return wrap("^");
    case Op::Neg: return "(-" + print_node(node.lhs) + ")";
    case Op::Plus: return "(+" + print_node(node.lhs) + ")";
    case Op::Call: return std::string(func_name(node.func)) + "(" + print_node(node.lhs) + ")";
  }
  return "";
}

}  // namespace lpdo

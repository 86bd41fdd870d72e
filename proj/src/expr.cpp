#include "qfb/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <utility>

namespace qfb {

namespace detail {

enum class Kind {
  Const,
  Var,
  Neg,
  Exp,
  Log,
  Sqrt,
  Sin,
  Cos,
  Abs,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Max,
  Min,
  // Selector nodes produced by differentiation of max/min/abs. They carry the
  // original operands (a, b) used to pick the branch plus the derivative
  // payloads (da, db).
  MaxSel,
  MinSel,
  AbsSel,
};

struct Node {
  Kind kind;
  double value = 0.0;
  std::shared_ptr<const Node> a, b, da, db;
};

using P = std::shared_ptr<const Node>;

namespace {

P make(Kind k, P a = nullptr, P b = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

P make_const(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->value = v;
  return n;
}

P make_sel(Kind k, P a, P b, P da, P db) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  n->da = std::move(da);
  n->db = std::move(db);
  return n;
}

[[noreturn]] void domain_fail(const char* what, double arg) {
  std::ostringstream os;
  os << what << " (argument " << arg << ")";
  throw DomainError(os.str());
}

double eval_node(const Node* n, double u, EvalFlags* flags);

double eval_pow(double base, double expo) {
  if (base == 0.0 && expo < 0.0) domain_fail("zero raised to a negative power", expo);
  if (base < 0.0) {
    // negative base only with an integer exponent
    if (expo != std::floor(expo)) domain_fail("negative base with non-integer exponent", base);
  }
  return std::pow(base, expo);
}

double eval_node(const Node* n, double u, EvalFlags* flags) {
  switch (n->kind) {
    case Kind::Const: return n->value;
    case Kind::Var: return u;
    case Kind::Neg: return -eval_node(n->a.get(), u, flags);
    case Kind::Exp: return std::exp(eval_node(n->a.get(), u, flags));
    case Kind::Log: {
      const double v = eval_node(n->a.get(), u, flags);
      if (v <= 0.0) domain_fail("log of a non-positive argument", v);
      return std::log(v);
    }
    case Kind::Sqrt: {
      const double v = eval_node(n->a.get(), u, flags);
      if (v < 0.0) domain_fail("sqrt of a negative argument", v);
      return std::sqrt(v);
    }
    case Kind::Sin: return std::sin(eval_node(n->a.get(), u, flags));
    case Kind::Cos: return std::cos(eval_node(n->a.get(), u, flags));
    case Kind::Abs: return std::abs(eval_node(n->a.get(), u, flags));
    case Kind::Add: return eval_node(n->a.get(), u, flags) + eval_node(n->b.get(), u, flags);
    case Kind::Sub: return eval_node(n->a.get(), u, flags) - eval_node(n->b.get(), u, flags);
    case Kind::Mul: return eval_node(n->a.get(), u, flags) * eval_node(n->b.get(), u, flags);
    case Kind::Div: {
      const double num = eval_node(n->a.get(), u, flags);
      const double den = eval_node(n->b.get(), u, flags);
      if (den == 0.0) domain_fail("division by zero", den);
      return num / den;
    }
    case Kind::Pow:
      return eval_pow(eval_node(n->a.get(), u, flags), eval_node(n->b.get(), u, flags));
    case Kind::Max: {
      const double va = eval_node(n->a.get(), u, flags);
      const double vb = eval_node(n->b.get(), u, flags);
      return va > vb ? va : vb;
    }
    case Kind::Min: {
      const double va = eval_node(n->a.get(), u, flags);
      const double vb = eval_node(n->b.get(), u, flags);
      return va < vb ? va : vb;
    }
    case Kind::MaxSel: {
      const double va = eval_node(n->a.get(), u, flags);
      const double vb = eval_node(n->b.get(), u, flags);
      if (va > vb) return eval_node(n->da.get(), u, flags);
      if (va < vb) return eval_node(n->db.get(), u, flags);
      if (flags) flags->kink = true;
      return eval_node(n->db.get(), u, flags);
    }
    case Kind::MinSel: {
      const double va = eval_node(n->a.get(), u, flags);
      const double vb = eval_node(n->b.get(), u, flags);
      if (va < vb) return eval_node(n->da.get(), u, flags);
      if (va > vb) return eval_node(n->db.get(), u, flags);
      if (flags) flags->kink = true;
      return eval_node(n->db.get(), u, flags);
    }
    case Kind::AbsSel: {
      const double va = eval_node(n->a.get(), u, flags);
      if (va > 0.0) return eval_node(n->da.get(), u, flags);
      if (va < 0.0) return -eval_node(n->da.get(), u, flags);
      if (flags) flags->kink = true;
      return eval_node(n->da.get(), u, flags);
    }
  }
  throw std::logic_error("unreachable expression node kind");
}

P diff_node(const P& n);

P diff_pow(const P& n) {
  // a^c with constant c: c * a^(c-1) * a'. General exponent via exp/log form.
  if (n->b->kind == Kind::Const) {
    const double c = n->b->value;
    if (c == 0.0) return make_const(0.0);
    P am1 = make(Kind::Pow, n->a, make_const(c - 1.0));
    return make(Kind::Mul, make(Kind::Mul, make_const(c), am1), diff_node(n->a));
  }
  // d(a^b) = a^b * (b' log a + b a'/a)
  P t1 = make(Kind::Mul, diff_node(n->b), make(Kind::Log, n->a));
  P t2 = make(Kind::Div, make(Kind::Mul, n->b, diff_node(n->a)), n->a);
  return make(Kind::Mul, make(Kind::Pow, n->a, n->b), make(Kind::Add, t1, t2));
}

P diff_node(const P& n) {
  switch (n->kind) {
    case Kind::Const: return make_const(0.0);
    case Kind::Var: return make_const(1.0);
    case Kind::Neg: return make(Kind::Neg, diff_node(n->a));
    case Kind::Exp: return make(Kind::Mul, make(Kind::Exp, n->a), diff_node(n->a));
    case Kind::Log: return make(Kind::Div, diff_node(n->a), n->a);
    case Kind::Sqrt:
      return make(Kind::Div, diff_node(n->a),
                  make(Kind::Mul, make_const(2.0), make(Kind::Sqrt, n->a)));
    case Kind::Sin: return make(Kind::Mul, make(Kind::Cos, n->a), diff_node(n->a));
    case Kind::Cos:
      return make(Kind::Neg, make(Kind::Mul, make(Kind::Sin, n->a), diff_node(n->a)));
    case Kind::Abs: return make_sel(Kind::AbsSel, n->a, nullptr, diff_node(n->a), nullptr);
    case Kind::Add: return make(Kind::Add, diff_node(n->a), diff_node(n->b));
    case Kind::Sub: return make(Kind::Sub, diff_node(n->a), diff_node(n->b));
    case Kind::Mul:
      return make(Kind::Add, make(Kind::Mul, diff_node(n->a), n->b),
                  make(Kind::Mul, n->a, diff_node(n->b)));
    case Kind::Div: {
      P num = make(Kind::Sub, make(Kind::Mul, diff_node(n->a), n->b),
                   make(Kind::Mul, n->a, diff_node(n->b)));
      return make(Kind::Div, num, make(Kind::Mul, n->b, n->b));
    }
    case Kind::Pow: return diff_pow(n);
    case Kind::Max: return make_sel(Kind::MaxSel, n->a, n->b, diff_node(n->a), diff_node(n->b));
    case Kind::Min: return make_sel(Kind::MinSel, n->a, n->b, diff_node(n->a), diff_node(n->b));
    case Kind::MaxSel:
      return make_sel(Kind::MaxSel, n->a, n->b, diff_node(n->da), diff_node(n->db));
    case Kind::MinSel:
      return make_sel(Kind::MinSel, n->a, n->b, diff_node(n->da), diff_node(n->db));
    case Kind::AbsSel: return make_sel(Kind::AbsSel, n->a, nullptr, diff_node(n->da), nullptr);
  }
  throw std::logic_error("unreachable expression node kind");
}

bool depends_on_u(const Node* n) {
  if (!n) return false;
  if (n->kind == Kind::Var) return true;
  return depends_on_u(n->a.get()) || depends_on_u(n->b.get()) || depends_on_u(n->da.get()) ||
         depends_on_u(n->db.get());
}

void print_node(const Node* n, std::ostream& os) {
  auto bin = [&](const char* op) {
    os << '(';
    print_node(n->a.get(), os);
    os << op;
    print_node(n->b.get(), os);
    os << ')';
  };
  auto fn1 = [&](const char* name) {
    os << name << '(';
    print_node(n->a.get(), os);
    os << ')';
  };
  switch (n->kind) {
    case Kind::Const: {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", n->value);
      if (n->value < 0) {
        os << '(' << buf << ')';
      } else {
        os << buf;
      }
      return;
    }
    case Kind::Var: os << 'u'; return;
    case Kind::Neg:
      os << "(-";
      print_node(n->a.get(), os);
      os << ')';
      return;
    case Kind::Exp: fn1("exp"); return;
    case Kind::Log: fn1("log"); return;
    case Kind::Sqrt: fn1("sqrt"); return;
    case Kind::Sin: fn1("sin"); return;
    case Kind::Cos: fn1("cos"); return;
    case Kind::Abs: fn1("abs"); return;
    case Kind::Add: bin("+"); return;
    case Kind::Sub: bin("-"); return;
    case Kind::Mul: bin("*"); return;
    case Kind::Div: bin("/"); return;
    case Kind::Pow: bin("^"); return;
    case Kind::Max:
    case Kind::Min:
      os << (n->kind == Kind::Max ? "max(" : "min(");
      print_node(n->a.get(), os);
      os << ',';
      print_node(n->b.get(), os);
      os << ')';
      return;
    case Kind::MaxSel:
    case Kind::MinSel: {
      // derivative-only selectors; printed in a function-like diagnostic form
      os << (n->kind == Kind::MaxSel ? "@maxsel(" : "@minsel(");
      print_node(n->a.get(), os);
      os << ',';
      print_node(n->b.get(), os);
      os << ',';
      print_node(n->da.get(), os);
      os << ',';
      print_node(n->db.get(), os);
      os << ')';
      return;
    }
    case Kind::AbsSel:
      os << "@abssel(";
      print_node(n->a.get(), os);
      os << ',';
      print_node(n->da.get(), os);
      os << ')';
      return;
  }
}

class Parser {
public:
  explicit Parser(const std::string& text) : text_(text) {}

  P parse() {
    P e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  P parse_sum() {
    P lhs = parse_term();
    for (;;) {
      if (eat('+')) {
        lhs = make(Kind::Add, lhs, parse_term());
      } else if (eat('-')) {
        lhs = make(Kind::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  P parse_term() {
    P lhs = parse_unary();
    for (;;) {
      if (eat('*')) {
        lhs = make(Kind::Mul, lhs, parse_unary());
      } else if (eat('/')) {
        lhs = make(Kind::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  P parse_unary() {
    if (eat('-')) return make(Kind::Neg, parse_unary());
    if (eat('+')) return parse_unary();
    return parse_power();
  }

  P parse_power() {
    P base = parse_atom();
    if (eat('^')) {
      // right-associative; the exponent may carry its own sign
      return make(Kind::Pow, base, parse_unary());
    }
    return base;
  }

  P parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      P e = parse_sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    fail(std::string("unexpected character '") + c + "'");
  }

  P parse_number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return make_const(v);
  }

  P parse_ident() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])))) ++pos_;
    const std::string name = text_.substr(start, pos_ - start);
    if (name == "u") return make(Kind::Var);
    if (name == "pi") return make_const(M_PI);

    Kind k;
    int arity = 1;
    if (name == "exp") {
      k = Kind::Exp;
    } else if (name == "log") {
      k = Kind::Log;
    } else if (name == "sqrt") {
      k = Kind::Sqrt;
    } else if (name == "sin") {
      k = Kind::Sin;
    } else if (name == "cos") {
      k = Kind::Cos;
    } else if (name == "abs") {
      k = Kind::Abs;
    } else if (name == "max") {
      k = Kind::Max;
      arity = 2;
    } else if (name == "min") {
      k = Kind::Min;
      arity = 2;
    } else {
      pos_ = start;
      fail("unknown identifier '" + name + "'");
    }
    if (!eat('(')) fail("expected '(' after function name");
    P a = parse_sum();
    P b;
    if (arity == 2) {
      if (!eat(',')) fail("expected ',' in 2-ary function call");
      b = parse_sum();
    } else if (peek() == ',') {
      fail("function takes a single argument");
    }
    if (!eat(')')) fail("expected ')'");
    return make(k, a, b);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

}  // namespace detail

Expr Expr::parse(const std::string& text) {
  detail::Parser p(text);
  return Expr(p.parse());
}

Expr Expr::constant(double value) { return Expr(detail::make_const(value)); }

double Expr::eval(double u) const { return detail::eval_node(root_.get(), u, nullptr); }

double Expr::eval(double u, EvalFlags& flags) const {
  return detail::eval_node(root_.get(), u, &flags);
}

Expr Expr::derivative() const { return Expr(detail::diff_node(root_)); }

std::string Expr::str() const {
  std::ostringstream os;
  detail::print_node(root_.get(), os);
  return os.str();
}

bool Expr::is_constant(double* value) const {
  if (detail::depends_on_u(root_.get())) return false;
  if (value) *value = eval(0.0);
  return true;
}

}  // namespace qfb

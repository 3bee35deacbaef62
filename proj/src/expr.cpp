#include "jetham/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace jetham {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, LBracket, RBracket, Comma, End };

struct Token {
  Tok kind;
  double number = 0.0;
  std::string text;
  int pos = 0;  // 1-based
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  Token next() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    int pos = static_cast<int>(i_) + 1;
    if (i_ >= s_.size()) return {Tok::End, 0.0, "", pos};
    char c = s_[i_];
    switch (c) {
      case '+': ++i_; return {Tok::Plus, 0, "+", pos};
      case '-': ++i_; return {Tok::Minus, 0, "-", pos};
      case '*': ++i_; return {Tok::Star, 0, "*", pos};
      case '/': ++i_; return {Tok::Slash, 0, "/", pos};
      case '^': ++i_; return {Tok::Caret, 0, "^", pos};
      case '(': ++i_; return {Tok::LParen, 0, "(", pos};
      case ')': ++i_; return {Tok::RParen, 0, ")", pos};
      case '[': ++i_; return {Tok::LBracket, 0, "[", pos};
      case ']': ++i_; return {Tok::RBracket, 0, "]", pos};
      case ',': ++i_; return {Tok::Comma, 0, ",", pos};
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t start = i_;
      while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) ++i_;
      if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
        size_t save = i_;
        ++i_;
        if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) ++i_;
        if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
          while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        } else {
          i_ = save;  // 'e' belongs to a following identifier, not an exponent
        }
      }
      std::string lit = s_.substr(start, i_ - start);
      double value = 0.0;
      auto rc = std::from_chars(lit.data(), lit.data() + lit.size(), value);
      if (rc.ec != std::errc() || rc.ptr != lit.data() + lit.size())
        throw SyntaxError("bad numeric literal '" + lit + "'", pos, "number");
      return {Tok::Number, value, lit, pos};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = i_;
      while (i_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
        ++i_;
      return {Tok::Ident, 0, s_.substr(start, i_ - start), pos};
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos,
                      "number, coordinate, function or operator");
  }

 private:
  const std::string& s_;
  size_t i_ = 0;
};

class Parser {
 public:
  Parser(const std::string& text, Dims dims) : lex_(text), dims_(dims) { advance(); }

  Expression run() {
    int root = parse_expr();
    expect(Tok::End, "end of input");
    return Expression(dims_, std::move(nodes_), root);
  }

 private:
  void advance() { cur_ = lex_.next(); }

  void expect(Tok k, const std::string& what) {
    if (cur_.kind != k)
      throw SyntaxError("unexpected '" + (cur_.kind == Tok::End ? std::string("<end>") : cur_.text) + "'",
                        cur_.pos, what);
    advance();
  }

  int add_node(ExprNode nd) {
    nodes_.push_back(nd);
    return static_cast<int>(nodes_.size()) - 1;
  }

  int parse_expr() {
    int lhs = parse_term();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      NodeKind op = cur_.kind == Tok::Plus ? NodeKind::Add : NodeKind::Sub;
      int pos = cur_.pos;
      advance();
      int rhs = parse_term();
      lhs = add_node({op, 0, -1, lhs, rhs, pos, 0, false});
    }
    return lhs;
  }

  int parse_term() {
    int lhs = parse_unary();
    while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
      NodeKind op = cur_.kind == Tok::Star ? NodeKind::Mul : NodeKind::Div;
      int pos = cur_.pos;
      advance();
      int rhs = parse_unary();
      lhs = add_node({op, 0, -1, lhs, rhs, pos, 0, false});
    }
    return lhs;
  }

  int parse_unary() {
    if (cur_.kind == Tok::Minus) {
      int pos = cur_.pos;
      advance();
      int inner = parse_unary();
      if (nodes_[inner].kind == NodeKind::Constant) {
        nodes_[inner].value = -nodes_[inner].value;
        return inner;
      }
      return add_node({NodeKind::Neg, 0, -1, inner, -1, pos, 0, false});
    }
    return parse_power();
  }

  int parse_power() {
    int base = parse_atom();
    if (cur_.kind == Tok::Caret) {
      int pos = cur_.pos;
      advance();
      int exponent = parse_unary();  // right-associative, unary minus allowed
      ExprNode nd{NodeKind::Pow, 0, -1, base, exponent, pos, 0, false};
      const ExprNode& e = nodes_[exponent];
      if (e.kind == NodeKind::Constant) {
        double r = std::round(e.value);
        if (std::abs(e.value - r) < 1e-9 && std::abs(r) < 1e15) {
          nd.iexp = static_cast<long long>(r);
          nd.has_iexp = true;
        }
      }
      return add_node(nd);
    }
    return base;
  }

  int parse_bracket_index(const std::string& head, int lo, int hi) {
    expect(Tok::LBracket, "'['");
    if (cur_.kind != Tok::Number || cur_.number != std::floor(cur_.number))
      throw SyntaxError("coordinate index must be an integer literal", cur_.pos, "integer");
    int idx = static_cast<int>(cur_.number);
    int pos = cur_.pos;
    advance();
    expect(Tok::RBracket, "']'");
    if (idx < lo || idx > hi) {
      std::ostringstream ranges;
      ranges << head << "[" << lo << ".." << hi << "]";
      throw UnknownCoordinateError(head + "[" + std::to_string(idx) + "]", ranges.str(), pos);
    }
    return idx;
  }

  int parse_atom() {
    switch (cur_.kind) {
      case Tok::Number: {
        ExprNode nd{NodeKind::Constant, cur_.number, -1, -1, -1, cur_.pos, 0, false};
        advance();
        return add_node(nd);
      }
      case Tok::LParen: {
        advance();
        int inner = parse_expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident:
        return parse_ident();
      default:
        throw SyntaxError("unexpected '" + (cur_.kind == Tok::End ? std::string("<end>") : cur_.text) + "'",
                          cur_.pos, "number, coordinate, function or '('");
    }
  }

  int parse_ident() {
    std::string name = cur_.text;
    int pos = cur_.pos;
    advance();

    if (name == "pi")
      return add_node({NodeKind::Constant, 3.14159265358979323846, -1, -1, -1, pos, 0, false});

    static const std::array<std::pair<const char*, NodeKind>, 8> fns = {{
        {"sin", NodeKind::Sin},
        {"cos", NodeKind::Cos},
        {"tan", NodeKind::Tan},
        {"exp", NodeKind::Exp},
        {"log", NodeKind::Log},
        {"sqrt", NodeKind::Sqrt},
        {"sinh", NodeKind::Sinh},
        {"cosh", NodeKind::Cosh},
    }};
    for (const auto& [fname, kind] : fns) {
      if (name == fname) {
        expect(Tok::LParen, "'('");
        if (cur_.kind == Tok::RParen) throw ArityError(name, 0, pos);
        int arg = parse_expr();
        if (cur_.kind == Tok::Comma) throw ArityError(name, 2, cur_.pos);
        expect(Tok::RParen, "')'");
        return add_node({kind, 0, -1, arg, -1, pos, 0, false});
      }
    }

    if (name == "t") {
      int a = parse_bracket_index("t", 1, dims_.m);
      return add_node({NodeKind::Coord, 0, dims_.coord_t(a - 1), -1, -1, pos, 0, false});
    }
    if (name == "x") {
      int i = parse_bracket_index("x", 1, dims_.n);
      return add_node({NodeKind::Coord, 0, dims_.coord_x(i - 1), -1, -1, pos, 0, false});
    }
    if (name == "p") {
      int i = parse_bracket_index("p", 1, dims_.n);
      int a = parse_bracket_index("p", 1, dims_.m);
      return add_node({NodeKind::Coord, 0, dims_.coord_p(i - 1, a - 1), -1, -1, pos, 0, false});
    }

    if (cur_.kind == Tok::LBracket) {
      std::ostringstream ranges;
      ranges << "t[1.." << dims_.m << "], x[1.." << dims_.n << "], p[1.." << dims_.n << "][1.."
             << dims_.m << "]";
      throw UnknownCoordinateError(name, ranges.str(), pos);
    }
    throw SyntaxError("unknown identifier '" + name + "'", pos,
                      "sin, cos, tan, exp, log, sqrt, sinh, cosh, pi, t[..], x[..], p[..][..]");
  }

  Lexer lex_;
  Dims dims_;
  Token cur_;
  std::vector<ExprNode> nodes_;
};

int precedence(NodeKind k) {
  switch (k) {
    case NodeKind::Add:
    case NodeKind::Sub:
      return 1;
    case NodeKind::Mul:
    case NodeKind::Div:
      return 2;
    case NodeKind::Neg:
      return 3;
    case NodeKind::Pow:
      return 4;
    default:
      return 5;
  }
}

}  // namespace

Expression Expression::constant(Dims dims, double c) {
  return Expression(dims, {{NodeKind::Constant, c, -1, -1, -1, 0, 0, false}}, 0);
}

Expression Expression::coordinate(Dims dims, int flat_index) {
  return Expression(dims, {{NodeKind::Coord, 0, flat_index, -1, -1, 0, 0, false}}, 0);
}

Expression Expression::binary(NodeKind op, const Expression& x, const Expression& y) {
  std::vector<ExprNode> nodes = x.nodes_;
  int shift = static_cast<int>(nodes.size());
  for (ExprNode nd : y.nodes_) {
    if (nd.a >= 0) nd.a += shift;
    if (nd.b >= 0) nd.b += shift;
    nodes.push_back(nd);
  }
  ExprNode top{op, 0, -1, x.root_, y.root_ + shift, 0, 0, false};
  if (op == NodeKind::Pow) {
    const ExprNode& e = nodes[top.b];
    if (e.kind == NodeKind::Constant && e.value == std::floor(e.value) &&
        std::abs(e.value) < 1e15) {
      top.iexp = static_cast<long long>(e.value);
      top.has_iexp = true;
    }
  }
  nodes.push_back(top);
  return Expression(x.dims_, std::move(nodes), static_cast<int>(nodes.size()) - 1);
}

Expression Expression::unary(NodeKind op, const Expression& x) {
  std::vector<ExprNode> nodes = x.nodes_;
  nodes.push_back({op, 0, -1, x.root_, -1, 0, 0, false});
  return Expression(x.dims_, std::move(nodes), static_cast<int>(nodes.size()) - 1);
}

bool Expression::references_only(int lo, int hi) const {
  for (const ExprNode& nd : nodes_)
    if (nd.kind == NodeKind::Coord && (nd.coord < lo || nd.coord >= hi)) return false;
  return true;
}

namespace {

void print_node(const Expression& expr, const std::vector<ExprNode>& nodes, int id,
                std::ostringstream& out, int parent_prec, bool right_side) {
  const ExprNode& nd = nodes[id];
  int prec = precedence(nd.kind);
  auto child = [&](int cid, int pprec, bool rs) { print_node(expr, nodes, cid, out, pprec, rs); };
  bool paren = prec < parent_prec || (prec == parent_prec && right_side && prec <= 2);
  switch (nd.kind) {
    case NodeKind::Constant: {
      std::ostringstream num;
      num.precision(17);
      num << nd.value;
      std::string s = num.str();
      if (nd.value < 0) {
        out << "(" << s << ")";
      } else {
        out << s;
      }
      return;
    }
    case NodeKind::Coord: {
      const Dims& d = expr.dims();
      int c = nd.coord;
      if (c < d.m) {
        out << "t[" << c + 1 << "]";
      } else if (c < d.m + d.n) {
        out << "x[" << c - d.m + 1 << "]";
      } else {
        int q = c - d.m - d.n;
        out << "p[" << d.pair_i(q) + 1 << "][" << d.pair_a(q) + 1 << "]";
      }
      return;
    }
    default:
      break;
  }
  if (paren) out << "(";
  switch (nd.kind) {
    case NodeKind::Add:
      child(nd.a, prec, false);
      out << " + ";
      child(nd.b, prec, true);
      break;
    case NodeKind::Sub:
      child(nd.a, prec, false);
      out << " - ";
      child(nd.b, prec, true);
      break;
    case NodeKind::Mul:
      child(nd.a, prec, false);
      out << "*";
      child(nd.b, prec, true);
      break;
    case NodeKind::Div:
      child(nd.a, prec, false);
      out << "/";
      child(nd.b, prec, true);
      break;
    case NodeKind::Pow:
      child(nd.a, prec + 1, false);
      out << "^";
      child(nd.b, prec, true);
      break;
    case NodeKind::Neg:
      out << "-";
      child(nd.a, prec, true);
      break;
    case NodeKind::Sin:
    case NodeKind::Cos:
    case NodeKind::Tan:
    case NodeKind::Exp:
    case NodeKind::Log:
    case NodeKind::Sqrt:
    case NodeKind::Sinh:
    case NodeKind::Cosh: {
      static const char* names[] = {"sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh"};
      out << names[static_cast<int>(nd.kind) - static_cast<int>(NodeKind::Sin)] << "(";
      print_node(expr, nodes, nd.a, out, 0, false);
      out << ")";
      break;
    }
    default:
      break;
  }
  if (paren) out << ")";
}

}  // namespace

std::string Expression::to_string() const {
  if (root_ < 0) return "0";
  std::ostringstream out;
  print_node(*this, nodes_, root_, out, 0, false);
  return out.str();
}

ScalarField parse(const std::string& text, Dims dims) {
  if (dims.m < 1 || dims.n < 1) throw Error("dimensions must be positive");
  Parser p(text, dims);
  return ScalarField(p.run());
}

double ScalarField::eval(const Point& pt) const {
  if (!(pt.dims == dims())) throw ShapeMismatchError("point dims do not match field dims");
  double r = expr_.eval<double>(pt.coords());
  if (!std::isfinite(r)) throw DomainError("expression result", r);
  return r;
}

double ScalarField::partial(std::span<const CoordRef> coords, const Point& pt) const {
  if (!(pt.dims == dims())) throw ShapeMismatchError("point dims do not match field dims");
  int order = static_cast<int>(coords.size());
  if (order > 3) throw OrderTooHighError(order);
  const Dims& d = dims();
  const int total = d.total();
  if (order == 0) return eval(pt);

  std::vector<int> flat(order);
  for (int k = 0; k < order; ++k) flat[k] = coords[k].flat(d);

  if (order == 1) {
    std::vector<D1> c(total);
    for (int j = 0; j < total; ++j) c[j] = D1(pt.c[j], j == flat[0] ? 1.0 : 0.0);
    return expr_.eval<D1>(c).d;
  }
  if (order == 2) {
    std::vector<D2> c(total);
    for (int j = 0; j < total; ++j)
      c[j] = D2(D1(pt.c[j], j == flat[0] ? 1.0 : 0.0), D1(j == flat[1] ? 1.0 : 0.0, 0.0));
    return expr_.eval<D2>(c).d.d;
  }
  std::vector<D3> c(total);
  for (int j = 0; j < total; ++j) {
    D2 v(D1(pt.c[j], j == flat[0] ? 1.0 : 0.0), D1(j == flat[1] ? 1.0 : 0.0, 0.0));
    D2 s(D1(j == flat[2] ? 1.0 : 0.0, 0.0), D1(0.0, 0.0));
    c[j] = D3(v, s);
  }
  return expr_.eval<D3>(c).d.d.d;
}

}  // namespace jetham
